"""Stationary noise-erasure processes over ``(0, ..., q-1, e)``.

A :class:`NoiseModel` is either memoryless (i.i.d. with a given marginal)
or a stationary first-order Markov chain.  Markov chains always start from
their stationary distribution; a supplied initial distribution that is not
stationary is rejected.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

STOCHASTIC_TOL = 1e-12
STATIONARY_TOL = 1e-10
CONDITION_TOL = 1e-12


class ModelError(ValueError):
    pass


class DegenerateChainError(ModelError):
    pass


def _check_stochastic(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ModelError(f"transition matrix must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)) or matrix.min() < 0:
        raise ModelError("transition probabilities must be finite and non-negative")
    sums = matrix.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > STOCHASTIC_TOL)
    if bad.size:
        raise ModelError(f"row {bad[0]} sums to {sums[bad[0]]!r}, not 1")


def stationary_distribution(transition) -> np.ndarray:
    """Unique stationary distribution ``pi`` of a row-stochastic matrix.

    Raises :class:`DegenerateChainError` when ``I - P`` has a null space of
    dimension larger than one, i.e. the stationary law is not unique.
    """
    P = np.asarray(transition, dtype=float)
    _check_stochastic(P)
    k = P.shape[0]
    A = np.eye(k) - P
    if np.linalg.matrix_rank(A, tol=1e-10) != k - 1:
        raise DegenerateChainError("stationary distribution is not unique")
    # replace one balance equation by the normalisation constraint
    M = A.T.copy()
    M[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    pi = np.linalg.solve(M, rhs)
    pi[np.abs(pi) < 1e-15] = 0.0
    if pi.min() < -1e-12:
        raise DegenerateChainError("linear solve produced a negative stationary mass")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    # one refinement step; solve residual is ~1e-16 on desk-sized chains
    pi = pi @ P
    pi /= pi.sum()
    residual = np.max(np.abs(pi @ P - pi))
    if residual > STOCHASTIC_TOL:
        raise DegenerateChainError(f"stationary residual {residual:.3e} too large")
    return pi


@dataclass(frozen=True)
class NoiseModel:
    """Stationary noise-erasure process; state order ``(0, ..., q-1, e)``.

    For memoryless models ``transition`` holds ``q+1`` copies of the
    marginal, so Markov code paths apply unchanged.
    """

    q: int
    kind: str
    marginal: np.ndarray = field(repr=False)
    transition: np.ndarray = field(repr=False)

    @property
    def e(self) -> int:
        return self.q

    @property
    def n_states(self) -> int:
        return self.q + 1

    @property
    def is_markov(self) -> bool:
        return self.kind == "markov"

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.marginal > 0)

    def is_ergodic(self) -> bool:
        """Irreducible and aperiodic on the positive-mass states."""
        s = self.support
        sub = self.transition[np.ix_(s, s)] > 0
        ncomp, _ = connected_components(sub, directed=True, connection="strong")
        if ncomp != 1:
            return False
        # primitive iff some power is strictly positive (Wielandt bound)
        k = len(s)
        power = np.linalg.matrix_power(sub.astype(float), (k - 1) ** 2 + 1)
        return bool(np.all(power > 0))

    def to_dict(self) -> dict:
        if self.is_markov:
            return {"q": self.q, "kind": "markov", "transition": self.transition.tolist()}
        return {"q": self.q, "kind": "memoryless", "marginal": self.marginal.tolist()}


def markov_model(transition, q: int | None = None, initial=None) -> NoiseModel:
    """Stationary Markov noise-erasure model from a ``(q+1) x (q+1)`` matrix."""
    P = np.array(transition, dtype=float)
    _check_stochastic(P)
    if q is None:
        q = P.shape[0] - 1
    if P.shape[0] != q + 1:
        raise ModelError(f"transition matrix must be {q + 1}x{q + 1} for q={q}")
    if q < 2:
        raise ModelError(f"alphabet size must be >= 2, got {q}")
    pi = stationary_distribution(P)
    if initial is not None:
        init = np.asarray(initial, dtype=float)
        if init.shape != pi.shape or np.max(np.abs(init - pi)) > STATIONARY_TOL:
            raise ModelError("initial distribution is not the stationary distribution")
    P.setflags(write=False)
    pi.setflags(write=False)
    return NoiseModel(q=q, kind="markov", marginal=pi, transition=P)


def memoryless_model(marginal, q: int | None = None) -> NoiseModel:
    p = np.array(marginal, dtype=float)
    if p.ndim != 1:
        raise ModelError("marginal must be a vector")
    if q is None:
        q = p.size - 1
    if p.size != q + 1:
        raise ModelError(f"marginal must have length {q + 1} for q={q}")
    if q < 2:
        raise ModelError(f"alphabet size must be >= 2, got {q}")
    if not np.all(np.isfinite(p)) or p.min() < 0 or abs(p.sum() - 1.0) > STOCHASTIC_TOL:
        raise ModelError("marginal must be a probability vector")
    P = np.tile(p, (q + 1, 1))
    p.setflags(write=False)
    P.setflags(write=False)
    return NoiseModel(q=q, kind="memoryless", marginal=p, transition=P)


def memoryless_counterpart(model: NoiseModel) -> NoiseModel:
    """I.i.d. process with the same marginal as ``model``."""
    return memoryless_model(model.marginal, q=model.q)


def model_from_dict(data: dict) -> NoiseModel:
    """Build a model from the JSON config schema.

    ``{"q": int, "kind": "markov", "transition": [[...]]}`` or
    ``{"q": int, "kind": "memoryless", "marginal": [...]}``; an optional
    ``"initial"`` entry for Markov models must equal the stationary law.
    """
    if not isinstance(data, dict):
        raise ModelError("model config must be a JSON object")
    try:
        q = int(data["q"])
        kind = data["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"model config needs integer 'q' and 'kind': {exc}") from None
    try:
        if kind == "markov":
            return markov_model(data["transition"], q=q, initial=data.get("initial"))
        if kind == "memoryless":
            return memoryless_model(data["marginal"], q=q)
    except KeyError as exc:
        raise ModelError(f"model config missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"malformed model config: {exc}") from None
    raise ModelError(f"unknown model kind {kind!r}")


def erasure_prob(model: NoiseModel) -> float:
    return float(model.marginal[model.e])


def block_prob(model: NoiseModel, z_block) -> float:
    """Probability of a noise-erasure block (symbols with ``e == q``)."""
    z = [int(s) for s in z_block]
    if not z:
        raise ModelError("block length must be >= 1")
    p = model.marginal[z[0]]
    for a, b in zip(z, z[1:]):
        p *= model.transition[a, b]
    return float(p)


def block_probs(model: NoiseModel, n: int) -> np.ndarray:
    """All ``(q+1)**n`` block probabilities as an n-dimensional array.

    Axis ``i`` indexes ``z_{i+1}``; ``ravel()`` gives lexicographic order.
    """
    joint = np.array(model.marginal, dtype=float)
    for _ in range(n - 1):
        joint = joint[..., :, None] * model.transition
    return joint


def auxiliary_block(z_block, q: int) -> tuple[int, ...]:
    """Map each symbol to ``e`` if erased and to ``0`` otherwise."""
    return tuple(q if int(s) == q else 0 for s in z_block)


def auxiliary_block_prob(model: NoiseModel, ztilde_block) -> float:
    """Probability of an erasure-indicator block over ``{0, e}``.

    Forward summation over the ``q+1`` hidden states.
    """
    e = model.e
    bits = [int(s) for s in ztilde_block]
    if any(s not in (0, e) for s in bits):
        raise ModelError("auxiliary blocks take values in {0, e}")
    masks = {0: np.arange(model.n_states) != e, e: np.arange(model.n_states) == e}
    alpha = np.where(masks[bits[0]], model.marginal, 0.0)
    for s in bits[1:]:
        alpha = np.where(masks[s], alpha @ model.transition, 0.0)
    return float(alpha.sum())


def sample_path(model: NoiseModel, n: int, seed: int) -> np.ndarray:
    """Draw a length-``n`` noise-erasure path with a private generator."""
    if n < 1:
        raise ModelError("path length must be >= 1")
    rng = np.random.default_rng(seed)
    if not model.is_markov:
        return rng.choice(model.n_states, size=n, p=model.marginal)
    u = rng.random(n)
    cum = [list(np.cumsum(row)[:-1]) for row in model.transition]
    first = list(np.cumsum(model.marginal)[:-1])
    out = np.empty(n, dtype=np.int64)
    state = bisect.bisect_right(first, u[0])
    out[0] = state
    for i in range(1, n):
        state = bisect.bisect_right(cum[state], u[i])
        out[i] = state
    return out


@dataclass(frozen=True)
class ErasurePattern:
    """Set of erased positions (1-based) within a block of length ``n``."""

    n: int
    mask: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.mask)) != len(self.mask):
            raise ValueError("duplicate erased positions")
        if any(not 1 <= i <= self.n for i in self.mask):
            raise ValueError(f"erased positions must lie in 1..{self.n}")

    def ztilde_block(self, q: int) -> tuple[int, ...]:
        erased = set(self.mask)
        return tuple(q if i in erased else 0 for i in range(1, self.n + 1))


def erasure_patterns(n: int) -> list[ErasurePattern]:
    """All ``2**n`` patterns, ordered like lexicographic blocks over ``{0, e}``."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        out.append(ErasurePattern(n, tuple(i + 1 for i, b in enumerate(bits) if b)))
    return out


@dataclass
class ConditionCheck:
    holds: bool
    eps_prime: float | None
    violations: list[str]


def check_theorem6_conditions(model: NoiseModel, s_tilde: int) -> ConditionCheck:
    """Check the uniform-row and constant-erasure-column conditions.

    Row ``s_tilde`` must be ``((1-eps')/q, ..., (1-eps')/q, eps')`` and
    ``P(e | z) = eps'`` for every non-erasure state ``z``.
    """
    q, e = model.q, model.e
    if not 0 <= s_tilde < q:
        return ConditionCheck(False, None, [f"s_tilde={s_tilde} is not a noise state in 0..{q - 1}"])
    P = model.transition
    eps = float(P[s_tilde, e])
    violations = []
    if not model.is_markov:
        violations.append("model is not a Markov chain")
    if not model.is_ergodic():
        violations.append("chain is not irreducible and aperiodic")
    target = (1.0 - eps) / q
    for z in range(q):
        if abs(P[s_tilde, z] - target) > CONDITION_TOL:
            violations.append(f"P({z}|{s_tilde})={P[s_tilde, z]:.12g} != (1-eps')/q={target:.12g}")
    for z in range(q):
        if abs(P[z, e] - eps) > CONDITION_TOL:
            violations.append(f"P(e|{z})={P[z, e]:.12g} != eps'={eps:.12g}")
    return ConditionCheck(not violations, eps, violations)


def ztilde_is_markov(model: NoiseModel) -> bool:
    """True when ``P(e | z)`` is the same for all positive-mass non-erasure states.

    This makes the erasure-indicator process a Markov chain itself.
    """
    if not model.is_markov:
        return True
    q, e = model.q, model.e
    states = [z for z in range(q) if model.marginal[z] > 0]
    if not states:
        return True
    col = model.transition[states, e]
    return bool(np.max(col) - np.min(col) <= CONDITION_TOL)
