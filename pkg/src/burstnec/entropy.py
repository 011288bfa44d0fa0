"""Exact entropies of the noise-erasure process and its erasure indicator.

All quantities are in bits.  The erasure-indicator process ``Ztilde`` of a
Markov noise-erasure process is in general a hidden Markov process; its
block entropies are computed by enumerating the ``2**l`` indicator
histories while carrying the exact predictive law of the next noise state.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .processes import NoiseModel, erasure_prob, ztilde_is_markov

DEFAULT_L = 16
MAX_L = 24
PRUNE = 1e-300
# frontier size above which the history tree is processed in chunks
_CHUNK = 1 << 14


class ResourceError(RuntimeError):
    pass


def entropy(p, base: float = 2.0) -> float:
    p = np.asarray(p, dtype=float)
    if p.size == 0 or p.min() < -1e-15 or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("entropy needs a normalized probability vector")
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum() / np.log(base))


def _plogp_sum(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def markov_conditional_entropy(model: NoiseModel) -> float:
    """``H(Z_2 | Z_1)`` of a Markov model."""
    if not model.is_markov:
        raise TypeError("memoryless model: use entropy(model.marginal) instead")
    rows = np.array([_plogp_sum(row) for row in model.transition])
    return float(model.marginal @ rows)


def block_entropy_Z(model: NoiseModel, n: int) -> float:
    """``H(Z^n)`` by the Markov chain rule."""
    if n < 1:
        raise ValueError("block length must be >= 1")
    h1 = entropy(model.marginal)
    if not model.is_markov:
        return n * h1
    return h1 + (n - 1) * markov_conditional_entropy(model)


def entropy_rate_Z(model: NoiseModel) -> float:
    if model.is_markov:
        return markov_conditional_entropy(model)
    return entropy(model.marginal)


def _masks(model: NoiseModel) -> np.ndarray:
    """Row 0: non-erased states, row 1: the erasure state."""
    erased = np.arange(model.n_states) == model.e
    return np.stack([~erased, erased]).astype(float)


def ztilde_pair_distribution(model: NoiseModel) -> np.ndarray:
    """2x2 joint law of ``(Ztilde_1, Ztilde_2)``; index 0 is ``0``, 1 is ``e``."""
    masks = _masks(model)
    joint = model.marginal[:, None] * model.transition
    return masks @ joint @ masks.T


def ztilde_conditional_entropy(model: NoiseModel) -> float:
    """``H(Ztilde_2 | Ztilde_1)`` from the exact pair law."""
    pair = ztilde_pair_distribution(model)
    return _plogp_sum(pair.ravel()) - binary_entropy(erasure_prob(model))


def _expand(prob: np.ndarray, pred: np.ndarray, P: np.ndarray, masks: np.ndarray, depth: int) -> np.ndarray:
    """Per-level ``-sum p log p`` over all descendants of the given nodes.

    ``prob[k]`` is the probability of history ``k`` and ``pred[k]`` the law of
    the next noise state given that history.  Returns a length-``depth``
    vector whose entry ``d`` sums over histories ``d + 1`` steps deeper.
    """
    out = np.zeros(depth)
    for d in range(depth):
        # child order (node, 0), (node, e) keeps histories lexicographic
        weighted = pred[:, None, :] * masks[None, :, :]
        mass = weighted.sum(axis=2)
        child_prob = (prob[:, None] * mass).ravel()
        keep = child_prob > PRUNE
        child_prob = child_prob[keep]
        belief = weighted.reshape(-1, pred.shape[1])[keep] / mass.ravel()[keep, None]
        out[d] = _plogp_sum(child_prob)
        prob, pred = child_prob, belief @ P
        remaining = depth - d - 1
        if remaining and prob.size > _CHUNK:
            for start in range(0, prob.size, _CHUNK):
                sl = slice(start, start + _CHUNK)
                out[d + 1 :] += _expand(prob[sl], pred[sl], P, masks, remaining)
            break
    return out


def ztilde_block_entropies(model: NoiseModel, l_max: int, cap: int = MAX_L) -> np.ndarray:
    """``H(Ztilde^l)`` for ``l = 1..l_max`` (index ``l - 1``)."""
    if l_max < 1:
        raise ValueError("block length must be >= 1")
    if l_max > cap:
        raise ResourceError(f"l={l_max} exceeds the history-tree cap {cap}")
    return _expand(np.ones(1), model.marginal[None, :].copy(), model.transition, _masks(model), l_max)


def block_entropy_Ztilde(model: NoiseModel, l: int, cap: int = MAX_L) -> float:
    """``H(Ztilde^l)`` via the forward recursion over indicator histories."""
    return float(ztilde_block_entropies(model, l, cap)[l - 1])


def ztilde_block_entropy_markov(model: NoiseModel, l: int) -> float:
    """Closed form ``H(Ztilde_1) + (l-1) H(Ztilde_2|Ztilde_1)``.

    Valid only when the indicator process is itself Markov.
    """
    return binary_entropy(erasure_prob(model)) + (l - 1) * ztilde_conditional_entropy(model)


def ztilde_history_probs(model: NoiseModel, l: int) -> np.ndarray:
    """Probabilities of all ``2**l`` indicator histories in lexicographic order.

    Unpruned; intended for small ``l``.
    """
    masks = _masks(model)
    prob = np.ones(1)
    pred = model.marginal[None, :]
    for _ in range(l):
        weighted = pred[:, None, :] * masks[None, :, :]
        mass = weighted.sum(axis=2)
        child = (prob[:, None] * mass).ravel()
        with np.errstate(invalid="ignore", divide="ignore"):
            belief = np.nan_to_num(weighted.reshape(-1, pred.shape[1]) / mass.ravel()[:, None])
        prob, pred = child, belief @ model.transition
    return prob


def ztilde_rate_lower(model: NoiseModel, l: int, cap: int = MAX_L) -> float:
    """``H(Ztilde_l | Ztilde^{l-1}, Z_0)``, a lower bound on the indicator entropy rate."""
    if l > cap:
        raise ResourceError(f"l={l} exceeds the history-tree cap {cap}")
    masks = _masks(model)
    total = np.zeros(l)
    for z0 in np.flatnonzero(model.marginal > 0):
        total += model.marginal[z0] * _expand(
            np.ones(1), model.transition[z0][None, :].copy(), model.transition, masks, l
        )
    return float(total[l - 1] - (total[l - 2] if l > 1 else 0.0))


def ztilde_rate_bounds(model: NoiseModel, l: int = DEFAULT_L, cap: int = MAX_L) -> tuple[float, float]:
    """``(lower, upper)`` bracket on the entropy rate of ``Ztilde``.

    Both ends coincide when the indicator process is Markov or memoryless.
    """
    if not model.is_markov:
        h = binary_entropy(erasure_prob(model))
        return h, h
    if ztilde_is_markov(model):
        h = ztilde_conditional_entropy(model)
        return h, h
    upper = block_entropy_Ztilde(model, l, cap) / l
    return ztilde_rate_lower(model, l, cap), upper


def Hn_sequence(model: NoiseModel, n_max: int, cap: int = MAX_L) -> np.ndarray:
    """``H_n = (H(Z^n) - H(Ztilde^n)) / n`` for ``n = 1..n_max``."""
    hz = ztilde_block_entropies(model, n_max, cap)
    n = np.arange(1, n_max + 1)
    return np.array([block_entropy_Z(model, k) for k in n]) / n - hz / n


def conditional_entropy_given_indicator(model: NoiseModel) -> float:
    """``H(Z_1 | Ztilde_1) = H(Z_1) - h_b(eps)``."""
    return entropy(model.marginal) - binary_entropy(erasure_prob(model))


def pair_mutual_informations(model: NoiseModel) -> tuple[float, float]:
    """``(I(Z_1; Z_2), I(Ztilde_1; Ztilde_2))`` from exact pair laws."""
    h1 = entropy(model.marginal)
    i_z = 2 * h1 - _plogp_sum((model.marginal[:, None] * model.transition).ravel())
    hb = binary_entropy(erasure_prob(model))
    i_zt = 2 * hb - _plogp_sum(ztilde_pair_distribution(model).ravel())
    return float(i_z), float(i_zt)


@dataclass
class MemoryGain:
    """``C - C^DMC`` as a bracket; ``lower == upper`` when exact."""

    lower: float
    upper: float
    strict: bool

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def memory_strictness(model: NoiseModel) -> bool:
    """Two positive-mass noise states with different next-noise rows."""
    if not model.is_markov:
        return False
    q = model.q
    states = [z for z in range(q) if model.marginal[z] > 0]
    P = model.transition
    for i, a in enumerate(states):
        for b in states[i + 1 :]:
            if np.any(np.abs(P[a, :q] - P[b, :q]) > 0):
                return True
    return False


def memory_gain(model: NoiseModel, l: int = DEFAULT_L) -> MemoryGain:
    if not model.is_markov:
        return MemoryGain(0.0, 0.0, False)
    base = conditional_entropy_given_indicator(model) - entropy_rate_Z(model)
    lo, hi = ztilde_rate_bounds(model, l)
    return MemoryGain(base + lo, base + hi, memory_strictness(model))


@dataclass
class EntropyReport:
    n: int
    H_Z_block: float
    H_Ztilde_block: float
    H_n: float
    entropy_rate_Z: float
    Ztilde_rate_upper: float
    Ztilde_rate_lower: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def entropy_report(model: NoiseModel, n: int) -> EntropyReport:
    hz = block_entropy_Z(model, n)
    hzt = block_entropy_Ztilde(model, n)
    return EntropyReport(
        n=n,
        H_Z_block=hz,
        H_Ztilde_block=hzt,
        H_n=(hz - hzt) / n,
        entropy_rate_Z=entropy_rate_Z(model),
        Ztilde_rate_upper=hzt / n,
        Ztilde_rate_lower=ztilde_rate_lower(model, n) if model.is_markov else hzt / n,
    )
