"""Monte Carlo checks of the exact channel matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelFunction
from .nfold import build_nfold
from .processes import NoiseModel


def sample_blocks(model: NoiseModel, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent stationary noise blocks of length ``n``."""
    k = model.n_states
    out = np.empty((count, n), dtype=np.int64)
    out[:, 0] = rng.choice(k, size=count, p=model.marginal)
    cum = np.cumsum(model.transition, axis=1)
    cum[:, -1] = 1.0
    for i in range(1, n):
        u = rng.random(count)
        out[:, i] = (u[:, None] > cum[out[:, i - 1]]).sum(axis=1)
    return out


@dataclass
class MatrixAgreement:
    """Empirical vs exact conditional probabilities, cell by cell."""

    exact: np.ndarray
    empirical: np.ndarray
    counts: np.ndarray
    z_scores: np.ndarray

    @property
    def max_z(self) -> float:
        return float(np.nanmax(np.abs(self.z_scores)))

    def within(self, sigmas: float = 3.0) -> bool:
        return self.max_z <= sigmas


def _agreement(exact: np.ndarray, inputs: np.ndarray, outputs: np.ndarray) -> MatrixAgreement:
    rows, cols = exact.shape
    hist = np.bincount(inputs * cols + outputs, minlength=rows * cols).reshape(rows, cols)
    counts = hist.sum(axis=1)
    emp = hist / np.maximum(counts, 1)[:, None]
    sd = np.sqrt(exact * (1 - exact) / np.maximum(counts, 1)[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sd > 0, (emp - exact) / sd, np.where(emp == exact, 0.0, np.inf))
    return MatrixAgreement(exact, emp, counts, z)


def _block_index(blocks: np.ndarray, base: int) -> np.ndarray:
    return blocks @ (base ** np.arange(blocks.shape[1] - 1, -1, -1))


def simulate_nfold(cf: ChannelFunction, model: NoiseModel, n: int, samples: int, seed: int) -> MatrixAgreement:
    """Uniform random inputs through sampled noise blocks vs ``build_nfold``."""
    rng = np.random.default_rng(seed)
    q = cf.q
    x = rng.integers(0, q, size=(samples, n))
    z = sample_blocks(model, n, samples, rng)
    y = cf.theta_table()[x, z]
    exact = build_nfold(cf, model, n).entries
    return _agreement(exact, _block_index(x, q), _block_index(y, q + 1))


def feedback_rollout(cf: ChannelFunction, v: np.ndarray, z: np.ndarray, s_tilde: int, fallback: int = 0):
    """Apply the fixed feedback rule; returns ``(x, y)`` blocks."""
    x = v.copy()
    if v.shape[1] > 1:
        x[:, 1:] = np.where(z[:, :-1] == s_tilde, fallback, v[:, 1:])
    return x, cf.theta_table()[x, z]


@dataclass
class FeedbackSimulation:
    agreement: MatrixAgreement
    mean_cost: float
    cost_std_error: float


def simulate_feedback(cf: ChannelFunction, model: NoiseModel, n: int, s_tilde: int, samples: int, seed: int,
                      p_v=None, costs=None) -> FeedbackSimulation:
    """Trajectory simulation of the induced channel ``P(y^n | v^n)``.

    ``p_v`` is a law over lexicographic ``v^n`` (uniform if omitted);
    ``costs`` a per-symbol cost table (linear if omitted).  The reported
    cost is the per-symbol average of ``b(X^n)``.
    """
    from .bounds import induced_feedback_channel

    rng = np.random.default_rng(seed)
    q = cf.q
    nv = q**n
    p_v = np.full(nv, 1.0 / nv) if p_v is None else np.asarray(p_v, dtype=float)
    v_idx = rng.choice(nv, size=samples, p=p_v)
    v = (v_idx[:, None] // q ** np.arange(n - 1, -1, -1)) % q
    z = sample_blocks(model, n, samples, rng)
    x, y = feedback_rollout(cf, v, z, s_tilde)
    b = np.arange(q, dtype=float) if costs is None else np.asarray(costs, dtype=float)
    per_symbol = b[x].sum(axis=1) / n
    exact = induced_feedback_channel(cf, model, n, s_tilde)
    agreement = _agreement(exact, v_idx, _block_index(y, q + 1))
    return FeedbackSimulation(agreement, float(per_symbol.mean()), float(per_symbol.std(ddof=1) / np.sqrt(samples)))


@dataclass
class PathStatistics:
    samples: int
    erasure_rate: float
    state_frequencies: np.ndarray
    pair_frequencies: np.ndarray


def path_statistics(path: np.ndarray, n_states: int) -> PathStatistics:
    freq = np.bincount(path, minlength=n_states) / path.size
    pairs = np.bincount(path[:-1] * n_states + path[1:], minlength=n_states**2).reshape(n_states, n_states)
    return PathStatistics(path.size, float(freq[-1]), freq, pairs / (path.size - 1))
