"""Blahut-Arimoto iterations for capacity and capacity-cost of a DMC."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LN2 = np.log(2.0)


class ConvergenceError(RuntimeError):
    pass


def mutual_information(p, W) -> float:
    """``I(X;Y)`` in bits for input law ``p`` and row-stochastic ``W``."""
    p = np.asarray(p, dtype=float)
    W = np.asarray(W, dtype=float)
    qy = p @ W
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W > 0, W / qy, 1.0)
        terms = np.where(W > 0, W * np.log2(ratio), 0.0)
    return float(p @ terms.sum(axis=1))


@dataclass
class BAResult:
    """One Lagrangian point.

    ``rate`` and ``beta`` are per channel use (block values divided by
    ``block_length``).  ``lower``/``upper`` bracket the per-use Lagrangian
    value ``max_p I/n - slope * E[c]/n``; ``gap = upper - lower`` is the
    duality certificate.
    """

    beta: float
    rate: float
    p: np.ndarray
    slope: float
    iterations: int
    converged: bool
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @property
    def lagrangian(self) -> float:
        return self.rate - self.slope * self.beta


def _certificate(p, W, wlogw, penalty):
    """BA bounds (nats, block level) and the current exponent vector."""
    qy = p @ W
    with np.errstate(divide="ignore"):
        logq = np.log(np.maximum(qy, 1e-300))
    expo = wlogw - W @ logq - penalty
    shift = expo.max()
    w = np.exp(expo - shift)
    z = p @ w
    return np.log(z) + shift, shift, expo, w / z


def _objective(p, W, wlogw, penalty) -> float:
    qy = p @ W
    nz = qy > 0
    return float(p @ (wlogw - penalty) - qy[nz] @ np.log(qy[nz]))


def _newton_direction(Ws, qy, grad):
    """Newton step for the Lagrangian restricted to rows ``Ws``, summing to zero."""
    k = Ws.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = -(Ws / qy) @ Ws.T - 1e-13 * np.eye(k)
    K[:k, k] = -1.0
    K[k, :k] = 1.0
    rhs = np.concatenate([-grad, [0.0]])
    try:
        return np.linalg.solve(K, rhs)[:k]
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(K, rhs, rcond=None)[0][:k]


def _newton_polish(p, W, wlogw, penalty, stop, max_iter=200):
    """Projected active-set Newton ascent of ``I - slope*E[c]`` on the simplex.

    Returns ``(p, iterations, converged)``; convergence is judged by the same
    BA certificate ``stop(lower, upper)`` used by the plain iteration.
    """
    p = np.where(p < 1e-9 * p.max(), 0.0, p)
    p /= p.sum()
    for it in range(1, max_iter + 1):
        lower, upper, expo, _ = _certificate(p, W, wlogw, penalty)
        if stop(lower, upper):
            return p, it, True
        support = p > 0
        lam = expo[support] @ p[support]
        support |= expo > lam
        qy = np.maximum(p @ W, 1e-300)
        while True:
            idx = np.flatnonzero(support)
            d = _newton_direction(W[idx], qy, expo[idx])
            # zero-mass members may only enter with a positive step
            stuck = (p[idx] == 0) & (d < 0)
            if not stuck.any():
                break
            support[idx[stuck]] = False
        base = _objective(p, W, wlogw, penalty)
        gap = upper - lower
        t = 1.0
        while t > 1e-6:
            cand = p.copy()
            cand[idx] = np.maximum(p[idx] + t * d, 0.0)
            cand /= cand.sum()
            value = _objective(cand, W, wlogw, penalty)
            if value > base:
                break
            # objective flat to roundoff: accept if the certified gap shrinks
            if value >= base - 1e-14 * max(1.0, abs(base)):
                lo, up, _, _ = _certificate(cand, W, wlogw, penalty)
                if up - lo < gap:
                    break
            t *= 0.5
        else:
            # exact ratio-test step along the feasible direction
            neg = d < 0
            if not neg.any():
                return p, it, False
            ratios = -p[idx][neg] / d[neg]
            cand = p.copy()
            cand[idx] = np.maximum(p[idx] + ratios.min() * d, 0.0)
            cand[idx[neg][np.argmin(ratios)]] = 0.0
            cand /= cand.sum()
            if _objective(cand, W, wlogw, penalty) < base:
                return p, it, False
        p = cand
    return p, max_iter, False


def blahut_cost(
    W,
    cost=None,
    slope: float = 0.0,
    block_length: int = 1,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    init=None,
    warmup: int = 200,
) -> BAResult:
    """Maximise ``I(X;Y) - slope * E[cost(X)]`` over the input law.

    ``W`` is ``|X| x |Y|``; ``cost`` is a block cost per input row (zero if
    omitted).  Plain Blahut-Arimoto updates run first; if the certified gap
    (bits per use) is still above ``tol * max(1, |lagrangian|)`` after
    ``warmup`` sweeps, an active-set Newton polish takes over, falling back
    to further BA sweeps if it stalls.  Non-convergence is reported via
    ``converged=False`` rather than raised.
    """
    W = np.asarray(W, dtype=float)
    W = W[:, W.sum(axis=0) > 0]
    nx = W.shape[0]
    c = np.zeros(nx) if cost is None else np.asarray(cost, dtype=float)
    if c.shape != (nx,):
        raise ValueError(f"cost vector must have length {nx}")
    with np.errstate(divide="ignore"):
        wlogw = np.where(W > 0, W * np.log(np.where(W > 0, W, 1.0)), 0.0).sum(axis=1)
    p = np.full(nx, 1.0 / nx) if init is None else np.asarray(init, dtype=float).copy()
    p /= p.sum()
    # slope is in bits per unit cost; the iteration itself runs in nats
    penalty = slope * LN2 * c
    scale = LN2 * block_length

    def stop(lower, upper):
        return (upper - lower) / scale < tol * max(1.0, abs(lower) / scale)

    converged = False
    polished = False
    it = 0
    while it < max_iter:
        it += 1
        lower, upper, _, ratio = _certificate(p, W, wlogw, penalty)
        if stop(lower, upper):
            converged = True
            break
        p = p * ratio
        if it == warmup and not polished:
            polished = True
            cand, used, ok = _newton_polish(p, W, wlogw, penalty, stop)
            it += used
            if ok or _objective(cand, W, wlogw, penalty) >= _objective(p, W, wlogw, penalty):
                p = cand
            if ok:
                converged = True
                break
    lower, upper, _, _ = _certificate(p, W, wlogw, penalty)
    rate = mutual_information(p, W) / block_length
    beta = float(p @ c) / block_length
    return BAResult(beta, rate, p, slope, it, converged, float(lower / scale), float(upper / scale))


def channel_capacity(W, tol: float = 1e-10, max_iter: int = 100_000) -> BAResult:
    return blahut_cost(W, tol=tol, max_iter=max_iter)
