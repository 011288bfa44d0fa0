"""Capacity-cost curves with and without feedback.

Curves are traced in the Lagrangian parametrisation: for a cost level
``beta`` the value is ``min_{s >= 0} F(s) + s * beta`` where
``F(s) = max_P I/n - s E[cost]/n`` comes from :func:`blahut_cost`.  The
one-dimensional minimisation over ``s`` uses bounded Brent search
(golden-section with parabolic steps), which is valid because the dual
function is convex in ``s``.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .blahut import BAResult, blahut_cost, mutual_information
from .channel import ChannelFunction
from .entropy import (
    binary_entropy,
    block_entropy_Z,
    block_entropy_Ztilde,
    entropy_rate_Z,
    ztilde_block_entropy_markov,
)
from .nfold import MAX_ENTRIES, ResourceCapError, build_nfold, block_index_table
from .processes import NoiseModel, block_probs, check_theorem6_conditions, erasure_prob, ztilde_is_markov

SIGN_NOTE = (
    "max_P H(Y) = (1-eps) log q + h_b(eps), attained by the uniform input; "
    "the binary-entropy term enters with a plus sign"
)


@dataclass(frozen=True)
class CostSpec:
    """Per-symbol input cost ``b(x)`` for ``x = 0..q-1``."""

    costs: tuple[float, ...]

    def __post_init__(self):
        if len(self.costs) < 2 or not all(np.isfinite(self.costs)) or min(self.costs) < 0:
            raise ValueError("cost table needs q >= 2 finite non-negative entries")

    @property
    def q(self) -> int:
        return len(self.costs)

    @property
    def beta_min(self) -> float:
        return float(min(self.costs))

    @property
    def beta_max(self) -> float:
        """Average cost under the uniform input."""
        return float(np.mean(self.costs))

    def block_costs(self, n: int) -> np.ndarray:
        """``b(x^n) = sum_i b(x_i)`` over lexicographic ``x^n``."""
        b = np.asarray(self.costs, dtype=float)
        total = np.zeros(1)
        for _ in range(n):
            total = (total[:, None] + b[None, :]).ravel()
        return total


def linear_cost(q: int) -> CostSpec:
    return CostSpec(tuple(float(x) for x in range(q)))


@dataclass
class CurvePoint:
    beta: float
    rate: float
    slope: float
    converged: bool
    iterations: int


@dataclass
class BoundCurve:
    n: int
    kind: str
    points: list[CurvePoint] = field(default_factory=list)

    @property
    def betas(self) -> np.ndarray:
        return np.array([p.beta for p in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([p.rate for p in self.points])

    @property
    def converged(self) -> bool:
        return all(p.converged for p in self.points)

    def shifted(self, kind: str, offset: float) -> "BoundCurve":
        pts = [CurvePoint(p.beta, p.rate + offset, p.slope, p.converged, p.iterations) for p in self.points]
        return BoundCurve(self.n, kind, pts)


CSV_COLUMNS = ["n", "kind", "beta", "rate_bits", "slope", "converged", "iterations"]


def curves_to_csv(curves, fh=None) -> str:
    """Write curves in the documented CSV layout; returns the text."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in curves:
        for p in c.points:
            w.writerow([c.n, c.kind, repr(p.beta), repr(p.rate), repr(p.slope), int(p.converged), p.iterations])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def is_concave_monotone(curve: BoundCurve, slack: float = 1e-9) -> bool:
    """Non-decreasing with non-increasing chord slopes on the sampled grid."""
    b, r = curve.betas, curve.rates
    order = np.argsort(b)
    b, r = b[order], r[order]
    if np.any(np.diff(r) < -slack):
        return False
    if len(b) < 3:
        return True
    # second divided difference scaled to an absolute value deviation
    d = np.diff(b)
    mid = r[1:-1] - (r[:-2] * d[1:] + r[2:] * d[:-1]) / (d[:-1] + d[1:])
    return bool(np.all(mid >= -slack))


class _Solver:
    """Caches Blahut-Arimoto solves for one channel/cost pair."""

    def __init__(self, W, block_cost, n, tol, max_iter):
        self.W = np.asarray(W, dtype=float)
        self.cost = np.asarray(block_cost, dtype=float)
        self.n = n
        self.tol = tol
        self.max_iter = max_iter
        self.warm = None
        self.iterations = 0
        self.converged = True

    def solve(self, s: float) -> BAResult:
        # a warm start is already close, so hand over to the Newton polish early
        warmup = 200 if self.warm is None else 20
        res = blahut_cost(self.W, self.cost, s, self.n, self.tol, self.max_iter, init=self.warm, warmup=warmup)
        # keep the warm start strictly positive so every symbol stays reachable
        self.warm = 0.5 * res.p + 0.5 / len(res.p)
        self.iterations += res.iterations
        self.converged &= res.converged
        return res

    def cheapest_rate(self) -> tuple[float, bool, int]:
        keep = self.cost <= self.cost.min() + 1e-12
        if keep.sum() == 1:
            return 0.0, True, 0
        res = blahut_cost(self.W[keep], None, 0.0, self.n, self.tol, self.max_iter)
        return res.rate, res.converged, res.iterations


def _u_to_slope(u: float) -> float:
    return u / (1.0 - u)


def capacity_cost_curve(W, block_cost, n: int, grid, kind: str = "nonfeedback",
                        tol: float = 1e-10, max_iter: int = 100_000) -> BoundCurve:
    """``max { I/n : E[cost]/n <= beta }`` on ``grid`` for a block channel ``W``."""
    solver = _Solver(W, block_cost, n, tol, max_iter)
    beta_min = solver.cost.min() / n
    top = solver.solve(0.0)
    points: dict[int, CurvePoint] = {}
    order = np.argsort(-np.asarray(grid, dtype=float))
    for k in order:
        beta = float(grid[k])
        solver.iterations, solver.converged = 0, True
        if beta < beta_min - 1e-12:
            raise ValueError(f"beta={beta} below the minimum cost {beta_min}")
        if beta >= top.beta:
            points[k] = CurvePoint(beta, top.rate, 0.0, top.converged, top.iterations)
            continue
        if beta <= beta_min + 1e-12:
            rate, ok, its = _Solver(W, block_cost, n, tol, max_iter).cheapest_rate()
            points[k] = CurvePoint(beta, rate, float("inf"), ok, its)
            continue

        def dual(u, beta=beta):
            s = _u_to_slope(u)
            res = solver.solve(s)
            return res.lower + s * beta

        # bracket: smallest u whose solution already undershoots beta
        hi = 0.5
        while solver.solve(_u_to_slope(hi)).beta > beta and hi < 1 - 1e-12:
            hi = 1 - (1 - hi) / 4
        opt = minimize_scalar(dual, bounds=(0.0, hi), method="bounded", options={"xatol": 1e-11, "maxiter": 500})
        s = _u_to_slope(opt.x)
        res = solver.solve(s)
        value = min(float(opt.fun), res.lower + s * beta)
        points[k] = CurvePoint(beta, value, s, solver.converged and opt.success, solver.iterations)
    return BoundCurve(n, kind, [points[k] for k in range(len(grid))])


def zs_gap(model: NoiseModel, n: int) -> float:
    """``Delta_n = H(Z^n)/n - entropy rate of Z``."""
    return block_entropy_Z(model, n) / n - entropy_rate_Z(model)


def curve_nonfeedback(cf: ChannelFunction, model: NoiseModel, n: int, cost: CostSpec, grid, **kw) -> BoundCurve:
    m = build_nfold(cf, model, n)
    return capacity_cost_curve(m.entries, cost.block_costs(n), n, grid, "nonfeedback", **kw)


def curve_upper(cf: ChannelFunction, model: NoiseModel, n: int, cost: CostSpec, grid,
                nonfeedback: BoundCurve | None = None, **kw) -> BoundCurve:
    base = curve_nonfeedback(cf, model, n, cost, grid, **kw) if nonfeedback is None else nonfeedback
    return base.shifted("upper", zs_gap(model, n))


def _check_s_tilde(model: NoiseModel, s_tilde: int) -> None:
    if not 0 <= s_tilde < model.q:
        raise ValueError(f"s_tilde must be a noise state in 0..{model.q - 1}")


def feedback_trajectories(cf: ChannelFunction, n: int, s_tilde: int, fallback: int = 0):
    """Index arrays for the rule ``x_1 = v_1``, ``x_i = fallback if z_{i-1} == s_tilde else v_i``.

    Returns ``(x_idx, y_idx)`` of shape ``(q**n, (q+1)**n)`` giving the
    lexicographic input and output block indices for each ``(v^n, z^n)``.
    """
    q = cf.q
    V = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    Z = np.array(list(itertools.product(range(q + 1), repeat=n)), dtype=np.int64)
    X = np.broadcast_to(V[:, None, :], (len(V), len(Z), n)).copy()
    if n > 1:
        hit = Z[:, :-1] == s_tilde
        X[:, :, 1:] = np.where(hit[None, :, :], fallback, X[:, :, 1:])
    Y = cf.theta_table()[X, Z[None, :, :]]
    weights_x = q ** np.arange(n - 1, -1, -1)
    weights_y = (q + 1) ** np.arange(n - 1, -1, -1)
    return X @ weights_x, Y @ weights_y


def induced_feedback_channel(cf: ChannelFunction, model: NoiseModel, n: int, s_tilde: int,
                             max_entries: int = MAX_ENTRIES) -> np.ndarray:
    """``P(y^n | v^n)`` under the fixed feedback rule, ``q**n x (q+1)**n``."""
    _check_s_tilde(model, s_tilde)
    q = cf.q
    if q**n * (q + 1) ** n > max_entries:
        raise ResourceCapError(f"induced channel for n={n} exceeds cap {max_entries}")
    _, y_idx = feedback_trajectories(cf, n, s_tilde)
    pz = block_probs(model, n).ravel()
    ncols = (q + 1) ** n
    flat = (np.arange(q**n)[:, None] * ncols + y_idx).ravel()
    W = np.bincount(flat, weights=np.broadcast_to(pz, y_idx.shape).ravel(), minlength=q**n * ncols)
    return W.reshape(q**n, ncols)


def effective_cost_vector(model: NoiseModel, n: int, s_tilde: int, cost: CostSpec, fallback: int = 0) -> np.ndarray:
    """Expected block cost of ``X^n`` for each ``v^n`` under the feedback rule."""
    _check_s_tilde(model, s_tilde)
    b = np.asarray(cost.costs, dtype=float)
    p_hit = float(model.marginal[s_tilde])
    later = p_hit * b[fallback] + (1.0 - p_hit) * b
    total = b.copy()
    for _ in range(n - 1):
        total = (total[:, None] + later[None, :]).ravel()
    return total


def curve_lower(cf: ChannelFunction, model: NoiseModel, n: int, s_tilde: int, cost: CostSpec, grid, **kw) -> BoundCurve:
    W = induced_feedback_channel(cf, model, n, s_tilde)
    return capacity_cost_curve(W, effective_cost_vector(model, n, s_tilde, cost), n, grid, "lower", **kw)


def beta_lb(model: NoiseModel, s_tilde: int, q: int | None = None) -> float:
    """``[1 - P_Z(s_tilde)] (q - 1) / 2``."""
    q = model.q if q is None else q
    return float((1.0 - model.marginal[s_tilde]) * (q - 1) / 2)


def beta_lb_n(model: NoiseModel, s_tilde: int, n: int) -> float:
    """Per-symbol cost of the uniform ``V^n`` under the feedback rule (linear cost)."""
    return float((1.0 - (n - 1) / n * model.marginal[s_tilde]) * (model.q - 1) / 2)


def uniform_input_point(W, block_cost, n: int) -> tuple[float, float]:
    """``(I/n, E[cost]/n)`` at the uniform input."""
    p = np.full(W.shape[0], 1.0 / W.shape[0])
    return mutual_information(p, W) / n, float(p @ block_cost) / n


class MaxOutputEntropy(NamedTuple):
    bits: float
    note: str


def max_output_entropy(model_or_eps, q: int) -> MaxOutputEntropy:
    """Largest single-letter output entropy, ``(1-eps) log2 q + h_b(eps)``."""
    eps = erasure_prob(model_or_eps) if isinstance(model_or_eps, NoiseModel) else float(model_or_eps)
    return MaxOutputEntropy((1 - eps) * np.log2(q) + binary_entropy(eps), SIGN_NOTE)


def ztilde_block_entropy(model: NoiseModel, n: int) -> float:
    """Markov closed form when the indicator process is Markov, else the recursion."""
    if ztilde_is_markov(model):
        return ztilde_block_entropy_markov(model, n)
    return block_entropy_Ztilde(model, n)


@dataclass
class FeedbackVerdict:
    """Feedback lower bound minus non-feedback upper bound on a cost grid.

    ``margins`` cover every grid point; ``in_range`` marks
    the points at or above ``beta_lb`` (all points when ``beta_lb`` is
    undefined for the cost in use).
    """

    s_tilde: int
    n: int
    conditions_hold: bool
    mode: str
    violations: list[str]
    beta_lb: float | None
    betas: np.ndarray
    margins: np.ndarray
    in_range: np.ndarray
    lower: BoundCurve
    upper: BoundCurve

    @property
    def positive(self) -> np.ndarray:
        return self.margins > 0

    @property
    def has_positive_region(self) -> bool:
        return bool(self.positive.any())

    @property
    def has_positive_region_in_range(self) -> bool:
        return bool((self.positive & self.in_range).any())

    @property
    def max_margin(self) -> float:
        return float(self.margins.max()) if self.margins.size else float("-inf")

    def positive_interval(self, threshold: float = 0.0, restrict: bool = False) -> tuple[float, float] | None:
        """Smallest and largest grid cost where the margin exceeds ``threshold``."""
        mask = self.margins > threshold
        if restrict:
            mask &= self.in_range
        if not mask.any():
            return None
        b = self.betas[mask]
        return float(b.min()), float(b.max())


def theorem6_verdict(cf: ChannelFunction, model: NoiseModel, s_tilde: int, n: int, grid,
                     cost: CostSpec | None = None, **kw) -> FeedbackVerdict:
    """Compare the feedback lower bound with the non-feedback upper bound.

    ``mode`` is ``"analytic"`` when the uniform-row / constant-erasure-column
    conditions hold (with the linear cost, ``b(0) = 0``), else
    ``"numerical-only"``.
    """
    cost = linear_cost(model.q) if cost is None else cost
    grid = np.asarray(grid, dtype=float)
    check = check_theorem6_conditions(model, s_tilde)
    linear = cost == linear_cost(model.q)
    mode = "analytic" if check.holds and linear else "numerical-only"
    blb = beta_lb(model, s_tilde) if linear else None
    upper = curve_upper(cf, model, n, cost, grid, **kw)
    lower = curve_lower(cf, model, n, s_tilde, cost, grid, **kw)
    margins = lower.rates - upper.rates
    betas = grid
    in_range = betas >= blb - 1e-12 if blb is not None else np.ones(betas.shape, dtype=bool)
    return FeedbackVerdict(s_tilde, n, check.holds, mode, check.violations, blb, betas, margins,
                           in_range, lower, upper)
