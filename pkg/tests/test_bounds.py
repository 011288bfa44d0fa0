import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from burstnec.bounds import (
    CSV_COLUMNS,
    CostSpec,
    beta_lb,
    beta_lb_n,
    capacity_cost_curve,
    curve_lower,
    curve_nonfeedback,
    curve_upper,
    curves_to_csv,
    effective_cost_vector,
    feedback_trajectories,
    induced_feedback_channel,
    is_concave_monotone,
    linear_cost,
    max_output_entropy,
    theorem6_verdict,
    uniform_input_point,
    zs_gap,
)
from burstnec.channel import make_mod_add_channel
from burstnec.config import PI1, PI2
from burstnec.entropy import binary_entropy, block_entropy_Z, entropy
from burstnec.nfold import build_nfold, cn_closed_form
from burstnec.processes import block_probs, markov_model, memoryless_model

from conftest import markov_models

CF2 = make_mod_add_channel(2)


def cvx_capacity_cost(W, c, beta, n):
    cp = pytest.importorskip("cvxpy")
    p = cp.Variable(W.shape[0], nonneg=True)
    wlogw = (W * np.log2(np.where(W > 0, W, 1))).sum(axis=1)
    obj = (wlogw @ p + cp.sum(cp.entr(W.T @ p)) / np.log(2)) / n
    prob = cp.Problem(cp.Maximize(obj), [cp.sum(p) == 1, c @ p / n <= beta])
    prob.solve(solver=cp.CLARABEL)
    return prob.value


def test_cost_spec():
    c = linear_cost(3)
    assert c.beta_min == 0 and c.beta_max == 1.0
    np.testing.assert_array_equal(c.block_costs(2), [0, 1, 2, 1, 2, 3, 2, 3, 4])
    with pytest.raises(ValueError):
        CostSpec((-1.0, 1.0))


@pytest.mark.parametrize("beta", [0.05, 0.15, 0.3])
def test_curve_matches_convex_solver(beta):
    W = build_nfold(CF2, markov_model(PI1), 3).entries
    c = linear_cost(2).block_costs(3)
    ours = capacity_cost_curve(W, c, 3, [beta]).points[0]
    assert ours.converged
    assert ours.rate == pytest.approx(cvx_capacity_cost(W, c, beta, 3), abs=1e-6)


def test_curve_endpoints():
    model = markov_model(PI2)
    curve = curve_nonfeedback(CF2, model, 3, linear_cost(2), [0.0, 0.5, 0.7])
    assert curve.rates[0] == 0.0
    assert curve.rates[1] == pytest.approx(cn_closed_form(model, 3), abs=1e-9)
    assert curve.rates[2] == curve.rates[1]


@given(markov_models(qs=(2,)))
def test_curves_concave_monotone(model):
    grid = np.linspace(0, 0.5, 11)
    nf = curve_nonfeedback(CF2, model, 2, linear_cost(2), grid)
    lo = curve_lower(CF2, model, 2, 0, linear_cost(2), grid)
    assert nf.converged and lo.converged
    assert is_concave_monotone(nf) and is_concave_monotone(lo)


def test_upper_is_shift():
    model = markov_model(PI1)
    grid = [0.1, 0.3]
    nf = curve_nonfeedback(CF2, model, 3, linear_cost(2), grid)
    up = curve_upper(CF2, model, 3, linear_cost(2), grid, nonfeedback=nf)
    np.testing.assert_allclose(up.rates - nf.rates, zs_gap(model, 3), atol=0)
    assert zs_gap(model, 3) == pytest.approx(block_entropy_Z(model, 3) / 3 - block_entropy_Z(model, 2) + block_entropy_Z(model, 1))


def test_zs_gap_zero_for_memoryless():
    assert zs_gap(memoryless_model([0.5, 0.3, 0.2]), 4) == pytest.approx(0.0, abs=1e-12)


def test_feedback_rule_trajectories():
    x_idx, _ = feedback_trajectories(CF2, 2, 0)
    # v = (1, 1): z_1 = 0 forces x_2 = 0, otherwise x_2 = 1
    row = x_idx[3].reshape(3, 3)
    np.testing.assert_array_equal(row[0], [2, 2, 2])
    np.testing.assert_array_equal(row[1:], 3)


def test_induced_channel_n1_is_plain_channel():
    model = markov_model(PI1)
    np.testing.assert_allclose(induced_feedback_channel(CF2, model, 1, 0), build_nfold(CF2, model, 1).entries)


@given(markov_models(qs=(2, 3)), st.integers(1, 3))
def test_effective_cost_exact(model, n):
    q = model.q
    cost = CostSpec(tuple(float(v) for v in np.arange(q) ** 1.5))
    eff = effective_cost_vector(model, n, 0, cost)
    x_idx, _ = feedback_trajectories(make_mod_add_channel(q), n, 0)
    block = cost.block_costs(n)
    pz = block_probs(model, n).ravel()
    np.testing.assert_allclose(eff, (block[x_idx] * pz).sum(axis=1), atol=1e-12)


def test_beta_lb_values():
    model = markov_model(PI1)
    assert beta_lb(model, 0) == pytest.approx(38 / 143)
    assert beta_lb_n(model, 0, 6) == pytest.approx((1 - 5 / 6 * 67 / 143) * 0.5)
    assert beta_lb_n(model, 0, 1) == 0.5


@pytest.mark.parametrize("n", [1, 2, 4])
def test_uniform_input_anchor(n):
    model = markov_model(PI1)
    W = induced_feedback_channel(CF2, model, n, 0)
    cost = effective_cost_vector(model, n, 0, linear_cost(2))
    rate, beta = uniform_input_point(W, cost, n)
    assert rate == pytest.approx(cn_closed_form(model, n), abs=1e-10)
    assert beta == pytest.approx(beta_lb_n(model, 0, n), abs=1e-12)


@given(markov_models(qs=(2,)))
def test_lower_never_exceeds_cn(model):
    grid = np.linspace(0, 0.5, 6)
    lo = curve_lower(CF2, model, 3, 0, linear_cost(2), grid)
    assert np.all(lo.rates <= cn_closed_form(model, 3) + 1e-9)


def test_memoryless_lower_below_upper():
    model = memoryless_model([0.5, 0.3, 0.2])
    v = theorem6_verdict(CF2, model, 0, 3, np.linspace(0, 0.5, 11))
    assert not v.has_positive_region
    assert v.mode == "numerical-only"


def test_verdict_modes():
    grid = np.linspace(0, 0.5, 5)
    v1 = theorem6_verdict(CF2, markov_model(PI1), 0, 2, grid)
    assert v1.mode == "analytic" and v1.conditions_hold
    assert list(v1.in_range) == [False, False, False, True, True]
    v2 = theorem6_verdict(CF2, markov_model(PI2), 0, 2, grid)
    assert v2.mode == "numerical-only" and v2.violations


def test_csv_output():
    curve = curve_nonfeedback(CF2, markov_model(PI1), 2, linear_cost(2), [0.1, 0.2])
    text = curves_to_csv([curve])
    lines = text.splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    assert len(lines) == 3


@pytest.mark.parametrize("eps", [0.1, 0.2, 0.5])
def test_max_output_entropy_grid_search(eps):
    # q = 2 with the binary-input erasure output law: P(y) = ((1-eps)p, (1-eps)(1-p), eps)
    grid = np.arange(0, 1.0005, 1e-3)
    best = max(entropy([(1 - eps) * p, (1 - eps) * (1 - p), eps]) for p in grid)
    assert best == pytest.approx(max_output_entropy(eps, 2).bits, abs=1e-6)
    assert best - ((1 - eps) - binary_entropy(eps)) == pytest.approx(2 * binary_entropy(eps), abs=1e-6)


def test_feedback_cannot_win_above_beta_lb_for_pi1():
    # lower bound <= C_6, while the upper bound at any beta >= beta_lb is at
    # least C_6(beta_lb) + Delta_6, which already exceeds C_6
    model = markov_model(PI1)
    blb = beta_lb(model, 0)
    c6 = cn_closed_form(model, 6)
    at_blb = curve_nonfeedback(CF2, model, 6, linear_cost(2), [blb]).rates[0]
    assert at_blb + zs_gap(model, 6) - c6 > 0.013
