import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from burstnec.config import PI1, PI2
from burstnec.processes import (
    DegenerateChainError,
    ModelError,
    auxiliary_block,
    auxiliary_block_prob,
    block_prob,
    block_probs,
    check_theorem6_conditions,
    erasure_patterns,
    erasure_prob,
    markov_model,
    memoryless_model,
    model_from_dict,
    sample_path,
    stationary_distribution,
    ztilde_is_markov,
)

from conftest import markov_models, noise_models


def test_pi1_stationary_exact():
    np.testing.assert_allclose(stationary_distribution(PI1), np.array([67, 50, 26]) / 143, atol=1e-14)
    assert erasure_prob(markov_model(PI1)) == pytest.approx(2 / 11, abs=1e-14)


def test_rank_deficient_chain_rejected():
    with pytest.raises(DegenerateChainError):
        stationary_distribution(np.eye(3))


def test_non_stochastic_rejected():
    with pytest.raises(ModelError):
        markov_model([[0.5, 0.4, 0.2], [0.3, 0.3, 0.4], [0.3, 0.3, 0.4]])


def test_non_stationary_initial_rejected():
    with pytest.raises(ModelError):
        model_from_dict({"q": 2, "kind": "markov", "transition": PI1, "initial": [1, 0, 0]})
    pi = stationary_distribution(PI1)
    m = model_from_dict({"q": 2, "kind": "markov", "transition": PI1, "initial": pi.tolist()})
    assert m.is_markov


@pytest.mark.parametrize("bad", [
    [],
    {"kind": "markov"},
    {"q": 2, "kind": "hidden"},
    {"q": 2, "kind": "markov", "transition": [[1, 0], [0, 1]]},
    {"q": 2, "kind": "memoryless", "marginal": [0.5, 0.6, -0.1]},
    {"q": 2, "kind": "memoryless"},
])
def test_schema_errors(bad):
    with pytest.raises(ModelError):
        model_from_dict(bad)


def test_config_round_trip():
    for m in (markov_model(PI2), memoryless_model([0.2, 0.5, 0.3])):
        again = model_from_dict(m.to_dict())
        np.testing.assert_array_equal(again.transition, m.transition)
        assert again.kind == m.kind


def test_ec_embedding_is_ergodic_on_support():
    # burst erasure channel: noise only ever 0 or e
    ec = markov_model([[0.9, 0.0, 0.1], [0.5, 0.0, 0.5], [0.3, 0.0, 0.7]])
    assert ec.marginal[1] == 0.0
    assert ec.is_ergodic()
    assert ztilde_is_markov(ec)


def test_periodic_chain_not_ergodic():
    m = markov_model([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert not m.is_ergodic()


def test_pair_block_is_pi_times_transition():
    m = markov_model(PI1)
    for a, b in itertools.product(range(3), repeat=2):
        assert block_prob(m, (a, b)) == m.marginal[a] * m.transition[a, b]


@given(noise_models())
def test_marginalization(model):
    for n in range(2, 6):
        np.testing.assert_allclose(block_probs(model, n).sum(axis=-1), block_probs(model, n - 1), atol=1e-14)
    assert block_probs(model, 5).sum() == pytest.approx(1.0, abs=1e-12)


@given(noise_models(), st.integers(1, 6))
def test_auxiliary_prob_matches_preimage_sum(model, n):
    probs = block_probs(model, n).ravel()
    acc = {}
    for z, p in zip(itertools.product(range(model.n_states), repeat=n), probs):
        key = auxiliary_block(z, model.q)
        acc[key] = acc.get(key, 0.0) + p
    for pattern in erasure_patterns(n):
        b = pattern.ztilde_block(model.q)
        assert auxiliary_block_prob(model, b) == pytest.approx(acc.get(b, 0.0), abs=1e-13)


@given(markov_models(), st.integers(0, 1000))
def test_relabeling_permutes_stationary_law(model, seed):
    perm = np.random.default_rng(seed).permutation(model.n_states)
    P = model.transition[np.ix_(perm, perm)]
    np.testing.assert_allclose(stationary_distribution(P), model.marginal[perm], atol=1e-12)


def test_erasure_patterns_order():
    pats = erasure_patterns(2)
    assert [p.mask for p in pats] == [(), (2,), (1,), (1, 2)]
    assert pats[1].ztilde_block(2) == (0, 2)


def test_sample_path_deterministic_and_in_range():
    m = markov_model(PI1)
    a, b = sample_path(m, 2000, 7), sample_path(m, 2000, 7)
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 0 and a.max() <= 2


def test_sample_path_frequencies():
    m = markov_model(PI1)
    path = sample_path(m, 200_000, 3)
    freq = np.bincount(path, minlength=3) / path.size
    np.testing.assert_allclose(freq, m.marginal, atol=0.01)


def test_feedback_rule_conditions():
    ok = check_theorem6_conditions(markov_model(PI1), 0)
    assert ok.holds and ok.eps_prime == pytest.approx(0.2)
    bad = check_theorem6_conditions(markov_model(PI2), 0)
    assert not bad.holds
    assert any("P(e|1)" in v for v in bad.violations)
    assert not check_theorem6_conditions(markov_model(PI1), 1).holds
    assert not check_theorem6_conditions(markov_model(PI1), 2).holds
