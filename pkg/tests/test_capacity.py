import numpy as np
import pytest
from hypothesis import given

from burstnec.capacity import nec_capacity, single_letter_output_entropy
from burstnec.channel import make_mod_add_channel
from burstnec.config import PI1, PI2
from burstnec.entropy import binary_entropy, entropy, markov_conditional_entropy, ztilde_conditional_entropy
from burstnec.nfold import cn_closed_form, single_letter_dmc_capacity
from burstnec.processes import markov_model, memoryless_counterpart, memoryless_model

from conftest import markov_models


def test_pi1_formula():
    m = markov_model(PI1)
    rep = nec_capacity(m)
    expected = (1 - 2 / 11) - (markov_conditional_entropy(m) - ztilde_conditional_entropy(m))
    assert rep.exact
    assert rep.C == pytest.approx(expected, abs=1e-14)
    assert rep.C_FB == rep.C
    assert rep.C_DMC == pytest.approx(single_letter_dmc_capacity(m), abs=1e-14)
    assert rep.gain_lower == pytest.approx(rep.C - rep.C_DMC, abs=1e-14)


def test_erasure_free_markov():
    m = markov_model([[0.9, 0.1, 0.0], [0.3, 0.7, 0.0], [0.5, 0.5, 0.0]])
    rep = nec_capacity(m)
    assert rep.eps == 0.0
    assert rep.C == pytest.approx(1 - markov_conditional_entropy(m), abs=1e-14)


def test_burst_erasure_channel():
    ec = markov_model([[0.9, 0.0, 0.1], [0.5, 0.0, 0.5], [0.3, 0.0, 0.7]])
    rep = nec_capacity(ec)
    assert rep.C == pytest.approx(1 - rep.eps, abs=1e-14)


def test_memoryless():
    m = memoryless_model([0.3, 0.2, 0.1, 0.4])
    rep = nec_capacity(m)
    eps = 0.4
    assert rep.C == pytest.approx((1 - eps) * np.log2(3) - (entropy(m.marginal) - binary_entropy(eps)), abs=1e-14)
    assert rep.C == rep.C_DMC
    assert rep.gain_lower == rep.gain_upper == 0.0


def test_hidden_indicator_gives_interval():
    rep = nec_capacity(markov_model(PI2), l=12)
    assert not rep.exact
    assert rep.C_lower < rep.C_upper
    # the interval narrows as l grows
    wider = nec_capacity(markov_model(PI2), l=6)
    assert wider.C_lower <= rep.C_lower + 1e-12 and rep.C_upper <= wider.C_upper + 1e-12


@given(markov_models())
def test_block_capacities_converge_to_bracket(model):
    rep = nec_capacity(model, l=12)
    c10 = cn_closed_form(model, 10)
    # C_n approaches C; the gap is at most (H(Z_1) - H(Z_2|Z_1)) / n
    slack = (entropy(model.marginal) - markov_conditional_entropy(model)) / 10
    assert rep.C_lower - slack - 1e-9 <= c10 <= rep.C_upper + slack + 1e-9


@given(markov_models())
def test_memory_never_hurts(model):
    rep = nec_capacity(model, l=10)
    assert rep.gain_upper >= -1e-12
    iid = nec_capacity(memoryless_counterpart(model))
    assert iid.C == pytest.approx(rep.C_DMC, abs=1e-12)


def test_nats():
    rep = nec_capacity(markov_model(PI1))
    d = rep.to_dict("nats")
    assert d["C"] == pytest.approx(rep.C * np.log(2))
    assert d["q"] == 2 and d["unit"] == "nats"


def test_output_entropy_uniform_input():
    m = markov_model(PI1)
    cf = make_mod_add_channel(2)
    h = single_letter_output_entropy([0.5, 0.5], m, cf.theta_table())
    assert h == pytest.approx((1 - m.marginal[2]) + binary_entropy(m.marginal[2]), abs=1e-14)
