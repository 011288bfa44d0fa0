"""Self-consistency checks run by ``burstnec validate``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bounds import max_output_entropy
from .capacity import single_letter_output_entropy
from .channel import ChannelFunction
from .entropy import Hn_sequence, block_entropy_Ztilde, entropy
from .nfold import (
    build_nfold,
    capacity_oracle_uniformity,
    capacity_quasi_symmetric,
    check_quasi_symmetry,
    cn_closed_form,
)
from .processes import NoiseModel, auxiliary_block, block_probs, erasure_prob
from .simulate import simulate_feedback, simulate_nfold


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def brute_force_ztilde_entropy(model: NoiseModel, l: int) -> float:
    """``H(Ztilde^l)`` by summing block probabilities over every preimage."""
    probs = block_probs(model, l).ravel()
    acc: dict[tuple, float] = {}
    for z, p in zip(itertools.product(range(model.n_states), repeat=l), probs):
        key = auxiliary_block(z, model.q)
        acc[key] = acc.get(key, 0.0) + p
    return entropy(np.fromiter(acc.values(), dtype=float))


def _largest_n(q: int, n: int, budget: int) -> int:
    while n > 1 and q**n * (q + 1) ** n > budget:
        n -= 1
    return n


def run_checks(model: NoiseModel, cf: ChannelFunction, n: int = 3, seed: int = 0,
               samples: int = 1_000_000, s_tilde: int = 0, budget: int = 1_000_000) -> list[CheckResult]:
    q = model.q
    out: list[CheckResult] = []

    res = float(np.abs(model.marginal @ model.transition - model.marginal).max()) if model.is_markov else 0.0
    out.append(CheckResult("stationary", res <= 1e-10, f"residual {res:.2e}"))

    ok = all(cf.recover_noise(x, cf.theta(x, z)) == z for x in range(q) for z in range(q + 1))
    out.append(CheckResult("round-trip", ok, "recover_noise(x, theta(x, z)) == z for all x, z"))

    nb = min(n, 5)
    worst = 0.0
    for k in range(2, nb + 1):
        worst = max(worst, float(np.abs(block_probs(model, k).sum(axis=-1) - block_probs(model, k - 1)).max()))
    out.append(CheckResult("marginalization", worst <= 1e-12, f"n<={nb}, max error {worst:.2e}"))

    lz = 6 if q <= 3 else 4
    err = max(abs(block_entropy_Ztilde(model, k) - brute_force_ztilde_entropy(model, k)) for k in range(1, lz + 1))
    out.append(CheckResult("ztilde-recursion", err <= 1e-10, f"l<={lz}, max error {err:.2e}"))

    nq = _largest_n(q, n, budget)
    m = build_nfold(cf, model, nq)
    rep = check_quasi_symmetry(m)
    out.append(CheckResult("quasi-symmetry", rep.passed, f"n={nq}, {len(rep.records)} erasure patterns"))

    if rep.passed:
        a = capacity_quasi_symmetric(m, rep)
        b = cn_closed_form(model, nq)
        c = capacity_oracle_uniformity(m)
        spread = max(a, b, c.capacity) - min(a, b, c.capacity)
        out.append(CheckResult("cn-agreement", spread <= 1e-6 and c.converged,
                               f"n={nq}, C_n={a:.10f}, spread {spread:.2e}"))

    H = Hn_sequence(model, 8)
    viol = max((m_ + n_) * H[m_ + n_ - 1] - m_ * H[m_ - 1] - n_ * H[n_ - 1]
               for m_ in range(1, 8) for n_ in range(1, 9 - m_))
    out.append(CheckResult("subadditivity", viol <= 1e-9, f"m+n<=8, max violation {viol:.2e}"))

    eps = erasure_prob(model)
    target = max_output_entropy(eps, q).bits
    uniform = single_letter_output_entropy(np.full(q, 1.0 / q), model, cf.theta_table())
    rng = np.random.default_rng(seed)
    probe = max(single_letter_output_entropy(rng.dirichlet(np.ones(q)), model, cf.theta_table()) for _ in range(200))
    ok = abs(uniform - target) <= 1e-12 and probe <= target + 1e-12
    out.append(CheckResult("max-output-entropy", ok, f"uniform H(Y)={uniform:.10f}, bound {target:.10f}"))

    agree = simulate_nfold(cf, model, 1, samples, seed)
    out.append(CheckResult("monte-carlo-Q1", agree.within(3.0), f"{samples} samples, max |z| {agree.max_z:.3f}"))

    nf = _largest_n(q, 2, budget)
    fb = simulate_feedback(cf, model, nf, s_tilde, samples, seed + 1)
    out.append(CheckResult("monte-carlo-feedback", fb.agreement.within(3.0),
                           f"n={nf}, {samples} samples, max |z| {fb.agreement.max_z:.3f}"))
    return out
