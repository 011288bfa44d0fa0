"""Exact n-fold transition matrices and their quasi-symmetric structure.

Rows are input blocks ``x^n`` in lexicographic order over ``0..q-1``;
columns are output blocks ``y^n`` in lexicographic order over
``(0, ..., q-1, e)`` with ``e == q``.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .blahut import blahut_cost
from .channel import ChannelFunction
from .entropy import binary_entropy, block_entropy_Z, block_entropy_Ztilde, entropy
from .processes import (
    ErasurePattern,
    NoiseModel,
    auxiliary_block_prob,
    block_probs,
    erasure_patterns,
    erasure_prob,
)

MAX_ENTRIES = 50_000_000
QS_TOL = 1e-12


class ResourceCapError(RuntimeError):
    pass


class QuasiSymmetryError(RuntimeError):
    def __init__(self, report: "QuasiSymmetryReport"):
        self.report = report
        failed = [r.pattern.mask for r in report.records if not r.passed]
        super().__init__(f"matrix is not quasi-symmetric; failing patterns {failed}")


@dataclass
class NFoldMatrix:
    n: int
    q: int
    entries: np.ndarray = field(repr=False)
    model: NoiseModel = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


def _check_cap(q: int, n: int, max_entries: int) -> None:
    size = q**n * (q + 1) ** n
    if size > max_entries:
        raise ResourceCapError(f"{q}^{n} x {q + 1}^{n} = {size} entries exceeds cap {max_entries}")


def block_index_table(table: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic index of ``(table[a_1, b_1], ..., table[a_n, b_n])``.

    ``table`` is ``A x B`` with values in ``0..base-1`` where ``base = B``;
    the result has shape ``(A**n, B**n)``.
    """
    A, B = table.shape
    idx = np.zeros((1, 1), dtype=np.int64)
    for _ in range(n):
        idx = (idx[:, None, :, None] * B + table[None, :, None, :]).reshape(idx.shape[0] * A, idx.shape[1] * B)
    return idx


def build_nfold(cf: ChannelFunction, model: NoiseModel, n: int, max_entries: int = MAX_ENTRIES) -> NFoldMatrix:
    if n < 1:
        raise ValueError("block length must be >= 1")
    if cf.q != model.q:
        raise ValueError(f"channel q={cf.q} does not match model q={model.q}")
    _check_cap(cf.q, n, max_entries)
    noise_index = block_index_table(cf.recover_table(), n)
    entries = block_probs(model, n).ravel()[noise_index]
    return NFoldMatrix(n, cf.q, entries, model)


def column_patterns(n: int, q: int) -> np.ndarray:
    """Bitmask of erased positions for every output column (bit ``n-i`` for position ``i``)."""
    erased = (np.arange(q + 1) == q).astype(np.int64)
    mask = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        mask = (mask[:, None] * 2 + erased[None, :]).ravel()
    return mask


def partition_columns(n: int, q: int) -> list[tuple[ErasurePattern, np.ndarray]]:
    """Erasure patterns with the output columns they own, in pattern order."""
    masks = column_patterns(n, q)
    out = []
    for code, pattern in enumerate(erasure_patterns(n)):
        out.append((pattern, np.flatnonzero(masks == code)))
    return out


@dataclass
class PatternRecord:
    pattern: ErasurePattern
    fingerprint: np.ndarray = field(repr=False)
    column_sum: float
    rows_ok: bool
    colsum_ok: bool

    @property
    def passed(self) -> bool:
        return self.rows_ok and self.colsum_ok


@dataclass
class QuasiSymmetryReport:
    records: list[PatternRecord]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)


def check_quasi_symmetry(m: NFoldMatrix, tol: float = QS_TOL) -> QuasiSymmetryReport:
    """Per erasure pattern: row multisets and column sums.

    Each sub-matrix row must be a permutation of the block probabilities of
    the noise blocks with that erasure pattern, and every column must sum to
    ``q**|S| * P(Ztilde^n = pattern)``.
    """
    n, q = m.n, m.q
    noise = block_probs(m.model, n).ravel()
    noise_masks = column_patterns(n, q)
    records = []
    for (pattern, cols), code in zip(partition_columns(n, q), itertools.count()):
        fingerprint = np.sort(noise[noise_masks == code])
        sub = m.entries[:, cols]
        rows_ok = bool(np.max(np.abs(np.sort(sub, axis=1) - fingerprint[None, :])) <= tol)
        expected = q ** len(pattern.mask) * auxiliary_block_prob(m.model, pattern.ztilde_block(q))
        sums = sub.sum(axis=0)
        colsum_ok = bool(np.max(np.abs(sums - expected)) <= tol)
        records.append(PatternRecord(pattern, fingerprint, float(expected), rows_ok, colsum_ok))
    return QuasiSymmetryReport(records)


def capacity_quasi_symmetric(m: NFoldMatrix, report: QuasiSymmetryReport | None = None) -> float:
    """``C_n`` in bits per use from the weakly-symmetric decomposition."""
    report = check_quasi_symmetry(m) if report is None else report
    if not report.passed:
        raise QuasiSymmetryError(report)
    total = 0.0
    for pattern, cols in partition_columns(m.n, m.q):
        row = m.entries[0, cols]
        a = row.sum()
        if a <= 0:
            continue
        total += a * ((m.n - len(pattern.mask)) * np.log2(m.q) - entropy(row / a))
    return float(total / m.n)


def cn_closed_form(model: NoiseModel, n: int, q: int | None = None) -> float:
    """``(1 - eps) log q - (H(Z^n) - H(Ztilde^n)) / n``."""
    q = model.q if q is None else q
    eps = erasure_prob(model)
    return float((1 - eps) * np.log2(q) - (block_entropy_Z(model, n) - block_entropy_Ztilde(model, n)) / n)


@dataclass
class OracleResult:
    capacity: float
    p: np.ndarray
    tv_from_uniform: float
    iterations: int
    converged: bool


def capacity_oracle_uniformity(m: NFoldMatrix, tol: float = 1e-10, max_iter: int = 100_000) -> OracleResult:
    """Unconstrained Blahut-Arimoto on the n-fold matrix."""
    res = blahut_cost(m.entries, block_length=m.n, tol=tol, max_iter=max_iter)
    tv = 0.5 * float(np.abs(res.p - 1.0 / len(res.p)).sum())
    return OracleResult(res.rate, res.p, tv, res.iterations, res.converged)


def single_letter_dmc_capacity(model: NoiseModel) -> float:
    """``(1 - eps) log q - H(Z_1 | Ztilde_1)``, the memoryless-counterpart capacity."""
    eps = erasure_prob(model)
    return float((1 - eps) * np.log2(model.q) - (entropy(model.marginal) - binary_entropy(eps)))


def export_csv(m: NFoldMatrix, dest) -> None:
    """Row-major CSV with a commented header describing the index order.

    ``dest`` is a path or an open text handle.
    """
    if hasattr(dest, "write"):
        _write_csv(m, dest)
        return
    with open(dest, "w", newline="") as fh:
        _write_csv(m, fh)


def _write_csv(m: NFoldMatrix, fh) -> None:
    syms = [str(s) for s in range(m.q)]
    sep = "" if m.q <= 10 else "."
    rows = [sep.join(t) for t in itertools.product(syms, repeat=m.n)]
    cols = [sep.join(t) for t in itertools.product(syms + ["e"], repeat=m.n)]
    fh.write(f"# n={m.n} q={m.q}; rows x^n lexicographic over 0..{m.q - 1}; ")
    fh.write(f"columns y^n lexicographic over 0..{m.q - 1},e (e is the erasure)\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["x\\y"] + cols)
    for label, row in zip(rows, m.entries):
        w.writerow([label] + [repr(float(v)) for v in row])
