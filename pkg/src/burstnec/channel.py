"""Alphabets and the deterministic error action of a noise-erasure channel.

Symbols of the q-ary alphabet are the integers ``0..q-1``.  The erasure
symbol ``e`` is encoded as the integer ``q`` everywhere (dense tables,
probability vectors, column orderings), so that ``(0, 1, ..., q-1, e)`` is
a contiguous index range.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class InvalidAlphabetError(ValueError):
    pass


class InvalidSymbolError(ValueError):
    pass


class InvertibilityError(ValueError):
    """Raised when a channel table violates S-I or S-II.

    ``condition`` is ``"S-I"`` or ``"S-II"``; ``index`` is the offending
    input symbol x (S-I) or output symbol y (S-II).
    """

    def __init__(self, condition: str, index: int, values):
        self.condition = condition
        self.index = index
        self.values = tuple(int(v) for v in values)
        what = "x" if condition == "S-I" else "y"
        super().__init__(
            f"{condition} violated at {what}={index}: values {self.values} are not a permutation"
        )


def erasure_symbol(q: int) -> int:
    """Integer code of the erasure symbol for alphabet size ``q``."""
    return q


@dataclass(frozen=True)
class ChannelFunction:
    """Validated table ``h(x, z)`` together with its inverse ``h_tilde(x, y)``.

    Build instances with :func:`validate_and_derive` or
    :func:`make_mod_add_channel`; the constructor itself does not validate.
    """

    q: int
    h: np.ndarray = field(repr=False)
    h_tilde: np.ndarray = field(repr=False)

    @property
    def e(self) -> int:
        return self.q

    def _check_input(self, x: int) -> None:
        if not 0 <= x < self.q:
            raise InvalidSymbolError(f"input symbol {x} outside 0..{self.q - 1}")

    def theta(self, x: int, z: int) -> int:
        """Channel output for input ``x`` and noise-erasure symbol ``z``."""
        self._check_input(x)
        if z == self.q:
            return self.q
        if not 0 <= z < self.q:
            raise InvalidSymbolError(f"noise symbol {z} outside 0..{self.q}")
        return int(self.h[x, z])

    def recover_noise(self, x: int, y: int) -> int:
        """Noise-erasure symbol that maps input ``x`` to output ``y``."""
        self._check_input(x)
        if y == self.q:
            return self.q
        if not 0 <= y < self.q:
            raise InvalidSymbolError(f"output symbol {y} outside 0..{self.q}")
        return int(self.h_tilde[x, y])

    def theta_table(self) -> np.ndarray:
        """``q x (q+1)`` table of theta, erasure column last."""
        out = np.empty((self.q, self.q + 1), dtype=np.int64)
        out[:, : self.q] = self.h
        out[:, self.q] = self.q
        return out

    def recover_table(self) -> np.ndarray:
        """``q x (q+1)`` table of recover_noise, erasure column last."""
        out = np.empty((self.q, self.q + 1), dtype=np.int64)
        out[:, : self.q] = self.h_tilde
        out[:, self.q] = self.q
        return out


def _is_permutation(values: np.ndarray, q: int) -> bool:
    return np.array_equal(np.sort(values), np.arange(q))


def validate_and_derive(h) -> ChannelFunction:
    """Check S-I/S-II on a ``q x q`` table and build the inverse table.

    Raises
    ------
    InvalidAlphabetError
        If the table is not square with ``q >= 2`` or has entries outside
        ``0..q-1``.
    InvertibilityError
        On the first row (S-I) or ``h_tilde`` column (S-II) that is not a
        permutation of ``0..q-1``.
    """
    table = np.asarray(h)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise InvalidAlphabetError(f"channel table must be square, got shape {table.shape}")
    q = table.shape[0]
    if q < 2:
        raise InvalidAlphabetError(f"alphabet size must be >= 2, got {q}")
    if not np.issubdtype(table.dtype, np.integer):
        if not np.all(np.equal(np.mod(table, 1), 0)):
            raise InvalidAlphabetError("channel table entries must be integers")
    table = table.astype(np.int64)
    if table.min() < 0 or table.max() >= q:
        raise InvalidAlphabetError(f"channel table entries must lie in 0..{q - 1}")

    for x in range(q):
        if not _is_permutation(table[x], q):
            raise InvertibilityError("S-I", x, table[x])

    h_tilde = np.empty_like(table)
    for x in range(q):
        h_tilde[x, table[x]] = np.arange(q)

    for y in range(q):
        if not _is_permutation(h_tilde[:, y], q):
            raise InvertibilityError("S-II", y, h_tilde[:, y])

    table.setflags(write=False)
    h_tilde.setflags(write=False)
    return ChannelFunction(q=q, h=table, h_tilde=h_tilde)


def make_mod_add_channel(q: int) -> ChannelFunction:
    """Modulo-q additive action ``h(x, z) = (x + z) mod q``."""
    if q < 2:
        raise InvalidAlphabetError(f"alphabet size must be >= 2, got {q}")
    x = np.arange(q)
    return validate_and_derive((x[:, None] + x[None, :]) % q)
