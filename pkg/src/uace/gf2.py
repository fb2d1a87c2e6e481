"""Dense GF(2) linear algebra on machine-word bitsets.

Rows are packed into Python integers (bit 0 of the row is the most
significant bit of the integer), so row XOR and row-times-matrix products
are word-parallel.  Everything here is immutable; matrices and rows are
safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class NotInvertibleError(ValueError):
    """Raised when a right inverse is requested for a rank-deficient matrix."""


@dataclass(frozen=True)
class BitRow:
    """A fixed-width row vector over GF(2), packed into one integer.

    ``value`` holds the bits with position 0 of the row as the most
    significant bit, i.e. ``BitRow(3, 0b101)`` is the row (1, 0, 1).
    """

    width: int
    value: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("BitRow width must be positive")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value does not fit in {self.width} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitRow":
        seq = list(bits)
        value = 0
        for b in seq:
            if b not in (0, 1):
                raise ValueError("bits must be 0 or 1")
            value = (value << 1) | b
        return cls(len(seq), value)

    @classmethod
    def zeros(cls, width: int) -> "BitRow":
        return cls(width, 0)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError("bit index out of range")
        return (self.value >> (self.width - 1 - i)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(self.width))

    def concat(self, other: "BitRow") -> "BitRow":
        return BitRow(self.width + other.width,
                      (self.value << other.width) | other.value)

    def __xor__(self, other: "BitRow") -> "BitRow":
        if self.width != other.width:
            raise ValueError("width mismatch in BitRow xor")
        return BitRow(self.width, self.value ^ other.value)

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")

    def __repr__(self) -> str:
        return f"BitRow('{self}')"


@dataclass(frozen=True)
class BitMatrix:
    """A dense binary matrix; each row packed as in :class:`BitRow`."""

    rows: int
    cols: int
    row_values: tuple[int, ...] = field()

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("BitMatrix must have at least one row and column")
        if len(self.row_values) != self.rows:
            raise ValueError("row count does not match row_values")
        top = 1 << self.cols
        if any(not 0 <= v < top for v in self.row_values):
            raise ValueError(f"row value does not fit in {self.cols} bits")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        packed = [BitRow.from_bits(r).value for r in rows]
        return cls(len(rows), len(rows[0]), tuple(packed))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << (n - 1 - i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    def row(self, i: int) -> BitRow:
        return BitRow(self.cols, self.row_values[i])

    def entry(self, i: int, j: int) -> int:
        return (self.row_values[i] >> (self.cols - 1 - j)) & 1

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i).bits()) for i in range(self.rows)]

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)


def row_mul(row: BitRow, mat: BitMatrix) -> BitRow:
    """Product ``row @ mat`` over GF(2): XOR of the matrix rows selected by row bits."""
    if row.width != mat.rows:
        raise ValueError("row width must equal matrix row count")
    acc = 0
    v = row.value
    # Row bit i selects matrix row i; bit i sits at integer position rows-1-i.
    for i in range(mat.rows):
        if (v >> (mat.rows - 1 - i)) & 1:
            acc ^= mat.row_values[i]
    return BitRow(mat.cols, acc)


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Matrix product over GF(2).

    Raises:
        ValueError: if ``a.cols != b.rows``.
    """
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    out = []
    for i in range(a.rows):
        acc = 0
        v = a.row_values[i]
        for j in range(a.cols):
            if (v >> (a.cols - 1 - j)) & 1:
                acc ^= b.row_values[j]
        out.append(acc)
    return BitMatrix(a.rows, b.cols, tuple(out))


def _eliminate(rows: list[int], cols: int,
               row_width: Optional[int] = None) -> tuple[list[int], list[int]]:
    """In-place forward elimination; returns (reduced rows, pivot columns).

    Rows may carry extra low-order augmentation bits beyond ``cols`` (their
    actual width is then ``row_width``); pivots are searched only among the
    leading ``cols`` columns while row XOR acts on the whole word.
    """
    pivot_cols: list[int] = []
    r = 0
    shift_base = (row_width if row_width is not None else cols) - 1
    for c in range(cols):
        mask = 1 << (shift_base - c)
        pivot = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivot_cols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivot_cols


def rank(a: BitMatrix) -> int:
    """Row rank over GF(2) by Gaussian elimination."""
    _, pivots = _eliminate(list(a.row_values), a.cols)
    return len(pivots)


def right_inverse(g: BitMatrix) -> BitMatrix:
    """A matrix ``h`` with ``g @ h == I`` (g must have full row rank).

    The result has shape ``g.cols x g.rows``.

    Raises:
        NotInvertibleError: if ``rank(g) < g.rows`` (no right inverse exists).
    """
    r, c = g.rows, g.cols
    if r > c:
        raise NotInvertibleError("more rows than columns: no right inverse")
    # Augment each row with an identity block in the low-order bits, then
    # reduce; the augmentation tracks the row operations applied.
    aug = [(g.row_values[i] << r) | (1 << (r - 1 - i)) for i in range(r)]
    reduced, pivots = _eliminate(aug, c, row_width=c + r)
    if len(pivots) < r:
        raise NotInvertibleError("matrix is rank deficient: no right inverse")
    ident_mask = (1 << r) - 1
    out = [0] * c
    for i, p in enumerate(pivots):
        out[p] = reduced[i] & ident_mask
    return BitMatrix(c, r, tuple(out))


def solve_row(g: BitMatrix, t: BitRow,
              h: Optional[BitMatrix] = None) -> Optional[BitRow]:
    """Solve ``x @ g == t`` for a full-row-rank ``g``; None when unsolvable.

    The candidate ``t @ h`` (with ``h`` a right inverse of ``g``) is the
    unique solution whenever ``t`` lies in the row space of ``g``; the final
    re-multiplication decides membership.  Pass a cached ``h`` to skip the
    inverse computation.
    """
    if t.width != g.cols:
        raise ValueError("target width must equal matrix column count")
    if h is None:
        h = right_inverse(g)
    x = row_mul(t, h)
    return x if row_mul(x, g) == t else None


def random_full_rank(rows: int, cols: int, rng: np.random.Generator) -> BitMatrix:
    """Uniformly random ``rows x cols`` binary matrix of full row rank.

    Rejection-samples uniform matrices until the rank is ``rows``; for a
    square GF(2) matrix the acceptance probability exceeds 0.28 and grows
    quickly with extra columns, so the loop is short.  Deterministic given
    the generator state.
    """
    if rows > cols:
        raise ValueError("rows must not exceed cols for a full-row-rank sample")
    while True:
        bits = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
        vals = tuple(int(BitRow.from_bits(row.tolist()).value) for row in bits)
        m = BitMatrix(rows, cols, vals)
        if rank(m) == rows:
            return m
