"""Vectorized GF(2) row-times-matrix maps over numpy uint64 arrays.

The stitching decoders work on whole populations of paths at once, so the
per-section parity products are applied to arrays of packed rows rather
than one :class:`~uace.gf2.BitRow` at a time.  Inputs and outputs use the
same packing as :mod:`uace.gf2` (row bit 0 is the most significant bit).
"""

from __future__ import annotations

import numpy as np

from .gf2 import BitMatrix, right_inverse

# Above this input width a dense lookup table would be too large; fall back
# to folding over the input bits (still vectorized across the array).
_TABLE_BITS = 20

_U64 = np.uint64
_IDX = np.int32


class RowMap:
    """Applies ``x -> x @ g`` to uint64 arrays of packed ``in_bits``-bit rows."""

    def __init__(self, g: BitMatrix):
        self.in_bits = g.rows
        self.out_bits = g.cols
        self._rows = np.array(g.row_values, dtype=_U64)
        if self.in_bits <= _TABLE_BITS:
            table = np.zeros(1 << self.in_bits, dtype=_U64)
            for i in range(self.in_bits):
                step = 1 << i
                # Integer bit i of the index corresponds to row in_bits-1-i.
                table[step:2 * step] = table[:step] ^ self._rows[self.in_bits - 1 - i]
            self._table = table
        else:
            self._table = None

    def apply(self, vals: np.ndarray) -> np.ndarray:
        vals = vals.astype(_U64, copy=False)
        if self._table is not None:
            return self._table[vals]
        acc = np.zeros(vals.shape, dtype=_U64)
        for i in range(self.in_bits):
            sel = (vals >> _U64(self.in_bits - 1 - i)) & _U64(1)
            acc ^= sel * self._rows[i]
        return acc


class RowSolver:
    """Solves ``x @ g == t`` for arrays of targets ``t``.

    Backed by a cached right inverse.  When ``g`` is square (and therefore
    invertible, given full row rank) every target is solvable and the
    membership check is skipped; when ``g`` is strictly wide the candidate
    is verified by re-multiplication.
    """

    def __init__(self, g: BitMatrix):
        self._fwd = RowMap(g)
        self._bwd = RowMap(right_inverse(g))
        self.always_solvable = g.rows == g.cols

    def solve(self, targets: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Returns (solutions, ok) where ok marks targets in the row space."""
        targets = targets.astype(_U64, copy=False)
        x = self._bwd.apply(targets)
        if self.always_solvable:
            return x, np.ones(len(targets), dtype=bool)
        ok = self._fwd.apply(x) == targets
        return x, ok

    def backward(self, targets: np.ndarray) -> np.ndarray:
        """Right-inverse image of ``targets`` (a linear map, no membership check)."""
        return self._bwd.apply(targets)

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self._fwd.apply(x)


class CandidateIndex:
    """Groups candidate symbols by parity value for O(1) equality joins.

    For parity widths up to ``_TABLE_BITS`` a dense bucket table maps a
    parity value straight to its candidate range; wider parities fall back
    to binary search on the sorted key array.
    """

    def __init__(self, parities: np.ndarray, parity_bits: int):
        parities = parities.astype(_U64, copy=False)
        self.order = np.argsort(parities, kind="stable").astype(_IDX)
        self._sorted = parities[self.order]
        if parity_bits <= _TABLE_BITS:
            counts = np.bincount(parities.astype(np.int64),
                                 minlength=1 << parity_bits).astype(_IDX)
            self._counts = counts
            starts = np.empty(len(counts), dtype=_IDX)
            starts[0] = 0
            np.cumsum(counts[:-1], out=starts[1:])
            self._lo = starts
            self._dense = True
        else:
            self._dense = False

    def lookup(self, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Per query: start offset into the sorted order and match count."""
        if self._dense:
            q = queries.astype(np.int64, copy=False)
            return self._lo[q], self._counts[q]
        lo = np.searchsorted(self._sorted, queries, side="left").astype(_IDX)
        hi = np.searchsorted(self._sorted, queries, side="right").astype(_IDX)
        return lo, hi - lo

    def join(self, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """All (query index, candidate index) pairs with equal parity.

        Pair order is deterministic: by query index, then ascending
        candidate position in the sorted-by-parity order.
        """
        lo, counts = self.lookup(queries)
        total = int(counts.sum())
        if total == 0:
            empty = np.empty(0, dtype=_IDX)
            return empty, empty
        q_idx = np.repeat(np.arange(len(queries), dtype=_IDX), counts)
        starts = np.empty(len(counts), dtype=_IDX)
        starts[0] = 0
        np.cumsum(counts[:-1], out=starts[1:])
        # Position within the sorted order: a running index offset per query.
        c_idx = self.order[np.arange(total, dtype=_IDX) + np.repeat(lo - starts, counts)]
        return q_idx, c_idx


def cross_join(n_left: int, n_right: int) -> tuple[np.ndarray, np.ndarray]:
    """All (left, right) index pairs, left-major order."""
    l_idx = np.repeat(np.arange(n_left, dtype=_IDX), n_right)
    r_idx = np.tile(np.arange(n_right, dtype=_IDX), n_left)
    return l_idx, r_idx
