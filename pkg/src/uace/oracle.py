"""Brute-force reference decoder for tiny payload spaces.

Enumerates every possible payload and applies the set-membership rules
that the two-phase stitching decoder realizes: a payload is recoverable
erasure-free when all of its codeword sections appear in the channel
output, and recoverable with one loss when its section-0 symbol is an
unused root and at most one later section is missing.  Because it never
threads paths, this is an independent ground truth for equivalence tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel import ChannelOutput
from .gf2 import BitRow
from .llc import LlcSpec, llc_encode


class OracleLimitError(ValueError):
    """Raised when the payload space is too large to enumerate."""


@dataclass(frozen=True)
class OracleLimits:
    max_B: int = 12


@lru_cache(maxsize=8)
def _codebook(spec: LlcSpec) -> np.ndarray:
    """All 2^B codewords as a (2^B, L) symbol matrix, via the scalar encoder."""
    rows = np.empty((1 << spec.B, spec.L), dtype=np.uint64)
    for w in range(1 << spec.B):
        cw = llc_encode(spec, BitRow(spec.B, w))
        rows[w] = [s.value for s in cw.sections]
    return rows


def oracle_decode(spec: LlcSpec, Y: ChannelOutput,
                  limits: OracleLimits = OracleLimits()) -> frozenset[BitRow]:
    """Decoded payload set by exhaustive enumeration.

    Raises:
        OracleLimitError: when ``2**B`` exceeds the enumeration budget.
    """
    if spec.B > limits.max_B:
        raise OracleLimitError(
            f"refusing to enumerate 2^{spec.B} payloads (limit 2^{limits.max_B})")
    if Y.L != spec.L or Y.J != spec.J:
        raise ValueError("channel output geometry does not match code")
    book = _codebook(spec)
    n = len(book)
    present = np.empty((n, spec.L), dtype=bool)
    for l in range(spec.L):
        present[:, l] = np.isin(book[:, l], Y.sections[l])

    w1 = present.all(axis=1)
    roots_used = np.unique(book[w1, 0])
    root_free = present[:, 0] & ~np.isin(book[:, 0], roots_used)
    missing_tail = (spec.L - 1) - present[:, 1:].sum(axis=1)
    w2 = root_free & (missing_tail <= 1)

    hits = np.nonzero(w1 | w2)[0]
    return frozenset(BitRow(spec.B, int(w)) for w in hits)
