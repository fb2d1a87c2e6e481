"""The unsourced A-channel with erasures.

Each user's section symbol is independently erased with probability
``p_e``; the receiver sees, per section, the set of surviving symbols with
multiplicities collapsed (two users sending the same symbol in the same
section are indistinguishable from one).  Section lists are kept sorted by
symbol value so that decoder runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf2 import BitRow
from .llc import Codeword


@dataclass(frozen=True)
class ChannelParams:
    K: int
    p_e: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("K must be at least 1")
        if not 0.0 <= self.p_e <= 1.0:
            raise ValueError("erasure probability must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class ErasureMask:
    """K x L indicator matrix; entry 1 means that user's section was erased."""

    E: np.ndarray

    def erasure_fraction(self) -> float:
        return float(self.E.mean())


@dataclass(frozen=True, eq=False)
class ChannelOutput:
    """Per-section sorted, duplicate-free uint64 symbol arrays."""

    sections: tuple[np.ndarray, ...]
    J: int

    @property
    def L(self) -> int:
        return len(self.sections)

    def section_rows(self, l: int) -> list[BitRow]:
        return [BitRow(self.J, int(v)) for v in self.sections[l]]


def transmit(codewords: Sequence[Codeword], params: ChannelParams,
             rng: np.random.Generator) -> tuple[ChannelOutput, ErasureMask]:
    """Apply i.i.d. erasures and collapse each section to a symbol set.

    The erasure mask is returned for test instrumentation only; decoders
    never see it.  Deterministic given the generator state.
    """
    if not codewords:
        raise ValueError("at least one codeword is required")
    L = len(codewords[0].sections)
    J = codewords[0].sections[0].width
    for cw in codewords:
        if len(cw.sections) != L or any(s.width != J for s in cw.sections):
            raise ValueError("all codewords must share the same (L, J) geometry")
    syms = np.array([[s.value for s in cw.sections] for cw in codewords],
                    dtype=np.uint64)
    erased = rng.random(size=(len(codewords), L)) < params.p_e
    sections = []
    for l in range(L):
        delivered = syms[~erased[:, l], l]
        sections.append(np.unique(delivered))
    mask = ErasureMask(E=erased.astype(np.uint8))
    return ChannelOutput(sections=tuple(sections), J=J), mask


def sample_payloads(K: int, B: int, rng: np.random.Generator) -> list[BitRow]:
    """K independent uniform B-bit payloads, drawn with replacement.

    Collisions between users are possible but left in place; the metrics
    layer counts them explicitly.
    """
    if B < 1:
        raise ValueError("payload length must be positive")
    bits = rng.integers(0, 2, size=(K, B), dtype=np.uint8)
    packed = np.packbits(bits, axis=1)
    pad = (-B) % 8
    out = []
    for row in packed:
        value = int.from_bytes(row.tobytes(), "big") >> pad
        out.append(BitRow(B, value))
    return out


def output_from_rows(rows_per_section: Sequence[Sequence[BitRow]], J: int) -> ChannelOutput:
    """Build a ChannelOutput from explicit per-section symbol lists (test helper)."""
    sections = []
    for rows in rows_per_section:
        if any(r.width != J for r in rows):
            raise ValueError("symbol width mismatch")
        sections.append(np.unique(np.array([r.value for r in rows], dtype=np.uint64)))
    return ChannelOutput(sections=tuple(sections), J=J)
