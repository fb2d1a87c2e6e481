"""Linked-loop code: construction, encoding, and parity predicates.

The code splits a payload of ``B = L * m`` bits into ``L`` sections of
``m`` information bits.  Section ``l`` carries ``J - m`` parity bits
computed from the ``M`` preceding sections in a circular (tail-biting)
fashion:

    p(l) = w((l-1) mod L) @ G_1  xor ... xor  w((l-M) mod L) @ G_M

so the first sections are linked back to the last ones.  Each ``G_r`` is a
full-row-rank ``m x (J-m)`` matrix, which makes a single lost section
uniquely solvable from any one parity equation that involves it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .gf2 import BitMatrix, BitRow, random_full_rank, right_inverse, row_mul, solve_row

# Engine limit: section symbols are manipulated as uint64 words and the
# decoder reserves one extra value above 2^J as the erased-slot sentinel.
MAX_SECTION_BITS = 62


@dataclass(frozen=True)
class LlcSpec:
    """Immutable linked-loop code definition.

    ``G[r-1]`` is the parity matrix applied to the info bits of the section
    ``r`` steps back; ``Ginv[r-1]`` is its cached right inverse, used when a
    lost section is reconstructed from one of its parity equations.
    """

    L: int
    J: int
    m: int
    M: int
    seed: int
    G: tuple[BitMatrix, ...]
    Ginv: tuple[BitMatrix, ...]

    @property
    def B(self) -> int:
        return self.L * self.m

    @property
    def block_bits(self) -> int:
        return self.L * self.J

    @property
    def parity_bits(self) -> int:
        return self.J - self.m

    @property
    def rate(self) -> float:
        return self.B / self.L


@dataclass(frozen=True)
class Codeword:
    """One user's transmission: L sections of J bits, info then parity."""

    sections: tuple[BitRow, ...]


@dataclass(frozen=True)
class Path:
    """A stitched candidate: one slot per section, at most one presumed-erased.

    ``None`` marks the erased slot; ``recovered`` carries its info bits once
    they have been reconstructed.  Slot 0 is always explicit because
    decoding roots are drawn from the section-0 list.
    """

    slots: tuple[Optional[BitRow], ...]
    recovered: Optional[BitRow] = None

    def __post_init__(self) -> None:
        if not self.slots:
            raise ValueError("path must contain at least one slot")
        if self.slots[0] is None:
            raise ValueError("slot 0 must be explicit")
        if sum(1 for s in self.slots if s is None) > 1:
            raise ValueError("path may contain at most one erased slot")
        widths = {s.width for s in self.slots if s is not None}
        if len(widths) > 1:
            raise ValueError("explicit slots must share one symbol width")

    @property
    def erased_at(self) -> Optional[int]:
        for i, s in enumerate(self.slots):
            if s is None:
                return i
        return None


@dataclass(frozen=True)
class RecoveryVerdict:
    """Outcome of a parity check that may reconstruct one erased section."""

    consistent: bool
    recovered: Optional[BitRow] = None


def llc_new(L: int, J: int, m: int, M: int, seed: int) -> LlcSpec:
    """Draw a linked-loop code: M independent full-rank m x (J-m) matrices.

    Deterministic for a given seed.

    Raises:
        ValueError: if ``m > J - m`` (the lost-section equations would be
            underdetermined), or if ``M`` is not in ``[1, L)``.
    """
    if L < 2:
        raise ValueError("L must be at least 2")
    if not 1 <= M < L:
        raise ValueError("memory depth must satisfy 1 <= M < L")
    if m < 1:
        raise ValueError("m must be positive")
    if m > J - m:
        raise ValueError(f"unsupported rate: m={m} exceeds parity width {J - m}")
    if J > MAX_SECTION_BITS:
        raise ValueError(f"J must be at most {MAX_SECTION_BITS}")
    rng = np.random.default_rng(seed)
    G = tuple(random_full_rank(m, J - m, rng) for _ in range(M))
    Ginv = tuple(right_inverse(g) for g in G)
    return LlcSpec(L=L, J=J, m=m, M=M, seed=seed, G=G, Ginv=Ginv)


def partition_payload(spec: LlcSpec, w: BitRow) -> list[BitRow]:
    """Split a B-bit payload into L info rows of m bits, in section order."""
    if w.width != spec.B:
        raise ValueError(f"payload must be {spec.B} bits, got {w.width}")
    m, B = spec.m, spec.B
    mask = (1 << m) - 1
    return [BitRow(m, (w.value >> (B - (l + 1) * m)) & mask) for l in range(spec.L)]


def llc_parity(spec: LlcSpec, w_sections: Sequence[BitRow], l: int) -> BitRow:
    """Parity of section ``l``: sum of the M preceding info rows times G_r."""
    if not 0 <= l < spec.L:
        raise ValueError(f"section index {l} out of range [0, {spec.L})")
    if len(w_sections) != spec.L:
        raise ValueError("expected one info row per section")
    acc = 0
    for r in range(1, spec.M + 1):
        wr = w_sections[(l - r) % spec.L]
        if wr.width != spec.m:
            raise ValueError("info rows must be m bits wide")
        acc ^= row_mul(wr, spec.G[r - 1]).value
    return BitRow(spec.parity_bits, acc)


def llc_encode(spec: LlcSpec, w: BitRow) -> Codeword:
    """Encode a payload; every user maps payloads through this same function."""
    sections = partition_payload(spec, w)
    out = []
    for l in range(spec.L):
        out.append(sections[l].concat(llc_parity(spec, sections, l)))
    return Codeword(sections=tuple(out))


def _split_symbol(spec: LlcSpec, sym: BitRow) -> tuple[int, int]:
    if sym.width != spec.J:
        raise ValueError(f"section symbols must be {spec.J} bits")
    pb = spec.parity_bits
    return sym.value >> pb, sym.value & ((1 << pb) - 1)


def _checkable_equations(spec: LlcSpec, length: int) -> list[int]:
    """Equation indices whose full dependency window lies inside a prefix.

    For a prefix of sections ``0..length-1`` only equations ``M..length-1``
    are determined; a complete path additionally closes the loop through
    equations ``0..M-1``.  A prefix no longer than ``M`` therefore has
    nothing to check at all.
    """
    eqs = list(range(spec.M, length))
    if length == spec.L:
        eqs += list(range(spec.M))
    return eqs


def check_parity(spec: LlcSpec, path: Path) -> bool:
    """True iff every determined parity equation holds on an erasure-free path."""
    if path.erased_at is not None:
        raise ValueError("check_parity expects a path without erased slots")
    if len(path.slots) > spec.L:
        raise ValueError("path longer than the code block")
    infos = []
    pars = []
    for sym in path.slots:
        i, p = _split_symbol(spec, sym)  # type: ignore[arg-type]
        infos.append(i)
        pars.append(p)
    for eq in _checkable_equations(spec, len(path.slots)):
        acc = 0
        for r in range(1, spec.M + 1):
            wr = BitRow(spec.m, infos[(eq - r) % spec.L])
            acc ^= row_mul(wr, spec.G[r - 1]).value
        if acc != pars[eq]:
            return False
    return True


def check_parity_with_recovery(spec: LlcSpec, path: Path) -> RecoveryVerdict:
    """Parity check that tolerates one erased slot and reconstructs it.

    Equations that do not touch the erased section are checked directly.
    The first determined equation that does touch it is solved for the
    missing info bits (unique because every ``G_r`` has full row rank);
    each further determined equation must then agree with that value, and
    a disagreement marks the path inconsistent.  The equation of the erased
    section itself is never checked since its parity bits were erased with
    the symbol.
    """
    if len(path.slots) > spec.L:
        raise ValueError("path longer than the code block")
    e = path.erased_at
    if e is None:
        return RecoveryVerdict(check_parity(spec, path), None)
    infos: list[Optional[int]] = []
    pars: list[Optional[int]] = []
    for sym in path.slots:
        if sym is None:
            infos.append(None)
            pars.append(None)
        else:
            i, p = _split_symbol(spec, sym)
            infos.append(i)
            pars.append(p)
    recovered: Optional[int] = None
    if path.recovered is not None:
        if path.recovered.width != spec.m:
            raise ValueError("recovered info bits must be m bits wide")
        recovered = path.recovered.value
    for eq in _checkable_equations(spec, len(path.slots)):
        if eq == e:
            continue
        acc = 0
        missing_r = None
        for r in range(1, spec.M + 1):
            sec = (eq - r) % spec.L
            wv = infos[sec] if sec != e else recovered
            if wv is None:
                missing_r = r
                continue
            acc ^= row_mul(BitRow(spec.m, wv), spec.G[r - 1]).value
        target = pars[eq]
        assert target is not None
        if missing_r is None:
            if acc != target:
                return RecoveryVerdict(False, None)
        else:
            t = BitRow(spec.parity_bits, acc ^ target)
            x = solve_row(spec.G[missing_r - 1], t, spec.Ginv[missing_r - 1])
            if x is None:
                return RecoveryVerdict(False, None)
            recovered = x.value
    rec_row = BitRow(spec.m, recovered) if recovered is not None else None
    return RecoveryVerdict(True, rec_row)


def extract_info_bits(spec: LlcSpec, path: Path) -> BitRow:
    """Concatenate the m info bits of each section of a complete path."""
    if len(path.slots) != spec.L:
        raise ValueError("path must cover all L sections")
    acc = 0
    for sym in path.slots:
        if sym is None:
            if path.recovered is None:
                raise ValueError("erased slot has no recovered info bits")
            part = path.recovered.value
        else:
            part, _ = _split_symbol(spec, sym)
        acc = (acc << spec.m) | part
    return BitRow(spec.B, acc)
