"""Tree-code baseline: causal parities that grow with the section index.

Section ``l`` carries ``m(l)`` information bits and ``J - m(l)`` parity
bits computed from *all* earlier sections, so the per-section parity width
is free to increase along the block.  Decoding is plain forward stitching
with no erasure tolerance: a user whose codeword loses any section is
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from . import _gf2vec as gv
from .channel import ChannelOutput
from .decoder import DecodeResult, DEFAULT_PATH_CAP, _backtrack, _check_cap
from .gf2 import BitMatrix, BitRow, row_mul
from .llc import Codeword, MAX_SECTION_BITS

_U64 = np.uint64

# Tuned info-bit allocation for the B=128, L=16, J=16 operating point; other
# geometries fall back to an even split.  Exposed through the CLI so
# alternative tunings can be swept.  The two final sections carry parity
# only: info bits in the last section would never be cross-checked by a
# later equation, and a wrong-but-consistent final symbol (odds 2^-p per
# candidate) would hallucinate a near-duplicate payload.
_TUNED_PROFILE = (16, 12, 12, 12, 8, 8, 8, 8, 8, 8, 8, 8, 8, 4, 0, 0)


@dataclass(frozen=True)
class TreeSpec:
    """Immutable tree-code definition.

    ``G[l_src][l_dst]`` maps the info bits of section ``l_src`` into the
    parity of section ``l_dst`` (only for ``l_src < l_dst``); entries are
    ``None`` where either side is degenerate (no info or no parity bits).
    """

    L: int
    J: int
    m_profile: tuple[int, ...]
    seed: int
    G: tuple[tuple[Optional[BitMatrix], ...], ...]

    @property
    def B(self) -> int:
        return sum(self.m_profile)

    def parity_bits(self, l: int) -> int:
        return self.J - self.m_profile[l]


def default_m_profile(L: int, J: int, B: int) -> tuple[int, ...]:
    """Info-bit allocation summing to B with non-decreasing parity widths."""
    if (L, J, B) == (16, 16, 128):
        return _TUNED_PROFILE
    base, extra = divmod(B, L)
    if base > J or (base == J and extra):
        raise ValueError(f"B={B} does not fit in {L} sections of {J} bits")
    profile = [base + 1] * extra + [base] * (L - extra)
    return tuple(profile)


def tree_new(L: int, J: int, m_profile: Sequence[int], seed: int,
             expected_b: Optional[int] = None) -> TreeSpec:
    """Draw a tree code with uniformly random parity sub-matrices.

    Full rank is not required: the decoder never solves for lost bits.

    Raises:
        ValueError: if the profile length or sum is wrong, any ``m(l)`` is
            outside ``[0, J]``, or the parity widths decrease somewhere.
    """
    profile = tuple(int(v) for v in m_profile)
    if L < 1 or len(profile) != L:
        raise ValueError("m_profile must list one info width per section")
    if J > MAX_SECTION_BITS:
        raise ValueError(f"J must be at most {MAX_SECTION_BITS}")
    if any(not 0 <= v <= J for v in profile):
        raise ValueError("every m(l) must lie in [0, J]")
    if expected_b is not None and sum(profile) != expected_b:
        raise ValueError(
            f"m_profile sums to {sum(profile)}, expected B={expected_b}")
    pwidths = [J - v for v in profile]
    if any(pwidths[l] < pwidths[l - 1] for l in range(1, L)):
        raise ValueError("parity width must be non-decreasing across sections")
    rng = np.random.default_rng(seed)
    G: list[tuple[Optional[BitMatrix], ...]] = []
    for src in range(L):
        row: list[Optional[BitMatrix]] = []
        for dst in range(L):
            if src >= dst or profile[src] == 0 or pwidths[dst] == 0:
                row.append(None)
            else:
                bits = rng.integers(0, 2, size=(profile[src], pwidths[dst]),
                                    dtype=np.uint8)
                row.append(BitMatrix.from_rows(bits.tolist()))
        G.append(tuple(row))
    return TreeSpec(L=L, J=J, m_profile=profile, seed=seed, G=tuple(G))


def partition_payload(spec: TreeSpec, w: BitRow) -> list[Optional[BitRow]]:
    """Split a payload along the profile; sections with m(l)=0 yield None."""
    if w.width != spec.B:
        raise ValueError(f"payload must be {spec.B} bits, got {w.width}")
    out: list[Optional[BitRow]] = []
    consumed = 0
    for ml in spec.m_profile:
        if ml == 0:
            out.append(None)
            continue
        shift = spec.B - consumed - ml
        out.append(BitRow(ml, (w.value >> shift) & ((1 << ml) - 1)))
        consumed += ml
    return out


def tree_encode(spec: TreeSpec, w: BitRow) -> Codeword:
    """Encode a payload: section l = info(l) . parity-from-sections-before-l."""
    chunks = partition_payload(spec, w)
    sections = []
    for dst in range(spec.L):
        acc = 0
        for src in range(dst):
            g = spec.G[src][dst]
            if g is not None:
                acc ^= row_mul(chunks[src], g).value  # type: ignore[arg-type]
        info_val = chunks[dst].value if chunks[dst] is not None else 0
        sections.append(BitRow(spec.J, (info_val << spec.parity_bits(dst)) | acc))
    return Codeword(sections=tuple(sections))


class _TreeTables:
    def __init__(self, spec: TreeSpec):
        self.maps: dict[tuple[int, int], gv.RowMap] = {}
        for src in range(spec.L):
            for dst in range(src + 1, spec.L):
                g = spec.G[src][dst]
                if g is not None:
                    self.maps[(src, dst)] = gv.RowMap(g)


@lru_cache(maxsize=None)
def _tables(spec: TreeSpec) -> _TreeTables:
    return _TreeTables(spec)


def encode_symbols(spec: TreeSpec, winfo: np.ndarray) -> np.ndarray:
    """Vectorized encoder: (K, L) info matrix -> (K, L) uint64 symbol matrix."""
    tabs = _tables(spec)
    winfo = winfo.astype(_U64, copy=False)
    K = winfo.shape[0]
    par = np.zeros((K, spec.L), dtype=_U64)
    for (src, dst), rmap in tabs.maps.items():
        par[:, dst] ^= rmap.apply(winfo[:, src])
    out = np.empty_like(winfo)
    for l in range(spec.L):
        out[:, l] = (winfo[:, l] << _U64(spec.parity_bits(l))) | par[:, l]
    return out


def info_matrix(spec: TreeSpec, payload_values: Sequence[int]) -> np.ndarray:
    """Pack payload integers into a (K, L) per-section info matrix."""
    K = len(payload_values)
    out = np.zeros((K, spec.L), dtype=_U64)
    offsets = []
    consumed = 0
    for ml in spec.m_profile:
        offsets.append(spec.B - consumed - ml)
        consumed += ml
    for k, w in enumerate(payload_values):
        for l, ml in enumerate(spec.m_profile):
            if ml:
                out[k, l] = (w >> offsets[l]) & ((1 << ml) - 1)
    return out


def _fold_payload(spec: TreeSpec, info_row: np.ndarray) -> int:
    acc = 0
    for l, ml in enumerate(spec.m_profile):
        if ml:
            acc = (acc << ml) | int(info_row[l])
    return acc


def tree_decode(spec: TreeSpec, Y: ChannelOutput,
                path_cap: int = DEFAULT_PATH_CAP) -> DecodeResult:
    """Forward stitching with causal checks only; no wrap, no erasure slot.

    Section l's parity is verified as soon as sections 0..l are explicit,
    which for this code means at the moment the candidate is attached.  Any
    erased section of a user therefore drops that user.
    """
    if Y.L != spec.L or Y.J != spec.J:
        raise ValueError(
            f"channel output geometry (L={Y.L}, J={Y.J}) does not match "
            f"code (L={spec.L}, J={spec.J})")
    tabs = _tables(spec)
    L = spec.L
    secs = [s.astype(_U64, copy=False) for s in Y.sections]

    # Section 0 has no earlier sections, so its parity must be all zero;
    # with m(0) == J the mask is empty and every entry roots a path.
    pb0 = spec.parity_bits(0)
    roots_all = secs[0]
    roots = roots_all[(roots_all & _U64((1 << pb0) - 1)) == 0] if pb0 else roots_all
    n_roots = len(roots)
    sym_gens = [roots]
    par_gens = [np.full(n_roots, -1, dtype=np.int64)]
    root = np.arange(n_roots, dtype=np.int64)
    # pred[:, t] accumulates the parity of section t implied by the path's
    # info bits so far; column t is final once the path reaches section t.
    pred = np.zeros((n_roots, L), dtype=_U64)
    if spec.m_profile[0]:
        info0 = roots >> _U64(pb0)
        for dst in range(1, L):
            rmap = tabs.maps.get((0, dst))
            if rmap is not None:
                pred[:, dst] = rmap.apply(info0)

    for l in range(1, L):
        cands = secs[l]
        pb = spec.parity_bits(l)
        pmask = _U64((1 << pb) - 1)
        cpar = cands & pmask
        cinfo = cands >> _U64(pb)
        P = len(sym_gens[-1])
        if pb == 0:
            pidx, cidx = gv.cross_join(P, len(cands))
        else:
            index = gv.CandidateIndex(cpar, pb)
            pidx, cidx = index.join(pred[:, l])
        sym_gens.append(cands[cidx])
        par_gens.append(pidx)
        root = root[pidx]
        pred = pred[pidx]
        if spec.m_profile[l]:
            newinfo = cinfo[cidx]
            for dst in range(l + 1, L):
                rmap = tabs.maps.get((l, dst))
                if rmap is not None:
                    pred[:, dst] ^= rmap.apply(newinfo)
        _check_cap(root, n_roots, path_cap, l, roots)

    smat = _backtrack(sym_gens, par_gens)
    infos = np.empty_like(smat)
    for l in range(L):
        infos[:, l] = smat[:, l] >> _U64(spec.parity_bits(l))
    decoded = frozenset(
        BitRow(spec.B, _fold_payload(spec, infos[i])) for i in range(len(smat)))
    surviving = frozenset(BitRow(spec.J, int(v)) for v in np.unique(smat[:, 0])) \
        if len(smat) else frozenset()
    return DecodeResult(decoded=decoded, phase1_count=len(decoded),
                        phase2_count=0, surviving_roots=surviving)
