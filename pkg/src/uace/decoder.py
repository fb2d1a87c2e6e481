"""Two-phase stitching decoder for the linked-loop code.

Phase 1 threads parity-consistent symbols section by section, starting from
every entry of the section-0 list, and keeps the complete paths that also
satisfy the wrap-around equations.  Phase 2 restarts from the section-0
entries that produced no phase-1 path; each of its paths may absorb one
presumed-erased slot, whose info bits are then reconstructed from the first
parity equation that pins them down and cross-checked against every later
equation that involves them.

The decoder operates on whole path populations at once: paths live in
parallel numpy arrays (symbol, parent pointer, last-M info window, erased
slot bookkeeping) and each section step is a vectorized extend/filter pass.
Expansion order is fixed (sections in order, candidates in ascending symbol
order, paths in insertion order) so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import _gf2vec as gv
from .channel import ChannelOutput
from .gf2 import BitRow
from .llc import LlcSpec, Path

DEFAULT_PATH_CAP = 1_000_000

_U64 = np.uint64
_IDX = np.int32
# Sentinel for a not-yet-reconstructed erased slot; info values use at most
# MAX_SECTION_BITS/2 < 62 bits, so this cannot collide.
_UNKNOWN = _U64(1) << _U64(62)


class PathExplosionError(RuntimeError):
    """Raised when one root's live-path count exceeds the configured cap."""

    def __init__(self, root_value: int, section: int, count: int, cap: int,
                 trial: Optional[int] = None):
        self.root_value = root_value
        self.section = section
        self.count = count
        self.cap = cap
        self.trial = trial
        where = f" in trial {trial}" if trial is not None else ""
        super().__init__(
            f"path cap exceeded{where}: root {root_value:#x} reached "
            f"{count} live paths at section {section} (cap {cap})")


@dataclass(frozen=True)
class DecodeResult:
    """Union of both decoding phases, with per-phase attribution."""

    decoded: frozenset[BitRow]
    phase1_count: int
    phase2_count: int
    surviving_roots: frozenset[BitRow]

    @property
    def k_hat(self) -> int:
        return len(self.decoded)


class _Tables:
    """Per-spec vectorized parity maps: mul[r-1] applies G_r, solver[r-1] inverts it."""

    def __init__(self, spec: LlcSpec):
        self.mul = [gv.RowMap(g) for g in spec.G]
        self.solver = [gv.RowSolver(g) for g in spec.G]


@lru_cache(maxsize=None)
def _tables(spec: LlcSpec) -> _Tables:
    return _Tables(spec)


def encode_symbols(spec: LlcSpec, winfo: np.ndarray) -> np.ndarray:
    """Vectorized encoder: (K, L) info matrix -> (K, L) uint64 symbol matrix."""
    tabs = _tables(spec)
    L, pb = spec.L, spec.parity_bits
    winfo = winfo.astype(_U64, copy=False)
    out = np.empty_like(winfo)
    for l in range(L):
        par = tabs.mul[0].apply(winfo[:, (l - 1) % L])
        for r in range(2, spec.M + 1):
            par ^= tabs.mul[r - 1].apply(winfo[:, (l - r) % L])
        out[:, l] = (winfo[:, l] << _U64(pb)) | par
    return out


class _Sections:
    """Channel output pre-split into parity/info parts with join indexes."""

    def __init__(self, spec: LlcSpec, Y: ChannelOutput):
        pb = spec.parity_bits
        pmask = _U64((1 << pb) - 1)
        self.sym = [s.astype(_U64, copy=False) for s in Y.sections]
        self.par = [s & pmask for s in self.sym]
        self.info = [s >> _U64(pb) for s in self.sym]
        self.index = [gv.CandidateIndex(p, pb) for p in self.par]


def _require_geometry(spec: LlcSpec, Y: ChannelOutput) -> None:
    if Y.L != spec.L or Y.J != spec.J:
        raise ValueError(
            f"channel output geometry (L={Y.L}, J={Y.J}) does not match "
            f"code (L={spec.L}, J={spec.J})")


def _check_cap(root_idx: np.ndarray, n_roots: int, cap: int, section: int,
               root_syms: np.ndarray) -> None:
    if len(root_idx) <= cap:
        return
    counts = np.bincount(root_idx, minlength=n_roots)
    worst = int(counts.max())
    if worst > cap:
        root_value = int(root_syms[int(np.argmax(counts))])
        raise PathExplosionError(root_value, section, worst, cap)


def _backtrack(sym_gens: list[np.ndarray], par_gens: list[np.ndarray]) -> np.ndarray:
    """Reassemble complete paths into a (paths, L) symbol matrix."""
    L = len(sym_gens)
    n = len(sym_gens[-1])
    smat = np.empty((n, L), dtype=_U64)
    cur = np.arange(n, dtype=np.int64)
    for l in range(L - 1, -1, -1):
        smat[:, l] = sym_gens[l][cur]
        cur = par_gens[l][cur]
    return smat


def _fold_payloads(W: np.ndarray, m: int) -> list[int]:
    out = []
    for row in W:
        acc = 0
        for v in row:
            acc = (acc << m) | int(v)
        out.append(acc)
    return out


def _phase1_arrays(spec: LlcSpec, sx: _Sections,
                   path_cap: int) -> tuple[np.ndarray, set[int], np.ndarray]:
    """Returns (complete consistent path matrix, payload ints, root symbol values)."""
    tabs = _tables(spec)
    L, M, pb = spec.L, spec.M, spec.parity_bits
    pmask = _U64((1 << pb) - 1)

    roots = sx.sym[0]
    n_roots = len(roots)
    sym_gens = [roots]
    par_gens = [np.full(n_roots, -1, dtype=_IDX)]
    root = np.arange(n_roots, dtype=_IDX)
    last = np.zeros((n_roots, M), dtype=_U64)
    last[:, 0] = sx.info[0]

    for l in range(1, L):
        P = len(sym_gens[-1])
        if l < M:
            pidx, cidx = gv.cross_join(P, len(sx.sym[l]))
        else:
            q = tabs.mul[0].apply(last[:, 0])
            for r in range(2, M + 1):
                q ^= tabs.mul[r - 1].apply(last[:, r - 1])
            pidx, cidx = sx.index[l].join(q)
        sym_gens.append(sx.sym[l][cidx])
        par_gens.append(pidx)
        root = root[pidx]
        new_last = np.empty((len(pidx), M), dtype=_U64)
        new_last[:, 0] = sx.info[l][cidx]
        if M > 1:
            new_last[:, 1:] = last[pidx, :-1]
        last = new_last
        _check_cap(root, n_roots, path_cap, l, roots)

    smat = _backtrack(sym_gens, par_gens)
    if len(smat) == 0:
        return smat, set(), np.empty(0, dtype=_U64)
    W = smat >> _U64(pb)
    keep = np.ones(len(smat), dtype=bool)
    for eq in range(M):
        pred = tabs.mul[0].apply(W[:, (eq - 1) % L])
        for r in range(2, M + 1):
            pred ^= tabs.mul[r - 1].apply(W[:, (eq - r) % L])
        keep &= pred == (smat[:, eq] & pmask)
    smat = smat[keep]
    payloads = set(_fold_payloads(smat >> _U64(pb), spec.m))
    root_vals = np.unique(smat[:, 0])
    return smat, payloads, root_vals


def _phase2_arrays(spec: LlcSpec, sx: _Sections, excluded_roots: np.ndarray,
                   path_cap: int) -> set[int]:
    """Payload ints decoded from roots that produced no phase-1 path."""
    tabs = _tables(spec)
    L, M, pb = spec.L, spec.M, spec.parity_bits
    pmask = _U64((1 << pb) - 1)
    na_sym = _U64(1) << _U64(spec.J)

    roots = sx.sym[0][~np.isin(sx.sym[0], excluded_roots)]
    n_roots = len(roots)
    if n_roots == 0:
        return set()
    sym_gens = [roots]
    par_gens = [np.full(n_roots, -1, dtype=_IDX)]
    root = np.arange(n_roots, dtype=_IDX)
    last = np.zeros((n_roots, M), dtype=_U64)
    last[:, 0] = roots >> _U64(pb)
    na_pos = np.full(n_roots, -1, dtype=np.int16)
    na_val = np.full(n_roots, _UNKNOWN, dtype=_U64)

    for l in range(1, L):
        cands = sx.sym[l]
        nc = len(cands)
        P = len(sym_gens[-1])

        # Index blocks, assembled as [matched extensions | recovery
        # extensions per erased position | fresh erased-slot copies].
        pieces: list[tuple[np.ndarray, np.ndarray]] = []  # (parents, cand idx)
        rec_vals: list[tuple[int, np.ndarray, int]] = []  # (start, values, slot)

        if l < M:
            # No parity equation is determined yet: every candidate attaches.
            pieces.append(gv.cross_join(P, nc))
            n_ext = P * nc
        else:
            pending = (na_pos >= 0) & (na_val == _UNKNOWN)
            if pending.any():
                known_idx = np.nonzero(~pending)[0].astype(_IDX)
                pend_idx = np.nonzero(pending)[0].astype(_IDX)
            else:
                known_idx = None
                pend_idx = np.empty(0, dtype=_IDX)
            lastk = last if known_idx is None else last[known_idx]
            q = tabs.mul[0].apply(lastk[:, 0])
            for r in range(2, M + 1):
                q ^= tabs.mul[r - 1].apply(lastk[:, r - 1])
            kq, kc = sx.index[l].join(q)
            pieces.append((kq if known_idx is None else known_idx[kq], kc))
            n_ext = len(kq)
            for e in np.unique(na_pos[pend_idx]) if len(pend_idx) else ():
                # The equation of section l is the first one that pins down
                # the info bits of the slot erased at section e; solving it
                # is linear, so the per-path and per-candidate halves of the
                # solution combine by a broadcast XOR.
                ridx = pend_idx[na_pos[pend_idx] == e]
                r_e = l - int(e)
                solver = tabs.solver[r_e - 1]
                base = np.zeros(len(ridx), dtype=_U64)
                for r in range(1, M + 1):
                    if r != r_e:
                        base ^= tabs.mul[r - 1].apply(last[ridx, r - 1])
                x_path = solver.backward(base)
                x_cand = solver.backward(sx.par[l])
                x = (x_path[:, None] ^ x_cand[None, :]).ravel()
                bq, bc = gv.cross_join(len(ridx), nc)
                if not solver.always_solvable:
                    t = (base[:, None] ^ sx.par[l][None, :]).ravel()
                    ok = solver.forward(x) == t
                    bq, bc, x = bq[ok], bc[ok], x[ok]
                pieces.append((ridx[bq], bc))
                rec_vals.append((n_ext, x, r_e))
                n_ext += len(bq)

        sp = np.nonzero(na_pos < 0)[0].astype(_IDX)
        n_new = n_ext + len(sp)

        pidx_all = np.concatenate([p for p, _ in pieces] + [sp])
        cidx_ext = np.concatenate([c for _, c in pieces]) if n_ext else \
            np.empty(0, dtype=_IDX)

        sym = np.empty(n_new, dtype=_U64)
        info = np.empty(n_new, dtype=_U64)
        if n_ext:
            sym[:n_ext] = cands[cidx_ext]
            info[:n_ext] = sx.info[l][cidx_ext]
        sym[n_ext:] = na_sym
        info[n_ext:] = _UNKNOWN

        new_val = na_val[pidx_all]
        for start, values, _ in rec_vals:
            new_val[start:start + len(values)] = values
        new_val[n_ext:] = _UNKNOWN
        new_pos = na_pos[pidx_all]
        new_pos[n_ext:] = l

        new_last = np.empty((n_new, M), dtype=_U64)
        new_last[:, 0] = info
        if M > 1:
            new_last[:, 1:] = last[pidx_all, :-1]
        for start, values, slot in rec_vals:
            if 1 <= slot <= M - 1:
                new_last[start:start + len(values), slot] = values

        sym_gens.append(sym)
        par_gens.append(pidx_all)
        root = root[pidx_all]
        na_val, na_pos, last = new_val, new_pos, new_last
        _check_cap(root, n_roots, path_cap, l, roots)

    smat = _backtrack(sym_gens, par_gens)
    if len(smat) == 0:
        return set()
    W = smat >> _U64(pb)
    rows = np.nonzero(na_pos >= 0)[0]
    W[rows, na_pos[rows]] = na_val[rows]
    keep = np.ones(len(smat), dtype=bool)

    # A slot erased at the last section meets its first determining equation
    # only when the loop closes; solve it from wrap equation 0 now.
    pend = np.nonzero(na_val == _UNKNOWN)[0]
    if len(pend):
        t = smat[pend, 0] & pmask
        for r in range(2, M + 1):
            t ^= tabs.mul[r - 1].apply(W[pend, (0 - r) % L])
        x, ok = tabs.solver[0].solve(t)
        keep[pend] &= ok
        W[pend, L - 1] = x

    for eq in range(M):
        pred = tabs.mul[0].apply(W[:, (eq - 1) % L])
        for r in range(2, M + 1):
            pred ^= tabs.mul[r - 1].apply(W[:, (eq - r) % L])
        ok = pred == (smat[:, eq] & pmask)
        ok |= na_pos == eq  # that section's own parity was erased with it
        keep &= ok

    return set(_fold_payloads(W[keep], spec.m))


def decode_phase1(spec: LlcSpec, Y: ChannelOutput,
                  path_cap: int = DEFAULT_PATH_CAP
                  ) -> tuple[frozenset[Path], frozenset[BitRow]]:
    """Erasure-free stitching: complete consistent paths and their payloads."""
    _require_geometry(spec, Y)
    smat, payload_ints, _ = _phase1_arrays(spec, _Sections(spec, Y), path_cap)
    paths = frozenset(
        Path(slots=tuple(BitRow(spec.J, int(v)) for v in row))
        for row in smat)
    w1 = frozenset(BitRow(spec.B, v) for v in payload_ints)
    return paths, w1


def decode_phase2(spec: LlcSpec, Y: ChannelOutput,
                  surviving_roots: Iterable[BitRow],
                  path_cap: int = DEFAULT_PATH_CAP) -> frozenset[BitRow]:
    """One-erasure stitching from the roots phase 1 left unexplained."""
    _require_geometry(spec, Y)
    excluded = np.array(sorted(r.value for r in surviving_roots), dtype=_U64)
    w2 = _phase2_arrays(spec, _Sections(spec, Y), excluded, path_cap)
    return frozenset(BitRow(spec.B, v) for v in w2)


def decode(spec: LlcSpec, Y: ChannelOutput,
           path_cap: int = DEFAULT_PATH_CAP) -> DecodeResult:
    """Run both phases and merge their payload sets."""
    _require_geometry(spec, Y)
    sx = _Sections(spec, Y)
    _, w1_ints, root_vals = _phase1_arrays(spec, sx, path_cap)
    w2_ints = _phase2_arrays(spec, sx, root_vals, path_cap)
    decoded = frozenset(BitRow(spec.B, v) for v in (w1_ints | w2_ints))
    return DecodeResult(
        decoded=decoded,
        phase1_count=len(w1_ints),
        phase2_count=len(w2_ints),
        surviving_roots=frozenset(BitRow(spec.J, int(v)) for v in root_vals),
    )
