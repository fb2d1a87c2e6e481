"""Command-line front end: Monte Carlo sweeps and encode/decode demos.

``simulate`` appends one CSV row per erasure probability; ``demo`` walks a
single payload through encoding, one optional erasure, and both decoding
phases.  All configuration comes from flags (seeds included), so a run is
reproducible from the shell history alone.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional, Sequence

from .channel import output_from_rows
from .decoder import DEFAULT_PATH_CAP, PathExplosionError, decode
from .gf2 import BitRow
from .llc import llc_encode, llc_new
from .metrics import estimate
from .tree import default_m_profile, tree_new

CSV_HEADER = ("code,K,pe,B,L,J,M,trials,seed,pdp,php,pdp_ci95,php_ci95,"
              "avg_khat,collisions,elapsed_ms")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _parse_pe_list(text: str) -> list[float]:
    vals = [float(p) for p in text.split(",") if p.strip() != ""]
    if not vals:
        raise argparse.ArgumentTypeError("at least one erasure probability required")
    if any(not 0.0 <= v <= 1.0 for v in vals):
        raise argparse.ArgumentTypeError("erasure probabilities must lie in [0, 1]")
    return vals


def _parse_profile(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",")]
    except ValueError as err:
        raise argparse.ArgumentTypeError("m-profile must be comma-separated integers") from err


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uace",
                                     description="Codecs and Monte Carlo runs "
                                                 "for the erasure A-channel")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="estimate PDP/PHP over a p_e sweep")
    sim.add_argument("--code", choices=("llc", "tc"), required=True)
    sim.add_argument("--k", type=int, default=100, help="active users per trial")
    sim.add_argument("--b", type=int, default=128, help="payload bits")
    sim.add_argument("--l", type=int, default=16, help="sections per codeword")
    sim.add_argument("--j", type=int, default=16, help="bits per section")
    sim.add_argument("--m-depth", type=int, default=2,
                     help="parity memory depth (llc only)")
    sim.add_argument("--m-profile", type=_parse_profile, default=None,
                     help="per-section info bits, comma separated (tc only)")
    sim.add_argument("--pe", type=_parse_pe_list, required=True,
                     help="erasure probability or comma-separated sweep")
    sim.add_argument("--trials", type=int, default=400)
    sim.add_argument("--seed", type=int, required=True,
                     help="master seed (mandatory: no silent time-based default)")
    sim.add_argument("--out", required=True, help="CSV file to append to")
    sim.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sim.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP,
                     help="abort a trial when one root exceeds this many live paths")

    demo = sub.add_parser("demo", help="encode one payload, erase, decode")
    demo.add_argument("--payload-hex", required=True,
                      help="payload as hex, exactly B/4 digits")
    demo.add_argument("--l", type=int, default=16)
    demo.add_argument("--j", type=int, default=16)
    demo.add_argument("--m", type=int, default=8, help="info bits per section")
    demo.add_argument("--m-depth", type=int, default=2)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--erase-section", type=int, default=None,
                      help="section index to erase (omit for a clean channel)")
    return parser


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.trials < 1:
        print("error: --trials must be positive", file=sys.stderr)
        return 1
    if args.code == "llc":
        if args.b % args.l != 0:
            print(f"error: B={args.b} is not a multiple of L={args.l}",
                  file=sys.stderr)
            return 1
        spec = llc_new(args.l, args.j, args.b // args.l, args.m_depth, args.seed)
        m_col = args.m_depth
    else:
        profile = args.m_profile or default_m_profile(args.l, args.j, args.b)
        spec = tree_new(args.l, args.j, profile, args.seed, expected_b=args.b)
        m_col = 0

    new_file = not os.path.exists(args.out) or os.path.getsize(args.out) == 0
    with open(args.out, "a", encoding="utf-8") as fh:
        if new_file:
            fh.write(CSV_HEADER + "\n")
        for pe in args.pe:
            start = time.perf_counter()
            row = estimate(spec, args.k, pe, args.trials, args.seed,
                           workers=args.workers, path_cap=args.path_cap)
            elapsed_ms = int((time.perf_counter() - start) * 1000)
            fields = [args.code, str(args.k), _fmt(pe), str(args.b), str(args.l),
                      str(args.j), str(m_col), str(args.trials), str(args.seed),
                      _fmt(row.pdp), _fmt(row.php), _fmt(row.pdp_ci95),
                      _fmt(row.php_ci95), _fmt(row.avg_khat),
                      str(row.collisions), str(elapsed_ms)]
            fh.write(",".join(fields) + "\n")
            fh.flush()
            print(f"{args.code} K={args.k} pe={_fmt(pe)}: "
                  f"pdp={_fmt(row.pdp)} php={_fmt(row.php)} "
                  f"avg_khat={_fmt(row.avg_khat)} ({args.trials} trials)")
    return 0


def _cmd_demo(args: argparse.Namespace) -> int:
    B = args.l * args.m
    if B % 4 != 0 or len(args.payload_hex) != B // 4:
        print(f"error: payload must be {B} bits = {B // 4} hex digits",
              file=sys.stderr)
        return 1
    try:
        value = int(args.payload_hex, 16)
    except ValueError:
        print("error: payload is not valid hex", file=sys.stderr)
        return 1
    spec = llc_new(args.l, args.j, args.m, args.m_depth, args.seed)
    payload = BitRow(B, value)
    cw = llc_encode(spec, payload)
    print(f"linked-loop code: L={spec.L} J={spec.J} m={spec.m} "
          f"M={spec.M} seed={spec.seed}")
    for l, sym in enumerate(cw.sections):
        s = str(sym)
        print(f"  section {l:2d}: {s[:spec.m]}|{s[spec.m:]}")

    erase = args.erase_section
    if erase is not None and not 0 <= erase < spec.L:
        print(f"error: erase section must lie in [0, {spec.L})", file=sys.stderr)
        return 1
    rows = [[sym] if l != erase else [] for l, sym in enumerate(cw.sections)]
    Y = output_from_rows(rows, spec.J)
    result = decode(spec, Y)

    if erase is None:
        print("no erasure applied")
    else:
        print(f"erased section {erase}")
    if payload in result.decoded:
        phase = "phase 1" if result.phase1_count else "phase 2"
        print(f"payload recovered via {phase}")
    else:
        print("payload unrecoverable (a lost section 0 cannot root any path)"
              if erase == 0 else "payload unrecoverable")
    print(f"decoded {result.k_hat} payload(s): "
          f"{result.phase1_count} in phase 1, {result.phase2_count} in phase 2")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_demo(args)
    except PathExplosionError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
