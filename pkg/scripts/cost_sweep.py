#!/usr/bin/env python3
"""Sweep word width and print the analytic machine comparison as a table.

Each row scores one controlled-NOT step at a given key width n: the serial
content-addressed baseline against the lockstep array, with time, power and
their product side by side.  Optionally cross-checks the closed forms
against the executable serial reference on small widths.

Example:
    python3 scripts/cost_sweep.py --n-max 12 --controls 1 --words 64 --empirical-max 8
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

sys.path.insert(0, "src")

from lockstep.costmodel import CamState, CostParams, compare, match_fraction
from lockstep.engine import Gate

COLUMNS = (
    ("n", 3),
    ("f", 8),
    ("cam_t", 12),
    ("arr_t", 6),
    ("cam_p", 14),
    ("arr_p", 8),
    ("pdp_ratio", 14),
)


def fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-min", type=int, default=1)
    parser.add_argument("--n-max", type=int, default=14)
    pick = parser.add_mutually_exclusive_group()
    pick.add_argument(
        "--controls", type=int, default=1, help="controls per gate, sets f = 2^-c"
    )
    pick.add_argument("--f", type=fraction, help="explicit match fraction")
    parser.add_argument(
        "--words",
        default="64",
        help="array length, a number or 'full' for 2^(n+1)",
    )
    parser.add_argument("--delta1", type=fraction, default=Fraction(1))
    parser.add_argument("--delta2", type=fraction, default=Fraction(1))
    parser.add_argument("--p1", type=fraction, default=Fraction(1))
    parser.add_argument("--p2", type=fraction, default=Fraction(1))
    parser.add_argument(
        "--empirical-max",
        type=int,
        default=-1,
        help="also run the serial reference for n up to this (costly past ~14)",
    )
    return parser


def words_for(setting: str, n: int) -> int:
    if setting == "full":
        return 1 << (n + 1)
    return int(setting)


def fmt(value) -> str:
    if isinstance(value, Fraction) and value.denominator == 1:
        return str(value.numerator)
    if isinstance(value, Fraction) and value.denominator > 9999:
        return f"{float(value):.4g}"
    return str(value)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    params = CostParams(args.delta1, args.delta2, args.p1, args.p2)
    if args.n_min < 0 or args.n_max < args.n_min:
        print("empty width range", file=sys.stderr)
        return 2

    header = "".join(name.rjust(pad) for name, pad in COLUMNS)
    print(header)
    print("-" * len(header))
    for n in range(args.n_min, args.n_max + 1):
        if args.f is not None:
            f = args.f
        else:
            if args.controls > n:
                continue
            f = Fraction(1, 1 << args.controls)
        words = words_for(args.words, n)
        report = compare(params, f=f, n=n, words=words)
        cells = (
            str(n),
            fmt(report.f),
            fmt(report.cam_time),
            fmt(report.lockstep_time),
            fmt(report.cam_power),
            fmt(report.lockstep_power),
            f"{float(report.pdp_ratio):.4g}",
        )
        print("".join(cell.rjust(pad) for cell, (_, pad) in zip(cells, COLUMNS)))

    if args.empirical_max >= 0:
        print()
        print("serial reference on full counts (counter cross-check):")
        c = args.controls if args.f is None else 0
        for n in range(args.n_min, min(args.n_max, args.empirical_max) + 1):
            if c > n:
                continue
            gate = Gate(frozenset(range(n, n - c, -1)), frozenset({0}))
            state = CamState.full_count(n + 1)
            state.controlled_not(gate)
            f = match_fraction(gate, n + 1)
            drift = state.counted_time(params) - compare(
                params, f=f, n=n, words=1 << (n + 1)
            ).cam_time
            print(
                f"  n={n:2d}  rewrites={state.counters.multi_reads:6d}"
                f"  counted_time={fmt(state.counted_time(params)):>8}"
                f"  drift={fmt(drift)}"
            )

    if args.n_max - args.n_min >= 1 and args.f is None:
        lo = compare(params, f=Fraction(1, 1 << args.controls), n=max(args.n_min, args.controls), words=words_for(args.words, args.n_min))
        hi = compare(params, f=Fraction(1, 1 << args.controls), n=args.n_max, words=words_for(args.words, args.n_max))
        span = args.n_max - max(args.n_min, args.controls)
        if span > 0 and lo.pdp_ratio > 0:
            rate = math.log2(float(hi.pdp_ratio / lo.pdp_ratio)) / span
            print()
            print(f"combined-advantage growth: {rate:.2f} doublings per extra bit")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
