#!/usr/bin/env python3
"""Show how locking non-candidate words cuts per-step power during a search.

Words that lack one of the keyword's required 1 bits can never match, so
they are locked before the search program runs.  Locking never changes the
outcome (a locked word's flag would have stayed clear anyway); it only
silences the word's horizontal line, which the power model then drops.

Example:
    python3 scripts/power_gating_demo.py --key-width 6 --keyword 101100 --seed 7
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

sys.path.insert(0, "src")

from lockstep.compilers import compile_keyword, full_assignment_array
from lockstep.costmodel import CostParams, lockstep_power
from lockstep.engine import Word, WordArray


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--key-width", type=int, default=6, help="key bits per word")
    parser.add_argument(
        "--keyword", help="bit string to search for (default: random of key width)"
    )
    parser.add_argument(
        "--words",
        default="full",
        help="word count, a number for a random array or 'full' for the whole count",
    )
    parser.add_argument("--seed", type=int, default=2026)
    parser.add_argument("--p1", type=Fraction, default=Fraction(1))
    parser.add_argument("--p2", type=Fraction, default=Fraction(1))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    rng = random.Random(args.seed)
    k = args.key_width
    if k < 1:
        print("key width must be at least 1", file=sys.stderr)
        return 2
    keyword = args.keyword or "".join(rng.choice("01") for _ in range(k))
    if len(keyword) != k or set(keyword) - {"0", "1"}:
        print(f"keyword must be {k} bits of 0/1, got {keyword!r}", file=sys.stderr)
        return 2

    key_bits = tuple(range(k, 0, -1))
    if args.words == "full":
        array = full_assignment_array(k)
    else:
        count = int(args.words)
        array = WordArray(
            [Word(rng.getrandbits(k) << 1) for _ in range(count)], k + 1
        )
    total = len(array)
    program = compile_keyword(keyword, key_bits, flag=0)
    params = CostParams(p1=args.p1, p2=args.p2)

    # a word missing any required 1 can never match, so it may sit the search out
    required_ones = tuple(bit for ch, bit in zip(keyword, key_bits) if ch == "1")
    locked = array.lock_where(required_ones, sense="mismatch")
    active = array.active_words()

    array.apply_program(program)
    matches = array.locate_flags(0)

    print(f"keyword {keyword} over bits {','.join(map(str, key_bits))}, flag bit 0")
    print(f"words: {total} total, {locked} locked as hopeless, {active} still active")
    print(f"search program: {len(program)} steps")
    print(f"matches: {[f'word {i}' for i in matches] or 'none'}")
    print(f"counters: {array.counters}")
    full_power = lockstep_power(params, k, total)
    gated_power = lockstep_power(params, k, active)
    saved = Fraction(total - active, total)
    print(f"per-step power: {full_power} ungated, {gated_power} gated")
    print(f"word-line power saved: {float(saved):.1%} of {total} lines")

    # sanity: gating must not have changed the answer
    array.unlock_all()
    array.apply_program(program)  # clear the flags
    array.apply_program(program)  # redo the search with every word live
    if array.locate_flags(0) != matches:
        print("gated and ungated searches disagree", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
