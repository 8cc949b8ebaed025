"""Command line front end.

Subcommands:

    run     apply a program file to a word file
    search  flag exact matches of a query pattern at chosen key bits
    sat     enumerate satisfying assignments of a formula
    gp      summarize global properties of a truth table
    cost    compare the CAM and lockstep cost models

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success
(including "no match" and UNSAT), 2 bad input, 3 program/word width
mismatch, 4 resource limit exceeded.  ``--format machine`` switches every
subcommand to a stable line-oriented ``key=value`` rendering, with repeated
keys for lists, that carries the same facts as the human output.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import compilers, costmodel, dsl, engine
from .engine import EngineError, Gate, ParseError, WordArray
from .formula import Formula, parse_formula, variables

_INDEX_RE = re.compile(r"\d+\Z")

# words above this count would be built for an empirical cost run or an
# exhaustive sat/gp sweep; overridable per command where the spec of the
# command allows, otherwise fixed
_DEFAULT_MAX_VARS = 20


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line for one invocation."""

    command: str
    machine: bool = False
    program_path: str | None = None
    words_path: str | None = None
    formula_path: str | None = None
    table_path: str | None = None
    flag: str | None = None
    trace: bool = False
    verify_locks: bool = False
    query: str | None = None
    key_bits: tuple[int, ...] | None = None
    n_vars: int | None = None
    max_vars: int = _DEFAULT_MAX_VARS
    check: bool = False
    n: int | None = None
    words: int | None = None
    controls: int | None = None
    delta1: Fraction = Fraction(1)
    delta2: Fraction = Fraction(1)
    p1: Fraction = Fraction(1)
    p2: Fraction = Fraction(1)
    lock_fraction: Fraction = Fraction(0)
    empirical: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {
            name: getattr(args, name)
            for name in cls.__dataclass_fields__
            if hasattr(args, name)
        }
        fields["machine"] = getattr(args, "format", "human") == "machine"
        return cls(**fields)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _read(path: str) -> str:
    with open(path, "r", encoding="ascii") as handle:
        return handle.read()


def _fmt(value: object) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(pairs: Sequence[tuple[str, object]]) -> None:
    for key, value in pairs:
        print(f"{key}={_fmt(value)}")


def _word_value(index: int, pattern: str, payload: int | None) -> str:
    if payload is None:
        return f"{index}:{pattern}"
    return f"{index}:{pattern}:{payload}"


def _resolve_bit(text: str, names: Mapping[str, int], width: int) -> int:
    if text in names:
        bit = names[text]
    elif _INDEX_RE.match(text):
        bit = int(text)
    else:
        raise ValueError(f"unknown bit name {text!r}")
    if not 0 <= bit < width:
        raise ValueError(f"bit index {bit} out of range for width {width}")
    return bit


# -- run -------------------------------------------------------------------


def _cmd_run(cfg: RunConfig) -> int:
    assert cfg.program_path is not None and cfg.words_path is not None
    try:
        program = dsl.parse(_read(cfg.program_path))
    except OSError as exc:
        return _fail(str(exc))
    except EngineError as exc:
        return _fail(f"{cfg.program_path}: {exc}")
    try:
        array = engine.parse_word_text(_read(cfg.words_path))
    except OSError as exc:
        return _fail(str(exc))
    except EngineError as exc:
        return _fail(f"{cfg.words_path}: {exc}")
    if array.width != program.width:
        print(
            f"error: program width {program.width} does not match"
            f" word width {array.width}",
            file=sys.stderr,
        )
        return 3
    flag_bit: int | None = None
    if cfg.flag is not None:
        try:
            flag_bit = _resolve_bit(cfg.flag, program.names, array.width)
        except ValueError as exc:
            return _fail(str(exc))

    trace: list[tuple[Gate, list[str]]] = []

    def record(step: int, gate: Gate) -> None:
        trace.append((gate, array.patterns()))

    try:
        array.apply_program(
            program,
            verify_locks=cfg.verify_locks,
            on_step=record if cfg.trace else None,
        )
    except EngineError as exc:
        return _fail(str(exc))

    flagged = array.locate_flags(flag_bit) if flag_bit is not None else None
    counters = array.counters
    if cfg.machine:
        pairs: list[tuple[str, object]] = [("width", array.width), ("steps", counters.steps)]
        for step, (gate, pats) in enumerate(trace, start=1):
            for i, pattern in enumerate(pats):
                pairs.append(("trace", f"{step}:{i}:{pattern}"))
        for i, word in enumerate(array.words):
            pairs.append(("word", _word_value(i, word.pattern(array.width), word.payload)))
        if flagged is not None:
            for i in flagged:
                pairs.append(("flagged", i))
        pairs += [
            ("bus_activations", counters.bus_activations),
            ("toggles", counters.toggles),
            ("locked_savings", counters.locked_savings),
        ]
        _emit(pairs)
    else:
        print(f"width: {array.width}")
        print(f"steps: {counters.steps}")
        for step, (gate, pats) in enumerate(trace, start=1):
            print(f"step {step}: {dsl.gate_text(gate, program.names)}")
            for i, pattern in enumerate(pats):
                print(f"  word {i}: {pattern}")
        for i, word in enumerate(array.words):
            suffix = "" if word.payload is None else f" payload={word.payload}"
            print(f"word {i}: {word.pattern(array.width)}{suffix}")
        if flagged is not None:
            for i in flagged:
                print(f"flagged: word {i} (pattern {array.pattern(i)})")
            print(f"flagged words: {len(flagged)}")
        print(
            f"counters: bus_activations={counters.bus_activations}"
            f" toggles={counters.toggles}"
            f" locked_savings={counters.locked_savings}"
        )
    return 0


# -- search ----------------------------------------------------------------


def _cmd_search(cfg: RunConfig) -> int:
    assert cfg.words_path is not None and cfg.query is not None
    assert cfg.key_bits is not None
    try:
        array = engine.parse_word_text(_read(cfg.words_path))
    except OSError as exc:
        return _fail(str(exc))
    except EngineError as exc:
        return _fail(f"{cfg.words_path}: {exc}")
    if not cfg.query:
        return _fail("query must not be empty")
    flag = cfg.flag if cfg.flag is not None else "0"
    try:
        flag_bit = _resolve_bit(flag, {}, array.width)
    except ValueError as exc:
        return _fail(str(exc))
    for bit in cfg.key_bits:
        if not 0 <= bit < array.width:
            return _fail(f"key bit {bit} out of range for width {array.width}")
    try:
        program = compilers.compile_keyword(cfg.query, cfg.key_bits, flag_bit)
    except (EngineError, ValueError) as exc:
        return _fail(str(exc))
    if any(array.read_flags(flag_bit)):
        return _fail(f"flag bit {flag_bit} must start clear in every word")
    array.apply_program(program)
    matches = array.locate_flags(flag_bit)
    key_bits_text = ",".join(str(b) for b in cfg.key_bits)
    if cfg.machine:
        pairs: list[tuple[str, object]] = [
            ("width", array.width),
            ("query", cfg.query),
            ("key_bits", key_bits_text),
            ("flag", flag_bit),
            ("steps", len(program)),
        ]
        for i in matches:
            word = array.words[i]
            pairs.append(("match", _word_value(i, word.pattern(array.width), word.payload)))
        pairs.append(("matches", len(matches)))
        _emit(pairs)
    else:
        print(f"width: {array.width}")
        print(f"query: {cfg.query}")
        print(f"key bits: {key_bits_text}")
        print(f"flag bit: {flag_bit}")
        print(f"steps: {len(program)}")
        for i in matches:
            word = array.words[i]
            extra = "" if word.payload is None else f", payload {word.payload}"
            print(f"match: word {i} (pattern {word.pattern(array.width)}{extra})")
        print(f"matches: {len(matches)}")
    return 0


# -- sat -------------------------------------------------------------------


def _parse_formula_arg(cfg: RunConfig) -> Formula | int:
    """Load and parse the formula file; an int return is an exit code."""
    assert cfg.formula_path is not None
    try:
        return parse_formula(_read(cfg.formula_path))
    except OSError as exc:
        return _fail(str(exc))
    except ParseError as exc:
        return _fail(f"{cfg.formula_path}: {exc}")


def _check_var_count(cfg: RunConfig) -> int | None:
    """Validate --vars against the cap; an int return is an exit code."""
    assert cfg.n_vars is not None
    if cfg.n_vars < 1:
        return _fail(f"need at least one variable, got {cfg.n_vars}")
    if cfg.n_vars > cfg.max_vars:
        print(
            f"error: {cfg.n_vars} variables exceed the limit of {cfg.max_vars}"
            f" (raise it with --max-vars)",
            file=sys.stderr,
        )
        return 4
    return None


def _cmd_sat(cfg: RunConfig) -> int:
    if cfg.n_vars is None:
        return _fail("--vars is required")
    formula = _parse_formula_arg(cfg)
    if isinstance(formula, int):
        return formula
    code = _check_var_count(cfg)
    if code is not None:
        return code
    n = cfg.n_vars
    names = sorted(variables(formula))
    if len(names) > n:
        return _fail(f"formula uses {len(names)} variables but --vars is {n}")
    array, program = compilers.run_formula(formula, n)
    solutions = array.locate_flags(0)
    if cfg.check:
        expected = compilers.brute_force_table(formula, n)
        if array.read_flags(0) != expected:
            print("error: compiled flags disagree with the brute-force table", file=sys.stderr)
            return 1
    if cfg.machine:
        pairs: list[tuple[str, object]] = [
            ("vars", n),
            ("names", ",".join(names)),
            ("width", n + 1),
            ("steps", len(program)),
            ("trials", 1 << n),
        ]
        for address in solutions:
            pairs.append(("solution", format(address, f"0{n}b")))
        pairs.append(("solutions", len(solutions)))
        if cfg.check:
            pairs.append(("check", "ok"))
        _emit(pairs)
    else:
        listed = ", ".join(names) if names else "none"
        print(f"variables: {n} ({listed})")
        print(f"width: {n + 1}")
        print(f"steps: {len(program)}")
        print(f"trials: {1 << n}")
        for address in solutions:
            print(f"solution: {format(address, f'0{n}b')}")
        if solutions:
            print(f"solutions: {len(solutions)}")
        else:
            print("solutions: 0 (UNSAT)")
        if cfg.check:
            print("check: ok")
    return 0


# -- gp --------------------------------------------------------------------


def _cmd_gp(cfg: RunConfig) -> int:
    if (cfg.formula_path is None) == (cfg.table_path is None):
        return _fail("give either a formula file with --vars or --table, not both")
    if cfg.table_path is not None:
        if cfg.n_vars is not None:
            return _fail("--vars only applies to a formula")
        try:
            text = _read(cfg.table_path)
        except OSError as exc:
            return _fail(str(exc))
        cells = [ch for ch in text if not ch.isspace()]
        bad = sorted(set(cells) - {"0", "1"})
        if bad:
            return _fail(f"{cfg.table_path}: table may only contain 0 and 1, got {bad}")
        try:
            report = compilers.gp_analyze([ch == "1" for ch in cells])
        except EngineError as exc:
            return _fail(f"{cfg.table_path}: {exc}")
        n = len(cells).bit_length() - 1
    else:
        if cfg.n_vars is None:
            return _fail("--vars is required with a formula")
        formula = _parse_formula_arg(cfg)
        if isinstance(formula, int):
            return formula
        code = _check_var_count(cfg)
        if code is not None:
            return code
        n = cfg.n_vars
        try:
            report = compilers.run_gp(formula, n)
        except EngineError as exc:
            return _fail(str(exc))
    if cfg.machine:
        pairs: list[tuple[str, object]] = [
            ("n", n),
            ("balance", "true" if report.balance else "false"),
            ("antisymmetry_code", report.antisymmetry_code),
            ("symmetry_code", report.symmetry_code),
        ]
        for p in report.periods:
            pairs.append(("period", p))
        _emit(pairs)
    else:
        print(f"n: {n}")
        print(f"balance: {'yes' if report.balance else 'no'}")
        print(f"antisymmetry code: {report.antisymmetry_code}")
        print(f"symmetry code: {report.symmetry_code}")
        listed = ", ".join(str(p) for p in report.periods) if report.periods else "none"
        print(f"periods: {listed}")
    return 0


# -- cost ------------------------------------------------------------------


def _cmd_cost(cfg: RunConfig) -> int:
    assert cfg.n is not None and cfg.words is not None and cfg.controls is not None
    n, words, controls = cfg.n, cfg.words, cfg.controls
    if n < 1:
        return _fail(f"--n must be at least 1, got {n}")
    if words < 1:
        return _fail(f"--L must be at least 1, got {words}")
    if not 0 <= controls <= n:
        return _fail(
            f"--controls must be within 0..{n} so a target bit remains, got {controls}"
        )
    try:
        params = costmodel.CostParams(cfg.delta1, cfg.delta2, cfg.p1, cfg.p2)
        report = costmodel.compare(
            params,
            n=n,
            words=words,
            lock_fraction=cfg.lock_fraction,
            f=Fraction(1, 1 << controls),
        )
    except ValueError as exc:
        return _fail(str(exc))
    empirical: dict[str, object] | None = None
    if cfg.empirical:
        if n > _DEFAULT_MAX_VARS:
            print(
                f"error: empirical runs are capped at n={_DEFAULT_MAX_VARS}",
                file=sys.stderr,
            )
            return 4
        gate = Gate(frozenset(range(n, n - controls, -1)), frozenset({0}))
        cam = costmodel.CamState.full_count(n + 1)
        cam.controlled_not(gate)
        array = WordArray.full_count(n + 1)
        array.apply_gate(gate)
        empirical = {
            "multi_reads": cam.counters.multi_reads,
            "expected_matches": report.f * (1 << (n + 1)),
            "counted_time": cam.counted_time(params),
            "time_delta": cam.counted_time(params) - report.cam_time,
            "counted_power": cam.counted_power(params),
            "power_delta": cam.counted_power(params) - report.cam_power,
            "contents_match": cam.rows == [word.bits for word in array.words],
        }
    if cfg.machine:
        pairs: list[tuple[str, object]] = [
            ("n", n),
            ("L", words),
            ("controls", controls),
            ("f", report.f),
            ("delta1", params.delta1),
            ("delta2", params.delta2),
            ("p1", params.p1),
            ("p2", params.p2),
            ("lock_fraction", cfg.lock_fraction),
            ("active_words", report.active_words),
            ("cam_time", report.cam_time),
            ("lockstep_time", report.lockstep_time),
            ("cam_power", report.cam_power),
            ("lockstep_power", report.lockstep_power),
            ("cam_pdp", report.cam_pdp),
            ("lockstep_pdp", report.lockstep_pdp),
            ("time_ratio", report.time_ratio),
            ("power_ratio", report.power_ratio),
            ("pdp_ratio", report.pdp_ratio),
        ]
        if empirical is not None:
            for key in (
                "multi_reads",
                "expected_matches",
                "counted_time",
                "time_delta",
                "counted_power",
                "power_delta",
            ):
                pairs.append((key, empirical[key]))
            pairs.append(("contents_match", "ok" if empirical["contents_match"] else "MISMATCH"))
        _emit(pairs)
    else:
        print(f"n: {n}")
        print(f"words: {words}")
        print(f"controls: {controls} (f = {report.f})")
        print(
            f"params: delta1={_fmt(params.delta1)} delta2={_fmt(params.delta2)}"
            f" p1={_fmt(params.p1)} p2={_fmt(params.p2)}"
            f" lock_fraction={_fmt(cfg.lock_fraction)}"
        )
        print(f"active words: {_fmt(report.active_words)}")
        print(
            f"cam: time={_fmt(report.cam_time)} power={_fmt(report.cam_power)}"
            f" pdp={_fmt(report.cam_pdp)}"
        )
        print(
            f"lockstep: time={_fmt(report.lockstep_time)}"
            f" power={_fmt(report.lockstep_power)}"
            f" pdp={_fmt(report.lockstep_pdp)}"
        )
        print(
            f"ratios: time={_fmt(report.time_ratio)} power={_fmt(report.power_ratio)}"
            f" pdp={_fmt(report.pdp_ratio)}"
        )
        if empirical is not None:
            print(
                f"empirical: multi_reads={_fmt(empirical['multi_reads'])}"
                f" expected_matches={_fmt(empirical['expected_matches'])}"
            )
            print(
                f"empirical: counted_time={_fmt(empirical['counted_time'])}"
                f" time_delta={_fmt(empirical['time_delta'])}"
            )
            print(
                f"empirical: counted_power={_fmt(empirical['counted_power'])}"
                f" power_delta={_fmt(empirical['power_delta'])}"
            )
            state = "yes" if empirical["contents_match"] else "NO"
            print(f"empirical: contents_match={state}")
    if empirical is not None and not empirical["contents_match"]:
        return 1
    return 0


# -- wiring ----------------------------------------------------------------


def _bit_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated bit indices, got {text!r}"
        ) from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("human", "machine"),
        default="human",
        help="output rendering (machine is stable key=value lines)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lockstep",
        description="Simulate step programs over a lockstep word array.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="apply a program file to a word file")
    run_p.add_argument("program_path", metavar="PROGRAM", help="program file")
    run_p.add_argument("words_path", metavar="WORDS", help="word file")
    run_p.add_argument("--flag", help="bit name or index to report flagged words for")
    run_p.add_argument(
        "--trace", action="store_true", help="print every word after every step"
    )
    run_p.add_argument(
        "--verify-locks",
        action="store_true",
        help="fail if a locked word would have toggled",
    )
    _add_format(run_p)

    search_p = sub.add_parser("search", help="flag exact matches of a bit pattern")
    search_p.add_argument("words_path", metavar="WORDS", help="word file")
    search_p.add_argument("--query", required=True, help="bit pattern to search for")
    search_p.add_argument(
        "--key-bits",
        required=True,
        type=_bit_list,
        help="comma-separated bit indices, one per query bit, query order",
    )
    search_p.add_argument(
        "--flag", help="flag bit index (default 0)"
    )
    _add_format(search_p)

    sat_p = sub.add_parser("sat", help="enumerate satisfying assignments")
    sat_p.add_argument("formula_path", metavar="FORMULA", help="formula file")
    sat_p.add_argument(
        "--vars", required=True, type=int, dest="n_vars", help="number of variables"
    )
    sat_p.add_argument(
        "--check",
        action="store_true",
        help="verify the result against direct evaluation",
    )
    sat_p.add_argument(
        "--max-vars",
        type=int,
        default=_DEFAULT_MAX_VARS,
        dest="max_vars",
        help="variable limit before refusing to build the array",
    )
    _add_format(sat_p)

    gp_p = sub.add_parser("gp", help="summarize global properties of a truth table")
    gp_p.add_argument(
        "formula_path", metavar="FORMULA", nargs="?", help="formula file (needs --vars)"
    )
    gp_p.add_argument("--vars", type=int, dest="n_vars", help="number of variables")
    gp_p.add_argument(
        "--table", dest="table_path", help="file holding the table as 0/1 characters"
    )
    gp_p.add_argument(
        "--max-vars",
        type=int,
        default=_DEFAULT_MAX_VARS,
        dest="max_vars",
        help="variable limit before refusing to build the array",
    )
    _add_format(gp_p)

    cost_p = sub.add_parser("cost", help="compare CAM and lockstep costs for one step")
    cost_p.add_argument("--n", required=True, type=int, help="address bits per word")
    cost_p.add_argument("--L", required=True, type=int, dest="words", help="word count")
    cost_p.add_argument(
        "--controls", required=True, type=int, help="control count of the step"
    )
    cost_p.add_argument("--delta1", type=_fraction, default=Fraction(1))
    cost_p.add_argument("--delta2", type=_fraction, default=Fraction(1))
    cost_p.add_argument("--p1", type=_fraction, default=Fraction(1))
    cost_p.add_argument("--p2", type=_fraction, default=Fraction(1))
    cost_p.add_argument(
        "--lock-fraction",
        type=_fraction,
        default=Fraction(0),
        dest="lock_fraction",
        help="fraction of words locked out of the lockstep power term",
    )
    cost_p.add_argument(
        "--empirical",
        action="store_true",
        help="also run the CAM procedure on a full count and report deltas",
    )
    _add_format(cost_p)
    return parser


_HANDLERS = {
    "run": _cmd_run,
    "search": _cmd_search,
    "sat": _cmd_sat,
    "gp": _cmd_gp,
    "cost": _cmd_cost,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    cfg = RunConfig.from_args(args)
    return _HANDLERS[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
