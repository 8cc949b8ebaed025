"""Compilers from search and analysis problems to step programs.

compile_keyword flags exact matches of a bit pattern at chosen key bits in
at most three steps, whatever the key length.  compile_formula flags the
words satisfying an arbitrary Boolean formula: the formula is expanded into
an exclusive sum of product terms, and each term toggles the flag of the
words it covers, so words covered an even number of times end where they
started.  gp_analyze and run_gp summarize a whole truth table at once
(balance, layered symmetry and anti-symmetry codes, repetition periods)
from the flag column of a full assignment count.

brute_force_table is the independent check: it evaluates the expression
tree directly on every assignment and never touches the word engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .dsl import Program
from .engine import EngineError, Gate, Word, WordArray
from .formula import (
    And,
    Const,
    Formula,
    Not,
    Or,
    UnboundVariableError,
    Var,
    Xor,
    evaluate,
    variables,
)


class FlagCollisionError(EngineError):
    """The flag bit is also used as a key or variable bit."""


class NotPowerOfTwoError(EngineError):
    """A truth table length must be a power of two, at least 2."""


# -- keyword search -------------------------------------------------------


def compile_keyword(keyword: str, key_bits: Sequence[int], flag: int) -> Program:
    """Program that toggles ``flag`` in exactly the words matching ``keyword``.

    ``keyword[i]`` is the wanted value of bit ``key_bits[i]``.  Zero
    positions are complemented in one unconditional step, every key bit
    then controls the flag toggle, and a final unconditional step restores
    the zero positions, so the program is never longer than three steps and
    leaves all key bits as it found them.
    """
    if set(keyword) - {"0", "1"}:
        raise ValueError(f"keyword must be a bit string, got {keyword!r}")
    if len(key_bits) != len(keyword):
        raise ValueError(
            f"keyword has {len(keyword)} bits but {len(key_bits)} key bits were given"
        )
    if len(set(key_bits)) != len(key_bits):
        raise ValueError("key bits must be distinct")
    if flag in key_bits:
        raise FlagCollisionError(f"flag bit {flag} is also a key bit")
    zeros = frozenset(bit for ch, bit in zip(keyword, key_bits) if ch == "0")
    match_gate = Gate(frozenset(key_bits), frozenset({flag}))
    if zeros:
        wrap = Gate(frozenset(), zeros)
        gates: tuple[Gate, ...] = (wrap, match_gate, wrap)
    else:
        gates = (match_gate,)
    return Program(max([flag, *key_bits]) + 1, gates)


# -- exclusive sums of products -------------------------------------------


@dataclass(frozen=True)
class Cube:
    """One product term: all positive literals true and all negative false.

    The empty cube is the constant-true product.  Literals are variable
    names; they are mapped to bit indices only when a cube list is lowered
    to gates.
    """

    positive: frozenset[str]
    negative: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "positive", frozenset(self.positive))
        object.__setattr__(self, "negative", frozenset(self.negative))
        overlap = self.positive & self.negative
        if overlap:
            raise ValueError(f"literals {sorted(overlap)} are both positive and negative")

    def matches(self, env: Mapping[str, bool]) -> bool:
        return all(env[v] for v in self.positive) and not any(
            env[v] for v in self.negative
        )


def _xor_cubes(acc: set[frozenset[str]], other: Iterable[frozenset[str]]) -> None:
    # duplicate cubes cancel in pairs: t ^ t = 0
    for cube in other:
        if cube in acc:
            acc.remove(cube)
        else:
            acc.add(cube)


def _and_cubes(
    left: set[frozenset[str]], right: set[frozenset[str]]
) -> set[frozenset[str]]:
    out: set[frozenset[str]] = set()
    for a in left:
        for b in right:
            merged = a | b
            if merged in out:
                out.remove(merged)
            else:
                out.add(merged)
    return out


def _expand(formula: Formula) -> set[frozenset[str]]:
    if isinstance(formula, Const):
        return {frozenset()} if formula.value else set()
    if isinstance(formula, Var):
        return {frozenset({formula.name})}
    if isinstance(formula, Not):
        # !g = 1 ^ g
        out = {frozenset()}
        _xor_cubes(out, _expand(formula.child))
        return out
    if isinstance(formula, Xor):
        out: set[frozenset[str]] = set()
        for child in formula.children:
            _xor_cubes(out, _expand(child))
        return out
    if isinstance(formula, And):
        out = {frozenset()}
        for child in formula.children:
            out = _and_cubes(out, _expand(child))
        return out
    if isinstance(formula, Or):
        # g | h = g ^ h ^ g&h, folded left to right
        out = set()
        for child in formula.children:
            expanded = _expand(child)
            both = _and_cubes(out, expanded)
            _xor_cubes(out, expanded)
            _xor_cubes(out, both)
        return out
    raise TypeError(f"not a formula node: {formula!r}")


def esop_expand(formula: Formula) -> list[Cube]:
    """Exclusive sum of positive products equal to the formula.

    The expansion is the positive-polarity one: negation becomes 1 ^ g, so
    the result never contains negative literals and the XOR of the returned
    cubes equals the formula on every assignment.  Cubes are returned
    smallest first, ties broken by literal names.
    """
    cubes = _expand(formula)
    ordered = sorted(cubes, key=lambda c: (len(c), tuple(sorted(c))))
    return [Cube(c) for c in ordered]


def compile_cubes(
    cubes: Sequence[Cube], var_map: Mapping[str, int], flag: int
) -> Program:
    """Lower a cube list to one flag-toggle step per cube.

    Positive literals become controls directly.  Negative literals are
    realized by complementing their bits in an unconditional step before
    the toggle and restoring them after; consecutive cubes share those
    wrap steps, with bits complemented twice in a row dropped, which never
    changes what the program computes.
    """
    _check_var_map(var_map, flag)
    width = max([flag, *var_map.values()]) + 1
    gates: list[Gate] = []
    wrapped: frozenset[int] = frozenset()
    for cube in cubes:
        unbound = (cube.positive | cube.negative) - var_map.keys()
        if unbound:
            raise UnboundVariableError(
                f"variables {sorted(unbound)} have no bit assignment"
            )
        positive = frozenset(var_map[v] for v in cube.positive)
        negative = frozenset(var_map[v] for v in cube.negative)
        delta = wrapped ^ negative
        if delta:
            gates.append(Gate(frozenset(), delta))
        wrapped = negative
        gates.append(Gate(positive | negative, frozenset({flag})))
    if wrapped:
        gates.append(Gate(frozenset(), wrapped))
    return Program(width, tuple(gates))


def compile_formula(
    formula: Formula, var_map: Mapping[str, int], flag: int
) -> Program:
    """Program that toggles ``flag`` in exactly the words satisfying ``formula``.

    Variable bits are read but always restored, so applying the program
    twice clears the flags again.  The flag bit must start out clear in
    every word for the flags to mean satisfaction.
    """
    _check_var_map(var_map, flag)
    unbound = variables(formula) - var_map.keys()
    if unbound:
        raise UnboundVariableError(f"variables {sorted(unbound)} have no bit assignment")
    return compile_cubes(esop_expand(formula), var_map, flag)


def _check_var_map(var_map: Mapping[str, int], flag: int) -> None:
    if flag < 0:
        raise ValueError(f"flag index must be non-negative, got {flag}")
    indices = list(var_map.values())
    if len(set(indices)) != len(indices):
        raise ValueError("variable bit indices must be distinct")
    if any(i < 0 for i in indices):
        raise ValueError("variable bit indices must be non-negative")
    if flag in indices:
        raise FlagCollisionError(f"flag bit {flag} is also a variable bit")


# -- truth tables ---------------------------------------------------------


def _sorted_vars(formula: Formula, n: int) -> list[str]:
    names = sorted(variables(formula))
    if len(names) > n:
        raise UnboundVariableError(
            f"formula uses {len(names)} variables but only {n} are declared"
        )
    return names


def _assignment(names: Sequence[str], n: int, index: int) -> dict[str, bool]:
    # variable j, in sorted order, reads the j-th most significant of n bits
    return {v: bool(index >> (n - 1 - j) & 1) for j, v in enumerate(names)}


def brute_force_table(formula: Formula, n: int) -> list[bool]:
    """Truth table over 2**n assignments by direct tree evaluation.

    Assignment ``i`` gives the formula's variables, in sorted name order,
    the bits of ``i`` from most significant down.  This is the oracle the
    compiled programs are checked against; it never touches the engine.
    """
    if n < 0:
        raise ValueError(f"variable count must be non-negative, got {n}")
    names = _sorted_vars(formula, n)
    return [evaluate(formula, _assignment(names, n, i)) for i in range(1 << n)]


def full_assignment_array(n: int) -> WordArray:
    """Words counting through all 2**n assignments, flag bit 0 cleared.

    Word ``i`` holds assignment ``i`` in bits n..1 (bit n most significant)
    with bit 0 left clear for a flag.
    """
    if n < 0:
        raise ValueError(f"variable count must be non-negative, got {n}")
    return WordArray([Word(i << 1) for i in range(1 << n)], n + 1)


def default_var_map(formula: Formula, n: int) -> dict[str, int]:
    """Bit layout matching full_assignment_array: sorted variables from bit n down."""
    return {v: n - j for j, v in enumerate(_sorted_vars(formula, n))}


def run_formula(formula: Formula, n: int) -> tuple[WordArray, Program]:
    """Compile over the default layout and run on a full assignment count.

    Returns the transformed array (flag bit 0 now holds the truth table in
    address order) and the program that was applied.
    """
    program = compile_formula(formula, default_var_map(formula, n), 0)
    array = full_assignment_array(n)
    array.apply_program(program)
    return array, program


# -- global property analysis ---------------------------------------------


@dataclass(frozen=True)
class GPReport:
    """Whole-table properties: balance, layer codes, repetition periods.

    The codes have one character per halving level, leftmost for the whole
    table.  A level's character is 1 when every block at that level has its
    bottom half equal to (symmetry) or the complement of (anti-symmetry)
    its top half.  Periods are the shifts p, up to half the table, under
    which the table agrees with itself wherever both entries exist.
    """

    balance: bool
    antisymmetry_code: str
    symmetry_code: str
    periods: tuple[int, ...]


def _level_code(table: tuple[bool, ...], antisymmetric: bool) -> str:
    size = len(table)
    levels = size.bit_length() - 1
    out = []
    for level in range(levels):
        block = size >> level
        half = block >> 1
        ok = True
        for start in range(0, size, block):
            for i in range(half):
                top = table[start + i]
                bottom = table[start + half + i]
                if bottom != (top ^ antisymmetric):
                    ok = False
                    break
            if not ok:
                break
        out.append("1" if ok else "0")
    return "".join(out)


def gp_analyze(table: str | Sequence[bool] | Sequence[int]) -> GPReport:
    """Summarize a truth table of power-of-two length.

    Accepts bools, 0/1 ints, or a string of 0/1 characters.
    """
    if isinstance(table, str):
        if not all(c in "01" for c in table):
            raise ValueError(f"table string must be 0/1 characters, got {table!r}")
        tab = tuple(c == "1" for c in table)
    else:
        tab = tuple(bool(x) for x in table)
    size = len(tab)
    if size < 2 or size & (size - 1):
        raise NotPowerOfTwoError(
            f"table length must be a power of two, at least 2, got {size}"
        )
    ones = sum(tab)
    periods = tuple(
        p
        for p in range(1, size // 2 + 1)
        if all(tab[i] == tab[i + p] for i in range(size - p))
    )
    return GPReport(
        balance=ones * 2 == size,
        antisymmetry_code=_level_code(tab, antisymmetric=True),
        symmetry_code=_level_code(tab, antisymmetric=False),
        periods=periods,
    )


def run_gp(formula: Formula, n: int) -> GPReport:
    """Build the formula's truth table on the engine and summarize it."""
    if n < 1:
        raise ValueError(f"need at least one variable, got {n}")
    array, _ = run_formula(formula, n)
    return gp_analyze(array.read_flags(0))
