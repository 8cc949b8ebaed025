"""Boolean expression trees and their text format.

The text format is a single expression over identifiers, the constants
``0`` and ``1``, and the operators ``!`` (not), ``&`` (and), ``^`` (xor)
and ``|`` (or), binding in that order, tightest first.  Parentheses group.
Whitespace, including newlines, is insignificant.

Trees are built from the frozen node dataclasses below; And, Or and Xor
take any number of children.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .engine import EngineError, ParseError


class UnboundVariableError(EngineError):
    """A formula variable has no value or no bit assignment."""


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Xor:
    children: tuple["Formula", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


Formula = Union[Var, Const, Not, And, Or, Xor]


def variables(formula: Formula) -> frozenset[str]:
    """All variable names appearing in the formula."""
    if isinstance(formula, Var):
        return frozenset({formula.name})
    if isinstance(formula, Const):
        return frozenset()
    if isinstance(formula, Not):
        return variables(formula.child)
    out: frozenset[str] = frozenset()
    for child in formula.children:
        out |= variables(child)
    return out


def evaluate(formula: Formula, env: Mapping[str, bool]) -> bool:
    """Evaluate under an assignment of variable names to truth values."""
    if isinstance(formula, Var):
        try:
            return bool(env[formula.name])
        except KeyError:
            raise UnboundVariableError(f"variable {formula.name!r} has no value") from None
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, Not):
        return not evaluate(formula.child, env)
    if isinstance(formula, And):
        return all(evaluate(child, env) for child in formula.children)
    if isinstance(formula, Or):
        return any(evaluate(child, env) for child in formula.children)
    if isinstance(formula, Xor):
        result = False
        for child in formula.children:
            result ^= evaluate(child, env)
        return result
    raise TypeError(f"not a formula node: {formula!r}")


class _Scanner:
    """Single-character scanner tracking 1-based line and column."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _advance(self, count: int) -> None:
        for ch in self.text[self.pos : self.pos + count]:
            if ch == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
        self.pos += count

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self._advance(1)

    def peek(self) -> str:
        self.skip_space()
        if self.pos >= len(self.text):
            return ""
        return self.text[self.pos]

    def take_ident(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self._advance(1)
        return self.text[start : self.pos]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.column)


def parse_formula(text: str) -> Formula:
    """Parse the formula text format; ParseError carries line and column."""
    scanner = _Scanner(text)
    tree = _parse_or(scanner)
    ch = scanner.peek()
    if ch:
        raise scanner.error(f"unexpected character {ch!r}")
    return tree


def _chain(first: Formula, rest: list[Formula], node) -> Formula:
    if not rest:
        return first
    return node(tuple([first, *rest]))


def _parse_or(scanner: _Scanner) -> Formula:
    first = _parse_xor(scanner)
    rest: list[Formula] = []
    while scanner.peek() == "|":
        scanner._advance(1)
        rest.append(_parse_xor(scanner))
    return _chain(first, rest, Or)


def _parse_xor(scanner: _Scanner) -> Formula:
    first = _parse_and(scanner)
    rest: list[Formula] = []
    while scanner.peek() == "^":
        scanner._advance(1)
        rest.append(_parse_and(scanner))
    return _chain(first, rest, Xor)


def _parse_and(scanner: _Scanner) -> Formula:
    first = _parse_unary(scanner)
    rest: list[Formula] = []
    while scanner.peek() == "&":
        scanner._advance(1)
        rest.append(_parse_unary(scanner))
    return _chain(first, rest, And)


def _parse_unary(scanner: _Scanner) -> Formula:
    ch = scanner.peek()
    if ch == "!":
        scanner._advance(1)
        return Not(_parse_unary(scanner))
    return _parse_atom(scanner)


def _parse_atom(scanner: _Scanner) -> Formula:
    ch = scanner.peek()
    if ch == "(":
        scanner._advance(1)
        tree = _parse_or(scanner)
        if scanner.peek() != ")":
            raise scanner.error("expected ')'")
        scanner._advance(1)
        return tree
    if ch.isdigit():
        line, column = scanner.line, scanner.column
        digits = scanner.take_ident()
        if digits == "0":
            return Const(False)
        if digits == "1":
            return Const(True)
        raise ParseError(
            f"only the constants 0 and 1 are allowed, got {digits!r}", line, column
        )
    if ch.isalpha() or ch == "_":
        return Var(scanner.take_ident())
    if ch:
        raise scanner.error(f"unexpected character {ch!r}")
    raise scanner.error("unexpected end of input")
