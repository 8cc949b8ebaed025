"""Text format for step programs.

A program file is line oriented:

    width 3
    bit a1 2
    bit a0 1
    bit flag 0
    not a1
    toggle flag when a1,a0
    not a1

``width`` must come first.  ``bit`` lines give names to individual bit
indices and must precede the gate lines.  ``not T[,T...]`` complements its
targets unconditionally and is sugar for a ``toggle`` with no controls;
``toggle T[,T...] when C[,C...]`` complements the targets in words where
every control bit is true.  Operands are declared names or decimal indices.
``#`` starts a comment.  LF and CRLF both parse; the serializer emits LF
only and renders operands by name where one is declared, highest index
first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .engine import EngineError, Gate, ParseError

# "when" separates targets from controls inside a gate line, so a bit of
# that name could not be referred back to unambiguously.
_RESERVED = frozenset({"when"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|,|\S")


@dataclass(frozen=True)
class Violation:
    """One structural problem found in a program; gate is an index or None."""

    gate: int | None
    message: str

    def __str__(self) -> str:
        if self.gate is None:
            return self.message
        return f"gate {self.gate}: {self.message}"


class ValidationError(EngineError):
    """A program violates a structural constraint; carries all violations."""

    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class Program:
    """An ordered gate list over a declared width, with optional bit names."""

    width: int
    gates: tuple[Gate, ...] = ()
    names: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "names", dict(self.names))

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)


def invert(program: Program) -> Program:
    """The program that undoes ``program``: the same gates, reversed."""
    return Program(program.width, program.gates[::-1], program.names)


def validate(program: Program) -> list[Violation]:
    """Every structural violation in the program; empty means valid."""
    out: list[Violation] = []
    if program.width < 1:
        out.append(Violation(None, f"width must be at least 1, got {program.width}"))
    by_index: dict[int, str] = {}
    for name, index in program.names.items():
        if not _NAME_RE.match(name):
            out.append(Violation(None, f"invalid bit name {name!r}"))
        elif name in _RESERVED:
            out.append(Violation(None, f"'{name}' is reserved and cannot name a bit"))
        if not 0 <= index < program.width:
            out.append(
                Violation(None, f"bit {name!r} index {index} out of range for width {program.width}")
            )
        elif index in by_index:
            out.append(
                Violation(None, f"bits {by_index[index]!r} and {name!r} share index {index}")
            )
        else:
            by_index[index] = name
    for i, gate in enumerate(program.gates):
        out.extend(_gate_violations(i, gate.controls, gate.targets, program.width))
    return out


def _gate_violations(
    index: int, controls: frozenset[int], targets: frozenset[int], width: int
) -> list[Violation]:
    out: list[Violation] = []
    if not targets:
        out.append(Violation(index, "empty targets"))
    overlap = controls & targets
    if overlap:
        listed = ",".join(str(b) for b in sorted(overlap))
        out.append(Violation(index, f"target bits {listed} also appear in controls"))
    for bit in sorted(controls | targets):
        if not 0 <= bit < width:
            out.append(Violation(index, f"bit index {bit} out of range for width {width}"))
    return out


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "int" | "comma"
    text: str
    column: int


def _scan(body: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    for match in _TOKEN_RE.finditer(body):
        text = match.group()
        if text.isspace():
            continue
        column = match.start() + 1
        if text[0].isdigit():
            tokens.append(_Token("int", text, column))
        elif text == ",":
            tokens.append(_Token("comma", text, column))
        elif _NAME_RE.match(text):
            tokens.append(_Token("ident", text, column))
        else:
            raise ParseError(f"unexpected character {text!r}", line_no, column)
    return tokens


class _LineParser:
    """Consumes one scanned line, reporting positions on failure."""

    def __init__(self, tokens: list[_Token], line_no: int, names: Mapping[str, int]):
        self.tokens = tokens
        self.line_no = line_no
        self.names = names
        self.pos = 1  # token 0 is the dispatching keyword

    def _end_column(self) -> int:
        if self.tokens:
            last = self.tokens[-1]
            return last.column + len(last.text)
        return 1

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        token = self.peek()
        if token is None:
            raise ParseError("unexpected end of line", self.line_no, self._end_column())
        self.pos += 1
        return token

    def expect_int(self, what: str) -> int:
        token = self.take()
        if token.kind != "int":
            raise ParseError(f"expected {what}, got {token.text!r}", self.line_no, token.column)
        return int(token.text)

    def expect_ident(self, what: str) -> _Token:
        token = self.take()
        if token.kind != "ident":
            raise ParseError(f"expected {what}, got {token.text!r}", self.line_no, token.column)
        return token

    def expect_end(self) -> None:
        token = self.peek()
        if token is not None:
            raise ParseError(f"unexpected token {token.text!r}", self.line_no, token.column)

    def operand(self) -> int:
        token = self.take()
        if token.kind == "int":
            return int(token.text)
        if token.kind == "ident":
            if token.text in self.names:
                return self.names[token.text]
            raise ParseError(f"unknown bit name {token.text!r}", self.line_no, token.column)
        raise ParseError(f"expected bit name or index, got {token.text!r}", self.line_no, token.column)

    def operand_list(self, stop_at_when: bool) -> set[int]:
        """Comma-separated operands; possibly empty when the next token ends the list."""
        out: set[int] = set()
        token = self.peek()
        if token is None or (stop_at_when and token.kind == "ident" and token.text == "when"):
            return out
        out.add(self.operand())
        while True:
            token = self.peek()
            if token is None or (stop_at_when and token.kind == "ident" and token.text == "when"):
                return out
            if token.kind != "comma":
                raise ParseError(
                    f"expected ',' or end of list, got {token.text!r}", self.line_no, token.column
                )
            self.pos += 1
            out.add(self.operand())


def parse(text: str) -> Program:
    """Parse program text; ParseError carries positions, ValidationError carries violations."""
    width: int | None = None
    names: dict[str, int] = {}
    raw_gates: list[tuple[set[int], set[int]]] = []
    violations: list[Violation] = []

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        body = raw_line.split("#", 1)[0]
        tokens = _scan(body, line_no)
        if not tokens:
            continue
        head = tokens[0]
        if head.kind != "ident":
            raise ParseError(
                f"expected 'width', 'bit', 'not' or 'toggle', got {head.text!r}",
                line_no,
                head.column,
            )
        line = _LineParser(tokens, line_no, names)
        if head.text == "width":
            if width is not None:
                raise ParseError("duplicate width declaration", line_no, head.column)
            width = line.expect_int("a width")
            line.expect_end()
        elif head.text == "bit":
            if width is None:
                raise ParseError("'width' must be declared first", line_no, head.column)
            if raw_gates:
                raise ParseError("bit declarations must precede gates", line_no, head.column)
            name = line.expect_ident("a bit name")
            index = line.expect_int("a bit index")
            line.expect_end()
            if name.text in _RESERVED:
                raise ParseError(
                    f"'{name.text}' is reserved and cannot name a bit", line_no, name.column
                )
            if name.text in names:
                violations.append(Violation(None, f"duplicate bit name {name.text!r}"))
            else:
                names[name.text] = index
        elif head.text == "not":
            if width is None:
                raise ParseError("'width' must be declared first", line_no, head.column)
            targets = line.operand_list(stop_at_when=False)
            raw_gates.append((set(), targets))
        elif head.text == "toggle":
            if width is None:
                raise ParseError("'width' must be declared first", line_no, head.column)
            targets = line.operand_list(stop_at_when=True)
            controls: set[int] = set()
            token = line.peek()
            if token is not None:
                line.pos += 1  # consume "when"
                controls = line.operand_list(stop_at_when=False)
                if not controls:
                    raise ParseError(
                        "expected controls after 'when'", line_no, token.column + len(token.text)
                    )
            line.expect_end()
            raw_gates.append((controls, targets))
        else:
            raise ParseError(
                f"expected 'width', 'bit', 'not' or 'toggle', got {head.text!r}",
                line_no,
                head.column,
            )

    if width is None:
        raise ValidationError([Violation(None, "missing width declaration")])
    program = Program(
        width,
        tuple(Gate(frozenset(c), frozenset(t)) for c, t in raw_gates),
        names,
    )
    violations.extend(validate(program))
    if violations:
        raise ValidationError(violations)
    return program


def gate_text(gate: Gate, names: Mapping[str, int] | None = None) -> str:
    """Canonical single-line rendering of one gate."""
    reverse = {index: name for name, index in (names or {}).items()}

    def operands(bits: frozenset[int]) -> str:
        return ",".join(reverse.get(b, str(b)) for b in sorted(bits, reverse=True))

    if gate.controls:
        return f"toggle {operands(gate.targets)} when {operands(gate.controls)}"
    return f"not {operands(gate.targets)}"


def serialize(program: Program) -> str:
    """Canonical text for a valid program; parse(serialize(p)) == p."""
    problems = validate(program)
    if problems:
        raise ValidationError(problems)
    lines = [f"width {program.width}"]
    for name, index in sorted(program.names.items(), key=lambda item: -item[1]):
        lines.append(f"bit {name} {index}")
    for gate in program.gates:
        lines.append(gate_text(gate, program.names))
    return "\n".join(lines) + "\n"
