"""Lockstep word-array engine.

The machine is an array of L words, each ``width`` bits wide, that all see
the same step at the same time.  A step is a multi-controlled NOT: in every
unlocked word whose control bits are all true, every target bit is
complemented.  A step with no controls is an unconditional NOT.  Steps never
move information between words, and each step is its own inverse, so a step
list run backwards undoes the forward run.

Bit index 0 is the least significant bit and corresponds to the rightmost
character of a pattern string such as ``"010"``.  A bit set aside as a match
flag is ordinary storage; nothing in the engine distinguishes it.

Words carry an optional opaque payload id (never touched by steps) and a
lock flag.  Locked words sit out every step.  The per-run event counters
record how much bus activity the run caused and how much locking avoided,
which is what the cost model consumes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Literal

Sense = Literal["match", "mismatch"]


class EngineError(Exception):
    """Base class for errors raised by this package."""


class WidthMismatchError(EngineError):
    """A pattern or word does not have the expected width."""


class EmptyArrayError(EngineError):
    """A word array must hold at least one word."""


class IndexOutOfRangeError(EngineError):
    """A bit index is negative or not below the width."""


class GateDefinitionError(EngineError):
    """A gate has no targets or its controls and targets overlap."""


class LockViolationError(EngineError):
    """A locked word would have toggled (raised in verify_locks mode)."""


class ParseError(EngineError):
    """A text input failed to parse.  Carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Gate:
    """One step: complement every target bit of words whose controls are all true.

    Any iterables are accepted and normalized to frozensets.  Structural
    soundness (non-empty targets, disjointness, in-range indices) is checked
    against a concrete width by :func:`validate_gate`, not at construction,
    so that malformed gates can still be built and reported during program
    validation.
    """

    controls: frozenset[int]
    targets: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "controls", frozenset(self.controls))
        object.__setattr__(self, "targets", frozenset(self.targets))

    @cached_property
    def control_mask(self) -> int:
        mask = 0
        for i in self.controls:
            mask |= 1 << i
        return mask

    @cached_property
    def target_mask(self) -> int:
        mask = 0
        for i in self.targets:
            mask |= 1 << i
        return mask


def validate_gate(gate: Gate, width: int) -> None:
    """Raise unless ``gate`` can be applied to words of the given width."""
    if not gate.targets:
        raise GateDefinitionError("gate has no targets")
    overlap = gate.controls & gate.targets
    if overlap:
        listed = ",".join(str(b) for b in sorted(overlap))
        raise GateDefinitionError(f"controls and targets overlap on bits {listed}")
    for i in sorted(gate.controls | gate.targets):
        if not 0 <= i < width:
            raise IndexOutOfRangeError(f"bit index {i} out of range for width {width}")


@dataclass(slots=True)
class EventCounters:
    """Aggregate event tallies kept per array across steps.

    steps counts applied gates.  bus_activations counts (word, step) pairs
    where an unlocked word's controls were all true, i.e. words that drove
    their toggle bus that step.  toggles counts individual bit complements,
    always bus_activations times the step's target count.  locked_savings
    counts (word, step) pairs skipped because the word was locked.
    """

    steps: int = 0
    bus_activations: int = 0
    toggles: int = 0
    locked_savings: int = 0

    def copy(self) -> "EventCounters":
        return replace(self)

    def reset(self) -> None:
        self.steps = 0
        self.bus_activations = 0
        self.toggles = 0
        self.locked_savings = 0


@dataclass(slots=True)
class Word:
    """One storage word: a bit value, a lock flag, an inert payload id."""

    bits: int
    locked: bool = False
    payload: int | None = None

    def pattern(self, width: int) -> str:
        return format(self.bits, f"0{width}b")


_PATTERN_RE = re.compile(r"[01]+\Z")
_TOKEN_RE = re.compile(r"\S+")


@dataclass(repr=False)
class WordArray:
    """L words of ``width`` bits transformed in lockstep."""

    words: list[Word]
    width: int
    counters: EventCounters = field(default_factory=EventCounters)

    def __post_init__(self) -> None:
        if not self.words:
            raise EmptyArrayError("word array must hold at least one word")
        if self.width < 1:
            raise WidthMismatchError(f"width must be at least 1, got {self.width}")
        top = 1 << self.width
        for i, word in enumerate(self.words):
            if not 0 <= word.bits < top:
                raise WidthMismatchError(
                    f"word {i} value {word.bits} does not fit in {self.width} bits"
                )

    def __repr__(self) -> str:
        return f"WordArray(words={len(self.words)}, width={self.width})"

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_patterns(
        cls,
        patterns: Iterable[str],
        width: int | None = None,
        payloads: Iterable[int | None] | None = None,
    ) -> "WordArray":
        """Build an array from bit strings, leftmost character = highest index.

        With ``width`` omitted the first pattern sets it; every pattern must
        then match exactly.
        """
        words: list[Word] = []
        for i, pattern in enumerate(patterns):
            if not _PATTERN_RE.match(pattern):
                raise WidthMismatchError(f"word {i}: pattern {pattern!r} is not a bit string")
            if width is None:
                width = len(pattern)
            if len(pattern) != width:
                raise WidthMismatchError(
                    f"word {i}: pattern {pattern!r} does not have width {width}"
                )
            words.append(Word(int(pattern, 2)))
        if width is None:
            raise EmptyArrayError("word array must hold at least one word")
        if payloads is not None:
            ids = list(payloads)
            if len(ids) != len(words):
                raise WidthMismatchError(
                    f"{len(ids)} payloads given for {len(words)} words"
                )
            for word, payload in zip(words, ids):
                word.payload = payload
        return cls(words, width)

    @classmethod
    def full_count(cls, width: int) -> "WordArray":
        """All 2**width bit patterns, one word each, in ascending order."""
        if width < 1:
            raise WidthMismatchError(f"width must be at least 1, got {width}")
        return cls([Word(value) for value in range(1 << width)], width)

    # -- stepping ---------------------------------------------------------

    def apply_gate(self, gate: Gate, *, verify_locks: bool = False) -> None:
        """Apply one step to every unlocked word.

        With ``verify_locks`` the locked words are checked first and
        LockViolationError is raised, before any word changes, if one of
        them would have toggled.
        """
        validate_gate(gate, self.width)
        cmask = gate.control_mask
        tmask = gate.target_mask
        if verify_locks:
            for word in self.words:
                if word.locked and word.bits & cmask == cmask:
                    raise LockViolationError(
                        f"locked word {word.pattern(self.width)} would toggle"
                    )
        activations = 0
        saved = 0
        for word in self.words:
            if word.locked:
                saved += 1
            elif word.bits & cmask == cmask:
                word.bits ^= tmask
                activations += 1
        counters = self.counters
        counters.steps += 1
        counters.bus_activations += activations
        counters.toggles += activations * len(gate.targets)
        counters.locked_savings += saved

    def apply_program(
        self,
        gates: Iterable[Gate],
        *,
        verify_locks: bool = False,
        on_step: Callable[[int, Gate], None] | None = None,
    ) -> None:
        """Apply gates in order; ``on_step(i, gate)`` runs after each one."""
        for i, gate in enumerate(gates):
            self.apply_gate(gate, verify_locks=verify_locks)
            if on_step is not None:
                on_step(i, gate)

    def apply_inverse(
        self,
        gates: Iterable[Gate],
        *,
        verify_locks: bool = False,
        on_step: Callable[[int, Gate], None] | None = None,
    ) -> None:
        """Apply gates in reverse order.

        Because every gate is an involution this undoes apply_program, but
        only if no word's lock state changed in between; holding locks fixed
        across the round trip is the caller's responsibility.
        """
        self.apply_program(
            list(gates)[::-1], verify_locks=verify_locks, on_step=on_step
        )

    # -- reading ----------------------------------------------------------

    def read_flags(self, bit: int) -> list[bool]:
        """The value of one bit position across all words, in word order."""
        if not 0 <= bit < self.width:
            raise IndexOutOfRangeError(f"bit index {bit} out of range for width {self.width}")
        return [bool(word.bits >> bit & 1) for word in self.words]

    def locate_flags(self, bit: int) -> list[int]:
        """Indices of words with the given bit set, ascending."""
        if not 0 <= bit < self.width:
            raise IndexOutOfRangeError(f"bit index {bit} out of range for width {self.width}")
        return [i for i, word in enumerate(self.words) if word.bits >> bit & 1]

    def pattern(self, index: int) -> str:
        return self.words[index].pattern(self.width)

    def patterns(self) -> list[str]:
        return [word.pattern(self.width) for word in self.words]

    # -- locking ----------------------------------------------------------

    def lock_where(self, controls: Iterable[int], sense: Sense = "mismatch") -> int:
        """Lock words selected by a control conjunction; return how many were newly locked.

        sense "match" locks the words whose control bits are all true,
        "mismatch" locks the rest.  Already-locked words stay locked, so the
        call is idempotent.  An empty control set is a true conjunction:
        "match" locks everything, "mismatch" locks nothing.
        """
        if sense not in ("match", "mismatch"):
            raise ValueError(f"sense must be 'match' or 'mismatch', got {sense!r}")
        mask = 0
        for i in controls:
            if not 0 <= i < self.width:
                raise IndexOutOfRangeError(
                    f"bit index {i} out of range for width {self.width}"
                )
            mask |= 1 << i
        newly = 0
        for word in self.words:
            if word.locked:
                continue
            matches = word.bits & mask == mask
            if matches == (sense == "match"):
                word.locked = True
                newly += 1
        return newly

    def unlock_all(self) -> int:
        """Clear every lock; return how many words were unlocked."""
        freed = 0
        for word in self.words:
            if word.locked:
                word.locked = False
                freed += 1
        return freed

    def active_words(self) -> int:
        """Count of unlocked words."""
        return sum(1 for word in self.words if not word.locked)

    def reset_counters(self) -> None:
        self.counters.reset()


def parse_word_text(text: str) -> WordArray:
    """Parse the word-set file format.

    One word per line: a bit string (leftmost character = highest bit
    index), optionally followed by whitespace and a decimal payload id.
    Blank lines and lines starting with ``#`` are ignored.  All words must
    share one width.
    """
    patterns: list[str] = []
    payloads: list[int | None] = []
    width: int | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        tokens = list(_TOKEN_RE.finditer(raw))
        head = tokens[0]
        if not _PATTERN_RE.match(head.group()):
            raise ParseError(
                f"expected a bit string, got {head.group()!r}", line_no, head.start() + 1
            )
        if width is None:
            width = len(head.group())
        elif len(head.group()) != width:
            raise ParseError(
                f"word has width {len(head.group())}, expected {width}",
                line_no,
                head.start() + 1,
            )
        payload: int | None = None
        if len(tokens) > 1:
            tail = tokens[1]
            if not tail.group().isdigit():
                raise ParseError(
                    f"payload must be a decimal integer, got {tail.group()!r}",
                    line_no,
                    tail.start() + 1,
                )
            payload = int(tail.group())
        if len(tokens) > 2:
            extra = tokens[2]
            raise ParseError(
                f"unexpected trailing text {extra.group()!r}", line_no, extra.start() + 1
            )
        patterns.append(head.group())
        payloads.append(payload)
    return WordArray.from_patterns(patterns, width, payloads)
