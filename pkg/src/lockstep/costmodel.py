"""Cost comparison between a CAM emulation and the lockstep array.

A content-addressable memory can emulate one controlled-NOT step in three
phases: drive the control pattern onto the match lines (time delta1), match
every row into its tag in parallel (time delta2), then serially
read-complement-write each tagged row (2 * delta1 per row).  The lockstep
array needs only the broadcast and the in-place toggle, so its step time
is delta1 + delta2 no matter how many words respond.

On a full binary count a gate with c controls matches the fraction
f = 2**-c of the rows, so the serial phase runs f * 2**(n+1) cycles for
n+1-bit rows.  The closed forms below follow that accounting; CamState is
an executable reference whose event counters let tests pin the formulas to
counted work instead of trusting the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .engine import (
    EmptyArrayError,
    Gate,
    WidthMismatchError,
    WordArray,
    validate_gate,
)

Number = float  # any real number type works: int, float, Fraction


@dataclass(frozen=True)
class CostParams:
    """Unit costs.

    delta1: time for a signal from the control unit to reach the rows.
    delta2: time for the rows to answer into the tags.
    p1: power drawn per vertical (column/control) line.
    p2: power drawn per horizontal (word/tag) line.
    """

    delta1: Number = 1
    delta2: Number = 1
    p1: Number = 1
    p2: Number = 1

    def __post_init__(self) -> None:
        for name in ("delta1", "delta2", "p1", "p2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


def match_fraction(gate: Gate, width: int) -> Fraction:
    """Fraction of a full binary count that satisfies the gate's controls."""
    validate_gate(gate, width)
    return Fraction(1, 1 << len(gate.controls))


def empirical_match_fraction(array: WordArray, gate: Gate) -> Fraction:
    """Matching words / total words for an arbitrary array, lock state ignored."""
    validate_gate(gate, array.width)
    cmask = gate.control_mask
    matches = sum(1 for word in array.words if word.bits & cmask == cmask)
    return Fraction(matches, len(array.words))


def _check_f_n(f: Number, n: int) -> None:
    if not 0 <= f <= 1:
        raise ValueError(f"match fraction must be within [0, 1], got {f}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")


def cam_time(params: CostParams, f: Number, n: int) -> Number:
    """Time for one CAM step over 2**(n+1) rows of n+1 bits."""
    _check_f_n(f, n)
    return params.delta1 + params.delta2 + 2 * f * params.delta1 * (1 << (n + 1))


def lockstep_time(params: CostParams) -> Number:
    """Time for one array step: broadcast plus answer, match count irrelevant."""
    return params.delta1 + params.delta2


def cam_power(
    params: CostParams, f: Number, n: int, words: int, exponent_base: Number = 2
) -> Number:
    """Power for one CAM step: mask drive, parallel match, serial rewrites.

    The serial term repeats roughly exponent_base**(n+1) * f times; base 2
    is the count of rows in a full count, kept as the default, while other
    bases can be supplied for sensitivity checks.
    """
    _check_f_n(f, n)
    if words < 1:
        raise ValueError(f"word count must be at least 1, got {words}")
    serial = 2 * f * params.p1 * n * exponent_base ** (n + 1)
    return params.p1 * n + params.p2 * words + serial


def lockstep_power(params: CostParams, n: int, active_words: Number) -> Number:
    """Power for one array step with the given number of unlocked words.

    Locked words hold their horizontal bus quiet, so they drop out of the
    p2 term entirely.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if active_words < 0:
        raise ValueError(f"active word count must be non-negative, got {active_words}")
    return params.p1 * n + params.p2 * active_words


@dataclass(frozen=True)
class CostReport:
    """One gate's analytic comparison; ratios are CAM over lockstep."""

    n: int
    words: int
    f: Number
    active_words: Number
    cam_time: Number
    lockstep_time: Number
    cam_power: Number
    lockstep_power: Number
    cam_pdp: Number
    lockstep_pdp: Number
    time_ratio: Number
    power_ratio: Number
    pdp_ratio: Number


def compare(
    params: CostParams,
    gate: Gate | None = None,
    *,
    n: int,
    words: int,
    lock_fraction: Number = 0,
    f: Number | None = None,
) -> CostReport:
    """Full analytic comparison for one step.

    Exactly one of ``gate`` and ``f`` picks the match fraction: a gate is
    scored by its control count, while an explicit ``f`` (an empirical
    matches/words, say, or the degenerate 0) is used as given.
    """
    if (gate is None) == (f is None):
        raise ValueError("give exactly one of gate and f")
    if f is None:
        assert gate is not None
        f = match_fraction(gate, n + 1)
    if not 0 <= lock_fraction <= 1:
        raise ValueError(f"lock fraction must be within [0, 1], got {lock_fraction}")
    active = words - words * lock_fraction
    ct = cam_time(params, f, n)
    lt = lockstep_time(params)
    cp = cam_power(params, f, n, words)
    lp = lockstep_power(params, n, active)
    return CostReport(
        n=n,
        words=words,
        f=f,
        active_words=active,
        cam_time=ct,
        lockstep_time=lt,
        cam_power=cp,
        lockstep_power=lp,
        cam_pdp=ct * cp,
        lockstep_pdp=lt * lp,
        time_ratio=ct / lt,
        power_ratio=cp / lp,
        pdp_ratio=(ct * cp) / (lt * lp),
    )


# -- executable CAM reference ---------------------------------------------


@dataclass(slots=True)
class CamCounters:
    """Event tallies for the CAM procedure.

    cam_cycles counts serial read-complement-write cycles, one per tagged
    row.  multi_reads and multi_writes count whole-row accesses (always one
    of each per cycle).  vertical_signals counts column-line activations:
    width + 1 per mask drive and 2 * (width - 1) per serial cycle.
    horizontal_signals counts word lines driven during the parallel match,
    one per row per step.
    """

    cam_cycles: int = 0
    multi_reads: int = 0
    multi_writes: int = 0
    vertical_signals: int = 0
    horizontal_signals: int = 0

    def copy(self) -> "CamCounters":
        return replace(self)

    def reset(self) -> None:
        self.cam_cycles = 0
        self.multi_reads = 0
        self.multi_writes = 0
        self.vertical_signals = 0
        self.horizontal_signals = 0


@dataclass(repr=False)
class CamState:
    """Rows, mask column and tag column of the CAM reference machine."""

    rows: list[int]
    width: int
    masks: int = 0
    tags: list[bool] = field(default_factory=list)
    counters: CamCounters = field(default_factory=CamCounters)

    def __post_init__(self) -> None:
        if not self.rows:
            raise EmptyArrayError("CAM must hold at least one row")
        if self.width < 1:
            raise WidthMismatchError(f"width must be at least 1, got {self.width}")
        top = 1 << self.width
        for i, row in enumerate(self.rows):
            if not 0 <= row < top:
                raise WidthMismatchError(
                    f"row {i} value {row} does not fit in {self.width} bits"
                )
        if not self.tags:
            self.tags = [False] * len(self.rows)
        if len(self.tags) != len(self.rows):
            raise WidthMismatchError(
                f"{len(self.tags)} tags for {len(self.rows)} rows"
            )

    def __repr__(self) -> str:
        return f"CamState(rows={len(self.rows)}, width={self.width})"

    @classmethod
    def from_patterns(cls, patterns: Iterable[str], width: int | None = None) -> "CamState":
        array = WordArray.from_patterns(patterns, width)
        return cls([word.bits for word in array.words], array.width)

    @classmethod
    def full_count(cls, width: int) -> "CamState":
        return cls(list(range(1 << width)), width)

    def patterns(self) -> list[str]:
        return [format(row, f"0{self.width}b") for row in self.rows]

    def controlled_not(self, gate: Gate) -> None:
        """Emulate one step: mask drive, parallel match, serial rewrite.

        Ends with the same row contents as WordArray.apply_gate on unlocked
        words and with all tags clear again.
        """
        validate_gate(gate, self.width)
        counters = self.counters
        # phase 1: clear tags, then drive the control pattern onto the masks
        self.tags = [False] * len(self.rows)
        self.masks = gate.control_mask
        counters.vertical_signals += self.width + 1
        # phase 2: every row matches in parallel into its tag
        cmask = self.masks
        for i, row in enumerate(self.rows):
            self.tags[i] = row & cmask == cmask
        counters.horizontal_signals += len(self.rows)
        # phase 3: serve tagged rows top down, one serial cycle each
        tmask = gate.target_mask
        for i, tagged in enumerate(self.tags):
            if not tagged:
                continue
            row = self.rows[i]
            counters.multi_reads += 1
            row ^= tmask
            self.rows[i] = row
            counters.multi_writes += 1
            self.tags[i] = False
            counters.vertical_signals += 2 * (self.width - 1)
            counters.cam_cycles += 1

    def counted_time(self, params: CostParams) -> Number:
        """Step time implied by the counters: delta1 + delta2 + 2*delta1 per cycle."""
        return params.delta1 + params.delta2 + 2 * params.delta1 * self.counters.cam_cycles

    def counted_power(self, params: CostParams) -> Number:
        """Step power implied by the counters: p1 and p2 per counted line."""
        return (
            params.p1 * self.counters.vertical_signals
            + params.p2 * self.counters.horizontal_signals
        )
