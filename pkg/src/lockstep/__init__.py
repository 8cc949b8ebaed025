"""Lockstep word-array simulator.

An array of words, all transformed at once by multi-controlled-NOT steps,
with a text format for step programs, compilers that reduce keyword
search, satisfiability and whole-truth-table analysis to step programs,
and a cost model comparing the array against a CAM doing the same work.
"""

from .engine import (
    EmptyArrayError,
    EngineError,
    EventCounters,
    Gate,
    GateDefinitionError,
    IndexOutOfRangeError,
    LockViolationError,
    ParseError,
    WidthMismatchError,
    Word,
    WordArray,
    parse_word_text,
    validate_gate,
)
from .dsl import Program, ValidationError, Violation, gate_text, invert, parse, serialize, validate
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
    parse_formula,
    variables,
)
from .compilers import (
    Cube,
    FlagCollisionError,
    GPReport,
    NotPowerOfTwoError,
    brute_force_table,
    compile_cubes,
    compile_formula,
    compile_keyword,
    default_var_map,
    esop_expand,
    full_assignment_array,
    gp_analyze,
    run_formula,
    run_gp,
)
from .costmodel import (
    CamCounters,
    CamState,
    CostParams,
    CostReport,
    cam_power,
    cam_time,
    compare,
    empirical_match_fraction,
    lockstep_power,
    lockstep_time,
    match_fraction,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "CamCounters",
    "CamState",
    "Const",
    "CostParams",
    "CostReport",
    "Cube",
    "EmptyArrayError",
    "EngineError",
    "EventCounters",
    "FlagCollisionError",
    "Formula",
    "GPReport",
    "Gate",
    "GateDefinitionError",
    "IndexOutOfRangeError",
    "LockViolationError",
    "Not",
    "NotPowerOfTwoError",
    "Or",
    "ParseError",
    "Program",
    "UnboundVariableError",
    "ValidationError",
    "Var",
    "Violation",
    "WidthMismatchError",
    "Word",
    "WordArray",
    "Xor",
    "brute_force_table",
    "cam_power",
    "cam_time",
    "compare",
    "compile_cubes",
    "compile_formula",
    "compile_keyword",
    "default_var_map",
    "empirical_match_fraction",
    "esop_expand",
    "evaluate",
    "full_assignment_array",
    "gate_text",
    "gp_analyze",
    "invert",
    "lockstep_power",
    "lockstep_time",
    "match_fraction",
    "parse",
    "parse_formula",
    "parse_word_text",
    "run_formula",
    "run_gp",
    "serialize",
    "validate",
    "validate_gate",
    "variables",
]
