"""Formula front end: parsing, precedence, evaluation, variable listing."""

import pytest

from lockstep.engine import ParseError
from lockstep.formula import (
    And,
    Const,
    Not,
    Or,
    UnboundVariableError,
    Var,
    Xor,
    evaluate,
    parse_formula,
    variables,
)


class TestParsing:
    def test_single_variable(self):
        assert parse_formula("a") == Var("a")

    def test_constants(self):
        assert parse_formula("1") == Const(True)
        assert parse_formula("0") == Const(False)

    def test_binary_operators(self):
        assert parse_formula("a & b") == And((Var("a"), Var("b")))
        assert parse_formula("a | b") == Or((Var("a"), Var("b")))
        assert parse_formula("a ^ b") == Xor((Var("a"), Var("b")))

    def test_precedence_not_and_xor_or(self):
        assert parse_formula("a | b ^ c & !d") == Or(
            (Var("a"), Xor((Var("b"), And((Var("c"), Not(Var("d")))))))
        )

    def test_parentheses_override(self):
        assert parse_formula("(a | b) & c") == And(
            (Or((Var("a"), Var("b"))), Var("c"))
        )

    def test_chains_flatten_into_one_node(self):
        assert parse_formula("a & b & c") == And((Var("a"), Var("b"), Var("c")))
        assert parse_formula("a ^ b ^ c ^ d") == Xor(
            (Var("a"), Var("b"), Var("c"), Var("d"))
        )

    def test_double_negation_stays_structural(self):
        assert parse_formula("!!a") == Not(Not(Var("a")))

    def test_whitespace_and_newlines_are_free(self):
        assert parse_formula(" a\n  & b ") == And((Var("a"), Var("b")))

    def test_identifiers_with_digits_and_underscores(self):
        assert parse_formula("x_1 & B2") == And((Var("x_1"), Var("B2")))


class TestParseErrors:
    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_formula("")

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ParseError):
            parse_formula("(a & b")

    def test_trailing_junk(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("a b")
        assert (exc.value.line, exc.value.column) == (1, 3)

    def test_dangling_operator(self):
        with pytest.raises(ParseError):
            parse_formula("a &")

    def test_multi_digit_literals_are_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("10")
        assert (exc.value.line, exc.value.column) == (1, 1)

    def test_unexpected_character(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("a $ b")
        assert (exc.value.line, exc.value.column) == (1, 3)

    def test_error_positions_track_newlines(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("a &\n  %")
        assert (exc.value.line, exc.value.column) == (2, 3)


class TestEvaluate:
    def test_xor_truth_table(self):
        f = parse_formula("a ^ b")
        results = [
            evaluate(f, {"a": a, "b": b}) for a in (False, True) for b in (False, True)
        ]
        assert results == [False, True, True, False]

    def test_nested_expression(self):
        f = parse_formula("(a | b) & !c")
        assert evaluate(f, {"a": True, "b": False, "c": False}) is True
        assert evaluate(f, {"a": True, "b": False, "c": True}) is False

    def test_constants_ignore_the_environment(self):
        assert evaluate(Const(True), {}) is True
        assert evaluate(Const(False), {"a": True}) is False

    def test_missing_binding_raises(self):
        with pytest.raises(UnboundVariableError):
            evaluate(parse_formula("a & b"), {"a": True})


class TestVariables:
    def test_collects_each_name_once(self):
        assert variables(parse_formula("a & b | a ^ !c")) == {"a", "b", "c"}

    def test_constants_have_no_variables(self):
        assert variables(parse_formula("1 ^ 0")) == set()
