"""Engine unit tests: words, gates, programs, flags, locks, counters."""

import pytest

from lockstep.engine import (
    EmptyArrayError,
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

# Three-step search for key bits "01": uncontrolled wrap of bit 2,
# flag toggle on bits 2 and 1, wrap back.
DEMO_GATES = (
    Gate((), (2,)),
    Gate((2, 1), (0,)),
    Gate((), (2,)),
)


def demo_array() -> WordArray:
    return WordArray.from_patterns(["010", "000", "100"], payloads=[7, None, 12])


class TestConstruction:
    def test_from_patterns_round_trip(self):
        array = demo_array()
        assert array.width == 3
        assert array.patterns() == ["010", "000", "100"]
        assert [w.bits for w in array.words] == [0b010, 0b000, 0b100]

    def test_from_patterns_keeps_payloads(self):
        array = demo_array()
        assert [w.payload for w in array.words] == [7, None, 12]

    def test_from_patterns_explicit_width_must_agree(self):
        with pytest.raises(WidthMismatchError):
            WordArray.from_patterns(["010", "000"], width=4)

    def test_from_patterns_rejects_ragged_rows(self):
        with pytest.raises(WidthMismatchError):
            WordArray.from_patterns(["010", "0100"])

    def test_from_patterns_rejects_non_binary(self):
        with pytest.raises(WidthMismatchError):
            WordArray.from_patterns(["012"])

    def test_from_patterns_rejects_empty(self):
        with pytest.raises(EmptyArrayError):
            WordArray.from_patterns([])

    def test_from_patterns_payload_count_must_match(self):
        with pytest.raises(WidthMismatchError):
            WordArray.from_patterns(["01", "10"], payloads=[1])

    def test_full_count_enumerates_every_pattern(self):
        array = WordArray.full_count(3)
        assert len(array) == 8
        assert [w.bits for w in array.words] == list(range(8))
        assert array.pattern(5) == "101"

    def test_full_count_needs_positive_width(self):
        with pytest.raises(WidthMismatchError):
            WordArray.full_count(0)

    def test_word_pattern_pads_to_width(self):
        assert Word(0b1).pattern(4) == "0001"


class TestGateDefinition:
    def test_masks(self):
        gate = Gate((2, 1), (0,))
        assert gate.control_mask == 0b110
        assert gate.target_mask == 0b001

    def test_operands_coerced_to_frozensets(self):
        gate = Gate([1, 1, 2], [0])
        assert gate.controls == frozenset({1, 2})
        assert gate.targets == frozenset({0})

    def test_validate_rejects_empty_targets(self):
        with pytest.raises(GateDefinitionError):
            validate_gate(Gate((1,), ()), width=3)

    def test_validate_rejects_overlap(self):
        with pytest.raises(GateDefinitionError):
            validate_gate(Gate((0, 1), (1,)), width=3)

    def test_validate_rejects_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            validate_gate(Gate((3,), (0,)), width=3)
        with pytest.raises(IndexOutOfRangeError):
            validate_gate(Gate((), (-1,)), width=3)


class TestApply:
    def test_uncontrolled_not_flips_every_word(self):
        array = demo_array()
        array.apply_gate(Gate((), (2,)))
        assert array.patterns() == ["110", "100", "000"]

    def test_controlled_not_fires_only_on_full_match(self):
        array = WordArray.from_patterns(["110", "111", "010"])
        array.apply_gate(Gate((2, 1), (0,)))
        assert array.patterns() == ["111", "110", "010"]

    def test_match_census_on_full_count(self):
        array = WordArray.full_count(3)
        array.apply_gate(Gate((2, 1), (0,)))
        # exactly the words holding 11 in the control columns fire
        assert array.counters.bus_activations == 2
        assert array.pattern(6) == "111"
        assert array.pattern(7) == "110"

    def test_multi_target_flips_all_targets_at_once(self):
        array = WordArray.from_patterns(["0101"])
        array.apply_gate(Gate((0,), (3, 1)))
        assert array.patterns() == ["1111"]
        assert array.counters.toggles == 2

    def test_apply_gate_validates_against_width(self):
        array = demo_array()
        with pytest.raises(IndexOutOfRangeError):
            array.apply_gate(Gate((), (3,)))
        with pytest.raises(GateDefinitionError):
            array.apply_gate(Gate((1,), ()))

    def test_demo_program_sets_expected_flags(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        assert array.read_flags(0) == [True, False, False]
        # key bits come back untouched
        assert [w.bits >> 1 for w in array.words] == [0b01, 0b00, 0b10]

    def test_empty_program_is_identity(self):
        array = demo_array()
        array.apply_program([])
        assert array.patterns() == ["010", "000", "100"]
        assert array.counters.steps == 0

    def test_gate_is_self_inverse(self):
        array = WordArray.from_patterns(["1101", "0110"])
        gate = Gate((0, 2), (3,))
        array.apply_gate(gate)
        array.apply_gate(gate)
        assert array.patterns() == ["1101", "0110"]

    def test_apply_inverse_undoes_program(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        array.apply_inverse(DEMO_GATES)
        assert array.patterns() == ["010", "000", "100"]

    def test_on_step_sees_every_intermediate_state(self):
        array = WordArray.from_patterns(["010"])
        seen = []
        array.apply_program(
            DEMO_GATES, on_step=lambda i, gate: seen.append((i, array.pattern(0)))
        )
        assert seen == [(0, "110"), (1, "111"), (2, "011")]

    def test_payloads_ride_along_unchanged(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        assert [w.payload for w in array.words] == [7, None, 12]


class TestFlags:
    def test_read_flags_golden(self):
        array = WordArray.from_patterns(["011", "000", "110"])
        assert array.read_flags(0) == [True, False, False]
        assert array.read_flags(1) == [True, False, True]

    def test_locate_flags_returns_ascending_indices(self):
        array = WordArray.from_patterns(["001", "000", "001"])
        assert array.locate_flags(0) == [0, 2]
        assert array.locate_flags(1) == []

    def test_flag_bit_must_be_in_range(self):
        array = demo_array()
        with pytest.raises(IndexOutOfRangeError):
            array.read_flags(3)
        with pytest.raises(IndexOutOfRangeError):
            array.locate_flags(-1)


class TestLocks:
    def test_lock_where_mismatch_golden(self):
        array = WordArray.full_count(3)
        newly = array.lock_where((2, 1), sense="mismatch")
        assert newly == 6
        assert array.active_words() == 2
        locked = [i for i, w in enumerate(array.words) if w.locked]
        assert locked == [0, 1, 2, 3, 4, 5]

    def test_lock_where_match_is_the_complement(self):
        array = WordArray.full_count(3)
        array.lock_where((2, 1), sense="match")
        locked = [i for i, w in enumerate(array.words) if w.locked]
        assert locked == [6, 7]

    def test_lock_where_is_idempotent(self):
        array = WordArray.full_count(3)
        assert array.lock_where((2,)) == 4
        assert array.lock_where((2,)) == 0
        assert array.active_words() == 4

    def test_lock_where_empty_controls(self):
        array = WordArray.full_count(2)
        assert array.lock_where((), sense="mismatch") == 0
        assert array.lock_where((), sense="match") == 4

    def test_lock_where_rejects_unknown_sense(self):
        with pytest.raises(ValueError):
            demo_array().lock_where((1,), sense="sideways")

    def test_locked_words_sit_out_every_step(self):
        array = demo_array()
        array.words[1].locked = True
        array.words[2].locked = True
        array.apply_program(DEMO_GATES)
        assert array.read_flags(0) == [True, False, False]
        assert array.patterns()[1:] == ["000", "100"]
        assert array.counters.locked_savings == 6

    def test_unlock_all(self):
        array = WordArray.full_count(2)
        array.lock_where((), sense="match")
        assert array.unlock_all() == 4
        assert array.active_words() == 4

    def test_verify_locks_raises_before_any_mutation(self):
        array = WordArray.from_patterns(["11", "01"])
        array.words[0].locked = True
        with pytest.raises(LockViolationError):
            array.apply_gate(Gate((0,), (1,)), verify_locks=True)
        # the pre-scan fires before the unlocked word is touched
        assert array.patterns() == ["11", "01"]
        assert array.counters.steps == 0

    def test_verify_locks_passes_when_locked_words_would_not_fire(self):
        array = WordArray.from_patterns(["10", "01"])
        array.words[0].locked = True
        array.apply_gate(Gate((0,), (1,)), verify_locks=True)
        assert array.patterns() == ["10", "11"]

    def test_unverified_apply_silently_skips_locked_words(self):
        array = WordArray.from_patterns(["11", "01"])
        array.words[0].locked = True
        array.apply_gate(Gate((0,), (1,)))
        assert array.patterns() == ["11", "11"]


class TestCounters:
    def test_demo_program_census(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        c = array.counters
        assert (c.steps, c.bus_activations, c.toggles) == (3, 7, 7)
        assert c.locked_savings == 0

    def test_toggles_scale_with_target_count(self):
        array = WordArray.from_patterns(["00", "00"])
        array.apply_gate(Gate((), (0, 1)))
        assert array.counters.bus_activations == 2
        assert array.counters.toggles == 4

    def test_copy_is_detached(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        snap = array.counters.copy()
        array.apply_program(DEMO_GATES)
        assert snap.steps == 3
        assert array.counters.steps == 6

    def test_reset_counters(self):
        array = demo_array()
        array.apply_program(DEMO_GATES)
        array.reset_counters()
        assert array.counters == EventCounters()


class TestWordFileParsing:
    def test_patterns_comments_and_payloads(self):
        text = "# fixture\n010 7\n\n000\n100 12\n"
        array = parse_word_text(text)
        assert array.patterns() == ["010", "000", "100"]
        assert [w.payload for w in array.words] == [7, None, 12]

    def test_crlf_and_stray_spaces(self):
        array = parse_word_text("01 3\r\n10\r\n")
        assert array.patterns() == ["01", "10"]

    def test_rejects_non_binary_pattern(self):
        with pytest.raises(ParseError) as exc:
            parse_word_text("010\n01x\n")
        assert exc.value.line == 2

    def test_rejects_ragged_width(self):
        with pytest.raises(ParseError) as exc:
            parse_word_text("010\n0100\n")
        assert exc.value.line == 2

    def test_rejects_bad_payload(self):
        with pytest.raises(ParseError):
            parse_word_text("010 seven\n")

    def test_rejects_trailing_junk(self):
        with pytest.raises(ParseError):
            parse_word_text("010 7 9\n")

    def test_rejects_empty_input(self):
        with pytest.raises(EmptyArrayError):
            parse_word_text("# nothing here\n")
