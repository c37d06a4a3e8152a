import pytest

from mealysg.minsky import (START, TYPE_III_EXCERPT, TYPE_III_LETTERS, MinskyState,
                            instruction_types, minsky_step, minsky_trace)

RUN = ("(a1, 0, 0) (b1, 1, 1) (d1, 0, 1) (a2, 0, 1) (b2, 1, 2) (d2, 1, 1) (c2, 1, 1) (a2, 1, 0) "
       "(b2, 2, 1) (d2, 2, 0) (a1, 2, 0) (b1, 3, 1) (d1, 2, 1) (c1, 2, 1) (a1, 1, 1) (b1, 2, 2)")


def test_first_step():
    assert minsky_step(START) == MinskyState("b1", 1, 1)


def test_trace_text():
    assert " ".join(map(str, minsky_trace(16))) == RUN


def test_instruction_types():
    assert instruction_types(minsky_trace(5)) == ["III", "IV", "VII", "III", "V"]


def test_branches():
    assert minsky_step(MinskyState("d1", 0, 3)).instruction == "a2"
    assert minsky_step(MinskyState("d1", 2, 3)).instruction == "c1"
    assert minsky_step(MinskyState("d2", 1, 0)).instruction == "a1"
    assert minsky_step(MinskyState("d2", 1, 2)) == MinskyState("c2", 1, 2)


def test_bad_states():
    with pytest.raises(ValueError):
        minsky_step(MinskyState("b1", 0, 0))
    with pytest.raises(ValueError):
        minsky_step(MinskyState("z9", 0, 0))


def test_counters_stay_non_negative():
    for s in minsky_trace(500):
        assert s.m >= 0 and s.n >= 0


def test_excerpt_shape():
    for row in TYPE_III_EXCERPT.values():
        assert len(row) == len(TYPE_III_LETTERS)
        assert all(out in TYPE_III_LETTERS for out, _ in row)
