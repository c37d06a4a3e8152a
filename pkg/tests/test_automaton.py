import pytest
from hypothesis import given, settings

from mealysg import (AutomatonError, AutomatonFormatError, MealyAutomaton, NotInvertible,
                     classify, dual, enriched, fixture, parse_automaton, power, serialize_automaton)
from mealysg.automaton import moore_dot
from mealysg.fixtures import FIXTURE_NAMES

from conftest import automata

FIGURE1_TEXT = """\
# two states
name figure1
states t s
alphabet 0 1
t 0 -> 0 s
t 1 -> 0 t
s 0 -> 1 s
s 1 -> 0 s
"""


def test_parse_figure1():
    m = parse_automaton(FIGURE1_TEXT)
    assert m == fixture("figure1")
    assert m.name == "figure1"
    assert m[("t", "0")] == ("0", "s")
    assert m[("s", "1")] == ("0", "s")


def test_parse_identity():
    m = parse_automaton("states e\nalphabet a b c\ne a -> a e\ne b -> b e\ne c -> c e\n")
    assert all(m[("e", a)] == (a, "e") for a in "abc")


@pytest.mark.parametrize("text, message, line", [
    ("states t\nalphabet 0 1\nt 0 -> 0 t\n", "missing transition (t,1)", None),
    ("states t\nalphabet 0\nt 0 -> 1 t\n", "undeclared letter 1", 3),
    ("states t\nalphabet 0\nt 0 -> 0 t\nt 0 -> 0 t\n", "duplicate transition", 4),
    ("states t t\nalphabet 0\n", "duplicate symbol t", 1),
    ("alphabet 0\nt 0 -> 0 t\n", "transition before", 2),
    ("states t\nalphabet 0\nt 0 0 t\n", "expected", 3),
    ("states t\nalphabet 0\nname late\n", "first declaration", 3),
    ("alphabet 0\n", "missing 'states'", None),
])
def test_parse_errors(text, message, line):
    with pytest.raises(AutomatonFormatError) as info:
        parse_automaton(text)
    assert message in str(info.value)
    assert info.value.line == line


def test_error_column_points_at_token():
    with pytest.raises(AutomatonFormatError) as info:
        parse_automaton("states t\nalphabet 0\nt 0 -> 0   u\n")
    assert (info.value.line, info.value.column) == (3, 12)


def test_missing_transition_exact_message():
    text = FIGURE1_TEXT.replace("s 1 -> 0 s\n", "")
    with pytest.raises(AutomatonFormatError, match=r"missing transition \(s,1\)"):
        parse_automaton(text)


def test_constructor_checks():
    with pytest.raises(AutomatonError):
        MealyAutomaton([], ["a"], {})
    with pytest.raises(AutomatonError, match="missing transition"):
        MealyAutomaton(["q"], ["a", "b"], {("q", "a"): ("a", "q")})
    with pytest.raises(AutomatonError, match="duplicate"):
        MealyAutomaton(["q", "q"], ["a"], {("q", "a"): ("a", "q")})
    m = fixture("z2")
    with pytest.raises(AttributeError):
        m.states = ("x",)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_round_trip_fixtures(name):
    m = fixture(name)
    text = serialize_automaton(m)
    assert parse_automaton(text) == m
    assert serialize_automaton(parse_automaton(text)) == text


def test_serialize_order_is_state_major():
    lines = serialize_automaton(fixture("figure1")).splitlines()
    assert lines[-4:] == ["t 0 -> 0 s", "t 1 -> 0 t", "s 0 -> 1 s", "s 1 -> 0 s"]


@settings(max_examples=60, deadline=None)
@given(automata())
def test_round_trip_random(m):
    assert parse_automaton(serialize_automaton(m)) == m


def test_classify_fixtures():
    assert tuple(vars(classify(fixture("z2"))).values()) == (True, True, False)
    assert tuple(vars(classify(fixture("figure1"))).values()) == (False, False, False)
    assert classify(fixture("notregular_N")).invertible
    c = classify(fixture("perm"))
    assert c.invertible and c.reversible and c.bireversible


def test_dual():
    f = fixture("figure1")
    assert dual(dual(f)) == f
    d = dual(fixture("identity"))
    assert d.states == ("a", "b") and d.alphabet == ("e",)
    assert all(d[(a, "e")] == ("e", a) for a in "ab")


@settings(max_examples=80, deadline=None)
@given(automata())
def test_dual_laws(m):
    assert dual(dual(m)) == m
    assert classify(m).reversible == classify(dual(m)).invertible
    assert classify(m).invertible == classify(dual(m)).reversible


def test_enriched_z2():
    e = enriched(fixture("z2"))
    assert len(e.states) == 4
    # 1^-1 reading b writes b+1 and moves to the inverse of 1@(b+1)
    for b in "01":
        b1 = str((int(b) + 1) % 2)
        out, nxt = e[("1^-1", b)]
        assert out == b1
        assert nxt == fixture("z2").next("1", b1) + "^-1"


def test_enriched_identity_and_errors():
    e = enriched(fixture("identity"))
    assert e.states == ("e", "e^-1")
    assert all(e[(q, a)] == (a, q) for q in e.states for a in e.alphabet)
    with pytest.raises(NotInvertible):
        enriched(fixture("figure1"))


def test_power():
    z = fixture("z2")
    assert power(z, 1) is z
    assert power(z, 2)[("1", "10")] == ("00", "0")
    with pytest.raises(ValueError):
        power(z, 0)


@pytest.mark.parametrize("name", ["figure1", "z2", "classes_not_preserved", "perm", "identity"])
@pytest.mark.parametrize("k", [2, 3])
def test_power_keeps_classification(name, k):
    m = fixture(name)
    a, b = classify(m), classify(power(m, k))
    assert (a.invertible, a.reversible) == (b.invertible, b.reversible)


def test_moore_dot():
    text = moore_dot(fixture("figure1"))
    assert '"t" -> "s" [label="0|0"]' in text
    assert '"t" -> "t" [label="1|0"]' in text
    assert '"s" -> "s" [label="0|1"]' in text and '"s" -> "s" [label="1|0"]' in text
    assert text == moore_dot(fixture("figure1"))
    ident = moore_dot(fixture("identity"))
    assert ident.count("->") == 2 and '"e" -> "e" [label="a|a"]' in ident


def test_fixture_lookup():
    assert len(fixture("classes_not_preserved").alphabet) == 6
    N = fixture("notregular_N")
    assert len(N.states) == 5 and len(N.alphabet) == 11
    assert fixture("identity:a,b,c").alphabet == ("a", "b", "c")
    assert fixture("perm:a=b,b=c,c=a")[("p", "c")] == ("a", "p")
    with pytest.raises(KeyError):
        fixture("nope")
