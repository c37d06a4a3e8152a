"""Acceptance gate.  Each test carries a ``criterion`` mark; the terminal
summary prints one PASS/FAIL line per criterion."""
import itertools
import random
from collections import Counter

import numpy as np
import pytest

from mealysg import (act, classify, dual_finiteness_crosscheck, enriched, equal_in_D,
                     equal_in_Dprime, equal_in_P, fixture, order_in_D, orbit_language,
                     periodic_orbit_verdict, residual)
from mealysg.automaton import inverse_symbol
from mealysg.minsky import instruction_types, minsky_trace
from mealysg.notregular import (has_period, membership_by_orbit, notregular_membership,
                                predicted_form, psi_tower)
from mealysg.orbits import (NotBireversible, degree_profile, preperiodic_dfa, synthesize_orbit_dfa,
                            validate_dfa, ValidatedDepth)
from mealysg.order import all_small_automata, growing

from conftest import d_classes, p_classes, p_same, random_automaton, words_upto

criterion = pytest.mark.criterion
N_CAP = 2_000_000


@pytest.fixture(scope="module")
def n_language():
    return orbit_language(fixture("notregular_N"), "a", cap=N_CAP)


# -- 1 ------------------------------------------------------------------------------

@criterion(1, "Zappa-Szép identities, 1000 random cases")
def test_zappa_szep_identity_suite():
    rng = random.Random(20240601)
    for _ in range(1000):
        m = random_automaton(rng)
        s, t = (tuple(rng.choices(m.states, k=rng.randint(0, 8))) for _ in range(2))
        u, v = (tuple(rng.choices(m.alphabet, k=rng.randint(0, 8))) for _ in range(2))
        assert act(m, s + t, u) == act(m, s, act(m, t, u))
        assert residual(m, s, u + v) == residual(m, residual(m, s, u), v)
        assert act(m, s, u + v) == act(m, s, u) + act(m, residual(m, s, u), v)
        assert residual(m, s + t, u) == residual(m, s, act(m, t, u)) + residual(m, t, u)


# -- 2 ------------------------------------------------------------------------------

@criterion(2, "fixture classifications")
def test_fixture_classifications():
    z = classify(fixture("z2"))
    assert z.invertible and z.reversible and not z.bireversible
    f = classify(fixture("figure1"))
    assert not (f.invertible or f.reversible or f.bireversible)
    assert classify(fixture("notregular_N")).invertible


# -- 3 ------------------------------------------------------------------------------

def check_against_oracle(decide, m, oracle, exhaustive):
    """All pairs when ``exhaustive``; otherwise every word against the first
    word of its oracle class, and those first words pairwise."""
    words = list(oracle)
    if exhaustive:
        for a, b in itertools.combinations(words, 2):
            assert decide(m, a, b).equal == (oracle[a] == oracle[b]), (a, b)
        return len(words)
    reps = {}
    for w in words:
        r = reps.setdefault(oracle[w], w)
        assert decide(m, w, r).equal, (w, r)
    for a, b in itertools.combinations(reps.values(), 2):
        assert not decide(m, a, b).equal, (a, b)
    return len(words)


def bounded_dprime(m, max_u, max_s):
    """Letter words up to ``max_u`` grouped by the P-classes of ``s@u`` over
    every state word ``s`` up to ``max_s``.  Coarser than ~D in general."""
    pc = p_classes(m, max_s)
    states = list(words_upto(m.states, max_s))
    sig = {u: tuple(pc[residual(m, s, u)] for s in states) for u in words_upto(m.alphabet, max_u)}
    ids = {}
    return {u: ids.setdefault(v, len(ids)) for u, v in sig.items()}


def check_dprime(m, max_u, max_s):
    """Equal verdicts must survive every residual word up to ``max_s``;
    distinct verdicts must come with a witness that the Moore oracle
    confirms."""
    bounded = bounded_dprime(m, max_u, max_s)
    for u, v in itertools.combinations(list(bounded), 2):
        verdict = equal_in_Dprime(m, u, v)
        if verdict.equal:
            assert bounded[u] == bounded[v], (u, v)
        else:
            w = verdict.witness
            assert not p_same(m, residual(m, w, u), residual(m, w, v)), (u, v, w)
            if len(w) <= max_s:
                assert bounded[u] != bounded[v], (u, v)


# (fixture, word length for P, for D, for D'; D' residual states up to 6 or 4)
HORIZONS = {
    "figure1": (6, 6, 6, 6),
    "z2": (6, 6, 6, 6),
    "classes_not_preserved": (6, 6, 3, 6),
    "notregular_N": (5, 2, 2, 4),
}


@criterion(3, "equality deciders agree with brute force")
@pytest.mark.parametrize("name", list(HORIZONS))
def test_deciders_against_brute_force(name):
    m = fixture(name)
    lp, ld, ldp, ls = HORIZONS[name]
    small = lambda n, k: k ** n <= 128
    check_against_oracle(equal_in_P, m, p_classes(m, lp), small(lp, len(m.states)))
    check_against_oracle(equal_in_D, m, d_classes(m, ld), small(ld, len(m.alphabet)) or name == "notregular_N")
    check_dprime(m, ldp, ls)


# -- 4 ------------------------------------------------------------------------------

@criterion(4, "ClassesNotPreserved verdicts")
def test_classes_not_preserved():
    c = fixture("classes_not_preserved")
    assert equal_in_Dprime(c, ["x1"], ["y1"]).equal
    assert not equal_in_Dprime(c, ["x2"], ["y2"]).equal
    assert not equal_in_P(c, ["b"], ["c"]).equal


# -- 5 ------------------------------------------------------------------------------

INVERTIBLE = ("z2", "notregular_N", "identity", "perm")


def configurations(m, start, depth, check):
    """Walk every letter word up to ``depth`` through the state word
    ``start``, keeping one copy of each reachable tuple of states per
    length (the outputs from there on depend only on that tuple)."""
    level = {tuple(start)}
    for _ in range(depth):
        nxt = set()
        for states in level:
            for a in m.alphabet:
                out, new = _step(m, states, a)
                check(states, a, out, new)
                nxt.add(new)
        level = nxt


def _step(m, states, a):
    states = list(states)
    for i in reversed(range(len(states))):
        a, states[i] = m[(states[i], a)]
    return a, tuple(states)


@criterion(5, "enriched-automaton laws")
@pytest.mark.parametrize("name", INVERTIBLE)
def test_enriched_laws(name):
    m = fixture(name)
    e = enriched(m)

    def trivial(states, a, out, new):
        assert out == a, (states, a)

    for q in m.states:
        qi = inverse_symbol(q)
        configurations(e, (qi, q), 8, trivial)
        configurations(e, (q, qi), 8, trivial)

    # q^-1 @ v == (q @ (q^-1 · v))^-1, tracked as (state of q^-1, state of q on the image)
    for q in m.states:
        level = {(inverse_symbol(q), q)}
        for _ in range(6):
            nxt = set()
            for r1, r2 in level:
                assert r1 == inverse_symbol(r2)
                for a in m.alphabet:
                    b, s1 = e[(r1, a)]
                    nxt.add((s1, e[(r2, b)][1]))
            level = nxt
        assert all(r1 == inverse_symbol(r2) for r1, r2 in level)

    n = 2 if name == "notregular_N" else 5
    for u, v in itertools.combinations(list(words_upto(m.alphabet, n)), 2):
        assert equal_in_D(m, u, v).equal == equal_in_D(e, u, v).equal, (u, v)
    om, oe = d_classes(m, 5), d_classes(e, 5)
    pairs = {}
    for w in om:
        assert pairs.setdefault(om[w], oe[w]) == oe[w]
    assert len(set(om.values())) == len(set(oe.values()))


# -- 6 ------------------------------------------------------------------------------

@criterion(6, "degree laws")
@pytest.mark.parametrize("name, base", [("z2", "0"), ("identity", "a"), ("perm", "a"),
                                        ("perm", "b"), ("notregular_N", "a")])
def test_degree_laws(name, base, n_language):
    m = fixture(name)
    if name == "notregular_N":
        lang, k_max, depth = n_language, 5, 5
    else:
        lang, k_max, depth = orbit_language(m, base), 8, 6
    profile = degree_profile(m, base, k_max, language=lang)
    assert not profile.truncated and len(profile.degrees) == k_max
    assert all(x >= y for x, y in zip(profile.degrees, profile.degrees[1:]))
    for n in range(1, depth + 1):
        assert len(set(lang.degrees(n).tolist())) == 1, n


# -- 7 ------------------------------------------------------------------------------

@criterion(7, "orbit-language DFA synthesis")
@pytest.mark.parametrize("name", ["identity", "perm", "notregular_N"])
def test_dfa_synthesis(name, n_language):
    m = fixture(name)
    if name == "notregular_N":
        syn = synthesize_orbit_dfa(m, "a", k_max=5, cap=N_CAP, language=n_language)
    else:
        syn = synthesize_orbit_dfa(m, "a")
    assert syn.dfa.validated_depth >= syn.T + 5
    if name != "notregular_N":
        assert validate_dfa(syn.graph.language, syn.dfa, syn.T + 7) == ValidatedDepth(syn.T + 7)


# -- 8 ------------------------------------------------------------------------------

@criterion(8, "non-regular orbit language example")
def test_notregular_example():
    N = fixture("notregular_N")
    assert equal_in_P(N, "xy", "yx").equal
    printed = ["yxs", "yyxt", "yxxt", "yxxxxs", "yyxxs", "yyyyxs"]
    for k, word in enumerate(printed):
        assert "".join(psi_tower(k).word) == word
    for k in range(8):
        assert psi_tower(k + 1).form == predicted_form(psi_tower(k).form)
    for k in range(11):
        assert notregular_membership(k) == membership_by_orbit(k)[0], k
    seq = [notregular_membership(k) for k in range(41)]
    assert not any(has_period(seq, p) for p in range(1, 9))


# -- 9 ------------------------------------------------------------------------------

@criterion(9, "two-counter machine trace")
def test_minsky_trace():
    run = " ↦ ".join(str(s) for s in minsky_trace(16))
    assert run == ("(a1, 0, 0) ↦ (b1, 1, 1) ↦ (d1, 0, 1) ↦ (a2, 0, 1) ↦ (b2, 1, 2) ↦ "
                   "(d2, 1, 1) ↦ (c2, 1, 1) ↦ (a2, 1, 0) ↦ (b2, 2, 1) ↦ (d2, 2, 0) ↦ "
                   "(a1, 2, 0) ↦ (b1, 3, 1) ↦ (d1, 2, 1) ↦ (c1, 2, 1) ↦ (a1, 1, 1) ↦ (b1, 2, 2)")
    assert instruction_types(minsky_trace(5)) == ["III", "IV", "VII", "III", "V"]


# -- 10 -----------------------------------------------------------------------------

@criterion(10, "order and orbit verdicts")
def test_order_and_orbit_verdicts():
    ident = fixture("identity")
    order = order_in_D(ident, "a", 4)
    assert (order.k, order.l) == (1, 2)
    assert periodic_orbit_verdict(ident, "a", 4).orbit_size == 1
    v = periodic_orbit_verdict(fixture("perm"), "a", 4)
    assert v.finite and v.orbit_size == 2
    v = periodic_orbit_verdict(fixture("notregular_N"), "a", 5)
    assert not v.finite and not v.order.finite
    assert len(v.sizes) >= 3 and growing(v.sizes, span=len(v.sizes))


# -- 11 -----------------------------------------------------------------------------

@criterion(11, "P/D finiteness sweep over 2x2 automata")
def test_finiteness_sweep():
    outcomes = Counter()
    bad = []
    for m in all_small_automata(2, 2):
        rep = dual_finiteness_crosscheck(m, cap=10_000)
        outcomes[(rep.P.outcome, rep.D.outcome)] += 1
        if not rep.consistent:
            bad.append(m.table)
    print(dict(outcomes))
    assert sum(outcomes.values()) == 265
    assert bad == []


# -- 12 -----------------------------------------------------------------------------

@criterion(12, "bireversible pre-periodic DFA")
def test_preperiodic_dfa():
    res = preperiodic_dfa(fixture("perm"), "a", "b", depth=12)
    for n in range(13):
        want = {("a",) + ("b",) * (n - 1), ("b",) + ("a",) * (n - 1)} if n else {()}
        assert set(res.dfa.words(n)) == want
    with pytest.raises(NotBireversible):
        preperiodic_dfa(fixture("z2"), "0", "1")
