import pytest

from mealysg import equal_in_P, fixture
from mealysg.notregular import (has_period, interval_prediction, membership_by_orbit,
                                notregular_membership, predicted_form, psi_tower)
from mealysg.orbits import level_permutation

PRINTED = ["y x s", "y y x t", "y x x t", "y x x x x s", "y y x x s", "y y y y x s"]


@pytest.mark.parametrize("k, word", list(enumerate(PRINTED)))
def test_tower_matches_printed(k, word):
    N = fixture("notregular_N")
    got = psi_tower(k).word
    assert got == tuple(word.split())
    assert equal_in_P(N, got, word.split()).equal


def test_tower_recurrence():
    for k in range(12):
        assert psi_tower(k + 1).form == predicted_form(psi_tower(k).form)


def test_pattern_text():
    assert psi_tower(3).pattern() == "y^1 x^4 s"
    with pytest.raises(ValueError):
        psi_tower(-1)


def test_psi_permutations():
    N = fixture("notregular_N")
    images = dict(zip(N.alphabet, level_permutation(N, "yxs")))
    # (a c e d)(b f)
    assert [images[x] for x in "acedbf"] == list("cedafb")


@pytest.mark.parametrize("k", range(9))
def test_membership_rule(k):
    n, m, last = psi_tower(k).form
    assert notregular_membership(k) == (last == "s" and m > 0)


@pytest.mark.parametrize("k", range(8))
def test_membership_against_orbit_walk(k):
    assert notregular_membership(k) == membership_by_orbit(k)[0]


def test_orbit_walk_cycle_lengths():
    # the ⟨ψ⟩-cycle through a^(k+1) has the length of the orbit of a under ψ_k
    assert membership_by_orbit(0) == (False, 4)


def test_aperiodic_prefix():
    seq = [notregular_membership(k) for k in range(41)]
    assert not any(has_period(seq, p) for p in range(1, 9))
    assert has_period([1, 0, 1, 0, 1], 2)


def test_interval_prediction_examples():
    assert [k for k in range(16) if interval_prediction(k)] == [0, 3, 4, 5, 10, 11, 12, 13, 14]
