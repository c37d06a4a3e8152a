"""Computations for the non-regular orbit language of ``notregular_N``.

With ``ψ = yxs``, the words ``a^k b`` that start some ``ψ^j · a^ω`` are
read off the tower ``ψ_0 = ψ``, ``ψ_{k+1} = ψ_k^4 @ a`` (after dropping
the identity state): ``b`` follows ``a^k`` exactly when it lies in the
orbit of ``a`` under the letter permutation of ``ψ_k``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

from .automaton import MealyAutomaton
from .fixtures import notregular_N
from .orbits import level_permutation
from .zs import equal_in_P, residual, trivial_states

PSI = ("y", "x", "s")
MAX_WORD = 4096
CHECK_LEN = 10  # reordering x/y is re-verified exactly for words this short


class TowerGrowth(RuntimeError):
    pass


@dataclass(frozen=True)
class PsiTowerEntry:
    k: int
    word: tuple[str, ...]
    form: tuple[int, int, str] | None  # (n, m, last) for y^(2^n) x^(2^m) last

    def pattern(self) -> str:
        if self.form is None:
            return "".join(self.word)
        n, m, last = self.form
        return f"y^{2 ** n} x^{2 ** m} {last}"


def _log2(p: int) -> int | None:
    return p.bit_length() - 1 if p > 0 and p & (p - 1) == 0 else None


def _form(word) -> tuple[int, int, str] | None:
    if not word or word[-1] not in ("s", "t"):
        return None
    body = word[:-1]
    p = sum(1 for q in body if q == "y")
    q = sum(1 for q in body if q == "x")
    if p + q != len(body) or tuple(body) != ("y",) * p + ("x",) * q:
        return None
    n, m = _log2(p), _log2(q)
    if n is None or m is None:
        return None
    return n, m, word[-1]


def _reorder(word):
    """Move every y in front of every x in a word over {x, y} ending in
    s or t (x and y commute)."""
    if not word or word[-1] not in ("s", "t") or any(q not in ("x", "y") for q in word[:-1]):
        return word
    body = word[:-1]
    p = body.count("y")
    return ("y",) * p + ("x",) * (len(body) - p) + (word[-1],)


@functools.lru_cache(maxsize=None)
def _tower(N: MealyAutomaton, k: int) -> tuple[str, ...]:
    if k == 0:
        return PSI
    prev = _tower(N, k - 1)
    trivial = trivial_states(N)
    raw = residual(N, prev * 4, ("a",))
    stripped = tuple(q for q in raw if q not in trivial)
    word = _reorder(stripped)
    if word != stripped and len(word) <= CHECK_LEN:
        assert equal_in_P(N, word, stripped).equal, f"reordering changed the element at k={k}"
    if len(word) > MAX_WORD:
        raise TowerGrowth(f"tower word at k={k} has length {len(word)}")
    return word


def psi_tower(k: int, N: MealyAutomaton | None = None) -> PsiTowerEntry:
    if k < 0:
        raise ValueError("k must be non-negative")
    N = N or notregular_N()
    word = _tower(N, k)
    return PsiTowerEntry(k, word, _form(word))


def predicted_form(form: tuple[int, int, str]) -> tuple[int, int, str]:
    """One step of the recurrence on the exponents (n, m) of y^(2^n) x^(2^m)."""
    n, m, last = form
    if last == "s":
        return (n + 1, m - 1, "s") if m > 0 else (n + 1, 0, "t")
    return (n - 1, m + 1, "t") if n > 0 else (0, m + 1, "s")


def notregular_membership(k: int, N: MealyAutomaton | None = None) -> bool:
    """Is ``a^k b`` a prefix of some word in the ⟨ψ⟩-orbit of ``a^ω``?"""
    N = N or notregular_N()
    entry = psi_tower(k, N)
    images = dict(zip(N.alphabet, level_permutation(N, entry.word)))
    x, seen = "a", set()
    while x not in seen:
        seen.add(x)
        x = images[x]
    return "b" in seen


def membership_by_orbit(k: int, N: MealyAutomaton | None = None) -> tuple[bool, int]:
    """Brute force: walk the ⟨ψ⟩-cycle through ``a^(k+1)`` letter by letter.
    Returns (``a^k b`` met, cycle length)."""
    N = N or notregular_N()
    qi = {q: i for i, q in enumerate(N.states)}
    ai = {a: i for i, a in enumerate(N.alphabet)}
    out = [[ai[N.out(q, a)] for a in N.alphabet] for q in N.states]
    nxt = [[qi[N.next(q, a)] for a in N.alphabet] for q in N.states]
    trivial = {qi[q] for q in trivial_states(N)}
    order = [qi[q] for q in reversed(PSI)]  # rightmost state acts first
    start = [ai["a"]] * (k + 1)
    target = [ai["a"]] * k + [ai["b"]]
    w = list(start)
    found = False
    steps = 0
    while True:
        states = list(order)
        for j in range(k + 1):
            a = w[j]
            for i in range(3):
                q = states[i]
                a, states[i] = out[q][a], nxt[q][a]
            w[j] = a
            if states[0] in trivial and states[1] in trivial and states[2] in trivial:
                break
        steps += 1
        if w == target:
            found = True
        if w == start:
            return found, steps


def interval_prediction(k: int) -> bool:
    """``2N^2 + N <= k <= 2N^2 + 3N`` for some N >= 0."""
    N = 0
    while 2 * N * N + N <= k:
        if k <= 2 * N * N + 3 * N:
            return True
        N += 1
    return False


def has_period(seq, p: int, start: int = 0) -> bool:
    return all(seq[i] == seq[i + p] for i in range(start, len(seq) - p))
