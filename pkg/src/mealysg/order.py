"""Semi-decision procedures on top of the equality deciders.

Everything that could only be confirmed by an infinite search comes back
as ``Unknown`` (or ``ExceedsCap``) together with the evidence collected,
never as a negative verdict.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .automaton import MealyAutomaton, classify, dual, enriched
from .errors import ExceedsCap
from .monoid import ClassMonoid, RefinementTooDeep
from .orbits import DEFAULT_CAP, orbit_codes
from .words import Word
from .zs import equal_in_D, equal_in_Dprime, equal_in_P

RELATIONS = ("~A", "~D")


def _decider(relation: str):
    if relation == "~A":
        return equal_in_D
    if relation == "~D":
        return equal_in_Dprime
    raise ValueError(f"unknown relation {relation!r} (expected ~A or ~D)")


def _acting(m: MealyAutomaton) -> MealyAutomaton:
    return enriched(m) if classify(m).invertible else m


@dataclass(frozen=True)
class OrderVerdict:
    """``k``/``l`` are set iff ``u^k ~ u^l`` was found."""

    base: Word
    relation: str
    bound: int
    k: int | None = None
    l: int | None = None

    @property
    def finite(self) -> bool:
        return self.k is not None

    def record(self) -> str:
        if self.finite:
            return f"finite-order k={self.k} l={self.l} relation={self.relation}"
        return f"unknown bound={self.bound} relation={self.relation}"


def order_in_D(m: MealyAutomaton, u: Sequence[str], bound: int, relation: str = "~A") -> OrderVerdict:
    """First pair ``1 <= k < l <= bound`` (ordered by ``l``, then ``k``)
    with ``u^k ~ u^l``.  Invertible automata are replaced by their
    enrichment, which has the same dual semigroup."""
    decide = _decider(relation)
    u = tuple(u)
    if not u:
        raise ValueError("base word must be non-empty")
    acting = _acting(m)
    for l in range(2, bound + 1):
        for k in range(1, l):
            if decide(acting, u * k, u * l).equal:
                return OrderVerdict(u, relation, bound, k, l)
    return OrderVerdict(u, relation, bound)


def orbit_sizes(m: MealyAutomaton, u: Sequence[str], n_max: int, cap: int = DEFAULT_CAP) -> list[int]:
    """``|orbit(u^n)|`` for n = 1, 2, ... until ``n_max`` or the cap."""
    acting = _acting(m)
    sizes = []
    for n in range(1, n_max + 1):
        try:
            sizes.append(len(orbit_codes(acting, tuple(u) * n, cap=cap)))
        except ExceedsCap:
            break
    return sizes


def growing(sizes: Sequence[int], span: int = 3) -> bool:
    """Do the last ``span`` sizes strictly increase?"""
    tail = list(sizes[-span:])
    return len(tail) == span and all(a < b for a, b in zip(tail, tail[1:]))


@dataclass(frozen=True)
class OrbitVerdict:
    finite: bool
    orbit_size: int | None
    order: OrderVerdict
    sizes: tuple[int, ...]

    def record(self) -> str:
        if self.finite:
            return f"finite-orbit size={self.orbit_size} k={self.order.k} l={self.order.l}"
        return f"unknown bound={self.order.bound} sizes={','.join(map(str, self.sizes))}"


def periodic_orbit_verdict(m: MealyAutomaton, u: Sequence[str], bound: int,
                           cap: int = DEFAULT_CAP) -> OrbitVerdict:
    """Is the orbit of ``u^ω`` finite?  Yes (with its size) when ``u`` has
    finite order in D'_M; then the size is ``|orbit(u^l)|``, cross-checked
    on the next three powers."""
    if not classify(m).invertible:
        raise ValueError("periodic_orbit_verdict needs an invertible automaton")
    order = order_in_D(m, u, bound, "~D")
    if not order.finite:
        return OrbitVerdict(False, None, order, tuple(orbit_sizes(m, u, bound, cap)))
    acting = enriched(m)
    sizes = tuple(len(orbit_codes(acting, tuple(u) * n, cap=cap)) for n in range(1, order.l + 4))
    assert all(a <= b for a, b in zip(sizes, sizes[1:])), f"orbit sizes decrease: {sizes}"
    size = sizes[order.l - 1]
    assert all(s == size for s in sizes[order.l - 1:]), f"orbit sizes keep changing: {sizes}"
    return OrbitVerdict(True, size, order, sizes)


# -- semigroup closure ---------------------------------------------------------------

@dataclass(frozen=True)
class ClosureVerdict:
    """Outcome of a closure: ``finite`` (with shortlex-first
    representatives), ``exceeds-cap`` (more than ``cap`` distinct elements
    were exhibited) or ``unresolved`` (search budget spent first).
    ``distinct_found`` is always a proven lower bound on the order."""

    outcome: str
    distinct_found: int
    elements: tuple[Word, ...] = ()

    @property
    def finite(self) -> bool:
        return self.outcome == "finite"

    @property
    def exceeds_cap(self) -> bool:
        return self.outcome == "exceeds-cap"

    @property
    def order(self) -> int | None:
        return self.distinct_found if self.finite else None

    def record(self) -> str:
        if self.finite:
            return f"finite order={self.distinct_found}"
        return f"{self.outcome} distinct={self.distinct_found}"


def semigroup_closure(m: MealyAutomaton, cap: int = 10_000, max_word_len: int = 64,
                      max_depth: int = 256) -> ClosureVerdict:
    """Elements of P_M (the monoid, so the empty word counts), one word
    length at a time.  ``finite`` once a length adds no new class,
    ``exceeds-cap`` once more than ``cap`` classes are known.  The search
    gives up (``unresolved``) when representatives longer than
    ``max_word_len`` would be needed or when separating the candidates of
    one length takes more than ``max_depth`` refinement rounds."""
    mon = ClassMonoid(m)
    while True:
        if len(mon) > cap:
            return ClosureVerdict("exceeds-cap", len(mon))
        if mon.depth >= max_word_len:
            return ClosureVerdict("unresolved", len(mon))
        try:
            if mon.grow(limit=cap, max_depth=max_depth) == 0:
                return ClosureVerdict("finite", len(mon), tuple(mon.reps))
        except RefinementTooDeep:
            return ClosureVerdict("unresolved", len(mon))


def growth_series(m: MealyAutomaton, n_max: int, cap: int = 200_000) -> list[int]:
    """Ball sizes: number of P_M-classes of state words of length <= n."""
    mon = ClassMonoid(m)
    sizes = []
    for _ in range(n_max):
        mon.grow()
        sizes.append(len(mon))
        if len(mon) > cap:
            raise ExceedsCap(cap, partial=sizes, what="growth series")
    return sizes


# -- searches -----------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    witness: Word | None
    order: OrderVerdict | None = None
    sizes: tuple[int, ...] = ()
    max_len: int = 0

    def record(self) -> str:
        if self.witness is None:
            return f"none-found max-len={self.max_len}"
        return f"unknown-order witness={''.join(self.witness)} sizes={','.join(map(str, self.sizes))}"


def infinite_order_witness_search(m: MealyAutomaton, max_len: int, bound: int,
                                  cap: int = DEFAULT_CAP) -> WitnessReport:
    """First base word whose order stays unknown up to ``bound`` while its
    orbits keep growing.  A heuristic: unknown is not infinite."""
    if not classify(m).invertible:
        raise ValueError("infinite_order_witness_search needs an invertible automaton")
    for n in range(1, max_len + 1):
        for u in itertools.product(m.alphabet, repeat=n):
            verdict = order_in_D(m, u, bound)
            if verdict.finite:
                continue
            sizes = orbit_sizes(m, u, bound, cap)
            if growing(sizes):
                return WitnessReport(u, verdict, tuple(sizes), max_len)
    return WitnessReport(None, max_len=max_len)


@dataclass(frozen=True)
class RelationReport:
    """``w1``/``w2`` over the aliases ``a`` (for y) and ``b`` (for z)."""

    relation: str
    max_len: int
    w1: str | None = None
    w2: str | None = None

    @property
    def found(self) -> bool:
        return self.w1 is not None

    def record(self) -> str:
        if self.found:
            return f"relation {self.w1}={self.w2} relation={self.relation}"
        return f"none-up-to length={self.max_len} relation={self.relation}"


def substitute(w: str, y: Sequence[str], z: Sequence[str]) -> Word:
    out: list[str] = []
    for c in w:
        out.extend(y if c == "a" else z)
    return tuple(out)


def free_pair_relation_search(m: MealyAutomaton, y: Sequence[str], z: Sequence[str], max_len: int,
                              relation: str = "~A") -> RelationReport:
    """Look for distinct words W1 < W2 over {a, b} with ``W1(y,z) ~ W2(y,z)``.

    Candidates have equal length and equal letter counts (any relation
    yields one of that shape), enumerated by length and then
    lexicographically.  Not finding one proves nothing.
    """
    decide = _decider(relation)
    y, z = tuple(y), tuple(z)
    for n in range(2, max_len + 1):
        words = ["".join(p) for p in itertools.product("ab", repeat=n)]
        for i, w1 in enumerate(words):
            for w2 in words[i + 1:]:
                if w1.count("a") != w2.count("a"):
                    continue
                if decide(m, substitute(w1, y, z), substitute(w2, y, z)).equal:
                    return RelationReport(relation, max_len, w1, w2)
    return RelationReport(relation, max_len)


@dataclass(frozen=True)
class CrosscheckReport:
    P: ClosureVerdict
    D: ClosureVerdict
    consistent: bool
    cap: int

    @property
    def resolved(self) -> bool:
        return self.P.outcome != "unresolved" and self.D.outcome != "unresolved"

    def record(self) -> str:
        return f"P: {self.P.record()}; D: {self.D.record()}; consistent={'yes' if self.consistent else 'no'}"


def dual_finiteness_crosscheck(m: MealyAutomaton, cap: int = 10_000) -> CrosscheckReport:
    """P_M and D_M are finite together, so a finite side next to one with
    more than ``cap >= 10 x order`` elements flags a bug."""
    P = semigroup_closure(m, cap)
    D = semigroup_closure(dual(m), cap)
    consistent = True
    for a, b in ((P, D), (D, P)):
        if a.finite and b.exceeds_cap and cap >= 10 * a.order:
            consistent = False
    return CrosscheckReport(P, D, consistent, cap)


def all_small_automata(max_states: int = 2, max_letters: int = 2):
    """Every automaton with at most the given numbers of states and letters."""
    for nq in range(1, max_states + 1):
        for na in range(1, max_letters + 1):
            Q = [f"q{i}" for i in range(nq)]
            A = [str(i) for i in range(na)]
            keys = [(q, a) for q in Q for a in A]
            cells = list(itertools.product(A, Q))
            for choice in itertools.product(cells, repeat=len(keys)):
                yield MealyAutomaton(Q, A, dict(zip(keys, choice)))
