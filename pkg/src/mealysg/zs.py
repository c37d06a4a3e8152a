"""The action calculus of a Mealy automaton.

State words act on letter words on the left (``s·u``) and letter words act
on state words on the right (``s@u``).  In a state word ``q1 q2 ... qn`` the
*last* state acts first, which is what the relation ``qa = (q·a)(q@a)``
forces once words are concatenated left to right::

    act(st, u)      == act(s, act(t, u))
    residual(st, u) == residual(s, act(t, u)) + residual(t, u)

Quotients (the automaton semigroup P_M and the dual semigroups D_M, D'_M)
are never tabulated; elements are words and equality is decided by a
breadth-first closure over pairs of words, which is finite because the
actions preserve lengths.
"""
from __future__ import annotations

import functools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .automaton import MealyAutomaton, classify
from .errors import ExceedsCap
from .words import Mixed, Word

__all__ = [
    "act", "residual", "act_residual", "normal_form", "iota", "reverse_dual",
    "Verdict", "equal_in_P", "equal_in_D", "equal_in_Dprime",
    "EventuallyPeriodicWord", "act_eventually_periodic",
    "WreathElement", "NotClosed", "wreath_decomposition", "simplify_states", "ClassIndex",
]


def act_residual(m: MealyAutomaton, s: Sequence[str], u: Sequence[str]) -> tuple[Word, Word]:
    """Return ``(s·u, s@u)``."""
    states = list(s)
    out = []
    try:
        for a in u:
            for i in range(len(states) - 1, -1, -1):
                a, states[i] = m[(states[i], a)]
            out.append(a)
    except KeyError as exc:
        raise ValueError(f"symbol not in automaton: {exc.args[0]}") from None
    if not u:
        bad = [q for q in states if q not in m.states]
        if bad:
            raise ValueError(f"symbol not in automaton: {bad[0]}")
    return tuple(out), tuple(states)


def act(m: MealyAutomaton, s: Sequence[str], u: Sequence[str]) -> Word:
    return act_residual(m, s, u)[0]


def residual(m: MealyAutomaton, s: Sequence[str], u: Sequence[str]) -> Word:
    return act_residual(m, s, u)[1]


# -- mixed words -----------------------------------------------------------------

def iota(w: Mixed) -> int:
    """Number of (state, letter) pairs with the state to the left."""
    count = states_seen = 0
    for tag, _ in w:
        if tag == "q":
            states_seen += 1
        else:
            count += states_seen
    return count


def _rewrite_step(m: MealyAutomaton, w: list, pick: str) -> bool:
    positions = [i for i in range(len(w) - 1) if w[i][0] == "q" and w[i + 1][0] == "a"]
    if not positions:
        return False
    i = positions[0] if pick == "leftmost" else positions[-1]
    b, r = m[(w[i][1], w[i + 1][1])]
    w[i], w[i + 1] = ("a", b), ("q", r)
    return True


def normal_form(m: MealyAutomaton, w: Mixed, strategy: str = "fold") -> tuple[Word, Word]:
    """Unique factorisation ``w = u s`` with ``u`` a letter word and ``s`` a
    state word.  ``strategy`` selects the fold (default) or literal
    rewriting ``qa -> (q·a)(q@a)`` at the leftmost/rightmost redex."""
    if strategy == "fold":
        u: list[str] = []
        s: Word = ()
        for tag, x in w:
            if tag == "q":
                s = s + (x,)
            else:
                (b,), s = act_residual(m, s, (x,))
                u.append(b)
        return tuple(u), s
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    work = list(w)
    while _rewrite_step(m, work, strategy):
        pass
    k = sum(1 for tag, _ in work if tag == "a")
    return tuple(x for _, x in work[:k]), tuple(x for _, x in work[k:])


def reverse_dual(w: Mixed) -> Mixed:
    """Reverse the word and swap state/letter tags (reading over the dual)."""
    swap = {"q": "a", "a": "q"}
    return tuple((swap[tag], x) for tag, x in reversed(w))


# -- equality deciders -------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    equal: bool
    witness: Word | None = None
    pairs_explored: int = 0

    def __bool__(self) -> bool:
        return self.equal


def equal_in_P(m: MealyAutomaton, s: Sequence[str], t: Sequence[str]) -> Verdict:
    """Do ``s`` and ``t`` act identically on every letter word?

    A negative verdict carries the first (shortlex-by-exploration) letter
    word ``u`` with ``s·u != t·u``.
    """
    start = (tuple(s), tuple(t))
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        x, y = pair
        for a in m.alphabet:
            (bx,), rx = act_residual(m, x, (a,))
            (by,), ry = act_residual(m, y, (a,))
            if bx != by:
                path = [a]
                node = pair
                while parent[node] is not None:
                    node, letter = parent[node]
                    path.append(letter)
                return Verdict(False, tuple(reversed(path)), len(parent))
            nxt = (rx, ry)
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return Verdict(True, None, len(parent))


@functools.lru_cache(maxsize=1 << 16)
def _p_equal(m: MealyAutomaton, s: Word, t: Word) -> bool:
    if s == t:
        return True
    return equal_in_P(m, s, t).equal


def equal_in_D(m: MealyAutomaton, u: Sequence[str], v: Sequence[str]) -> Verdict:
    """Is ``s@u == s@v`` for every state word ``s``?  A negative verdict
    carries such an ``s`` (rightmost state acts first)."""
    start = (tuple(u), tuple(v))
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        x, y = pair
        for q in m.states:
            ox, (rx,) = act_residual(m, (q,), x)
            oy, (ry,) = act_residual(m, (q,), y)
            if rx != ry:
                return Verdict(False, _state_path(parent, pair, q), len(parent))
            nxt = (ox, oy)
            if nxt not in parent:
                parent[nxt] = (pair, q)
                queue.append(nxt)
    return Verdict(True, None, len(parent))


def _state_path(parent, node, last) -> Word:
    path = [last]
    while parent[node] is not None:
        node, q = parent[node]
        path.append(q)
    return tuple(path)


def equal_in_Dprime(m: MealyAutomaton, u: Sequence[str], v: Sequence[str],
                    class_cap: int = 10_000) -> Verdict:
    """Is ``s@u`` equal to ``s@v`` in P_M for every state word ``s``?

    Configurations are ``(s·u, s·v, [s@u])``.  Prolonging ``s`` by ``q`` on
    the left keeps the two residuals P_M-equal iff ``p = q@(s·u)`` and
    ``p' = q@(s·v)`` agree on the image of ``s@u``, i.e. iff
    ``p (s@u) ~ p' (s@u)``.  For invertible automata every image is the
    whole tree, the class component is dropped and the closure runs over
    ``A^|u| x A^|v|``.  Otherwise P_M-classes of residuals are tracked
    (``ExceedsCap`` if more than ``class_cap`` of them appear).
    """
    u, v = tuple(u), tuple(v)
    track = not classify(m).invertible
    if track and equal_in_D(m, u, v).equal:
        # equal residuals are equal in P_M; saves the class tracking,
        # which need not terminate when P_M is infinite
        return Verdict(True, None, 0)
    index = ClassIndex(m) if track else None
    start = (u, v, index.find_or_add(())[0] if track else 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        x, y, rep_id = node
        rep = index.reps[rep_id] if track else ()
        for q in m.states:
            ox, (p,) = act_residual(m, (q,), x)
            oy, (p2,) = act_residual(m, (q,), y)
            if not _p_equal(m, (p,) + rep, (p2,) + rep):
                return Verdict(False, _state_path(parent, node, q), len(parent))
            if track:
                new_id, _ = index.find_or_add((p,) + rep)
                if len(index.reps) > class_cap:
                    raise ExceedsCap(class_cap, what="P_M classes of residuals")
            else:
                new_id = 0
            nxt = (ox, oy, new_id)
            if nxt not in parent:
                parent[nxt] = (node, q)
                queue.append(nxt)
    return Verdict(True, None, len(parent))


class ClassIndex:
    """Registry of pairwise P_M-distinct state words.

    Candidates are bucketed by their action on one tree level and compared
    exactly with :func:`equal_in_P` inside a bucket.
    """

    def __init__(self, m: MealyAutomaton, max_points: int = 4096):
        from .levels import LevelAction, deepest_level

        self.m = m
        self.levels = LevelAction(m, deepest_level(m, max_points))
        self.reps: list[Word] = []
        self._buckets: dict[bytes, list[int]] = {}
        self._by_word: dict[Word, int] = {}

    def signature(self, word: Word) -> bytes:
        return self.levels.of(word).tobytes()

    def find(self, word: Sequence[str]) -> int | None:
        word = tuple(word)
        hit = self._by_word.get(word)
        if hit is not None:
            return hit
        for i in self._buckets.get(self.signature(word), ()):
            if _p_equal(self.m, self.reps[i], word):
                self._by_word[word] = i
                return i
        return None

    def find_or_add(self, word: Sequence[str]) -> tuple[int, bool]:
        word = tuple(word)
        hit = self.find(word)
        if hit is not None:
            return hit, False
        i = len(self.reps)
        self.reps.append(word)
        self._buckets.setdefault(self.signature(word), []).append(i)
        self._by_word[word] = i
        return i, True

    def __len__(self) -> int:
        return len(self.reps)


# -- infinite sequences ------------------------------------------------------------

@dataclass(frozen=True)
class EventuallyPeriodicWord:
    """The sequence ``preperiod · period^ω``, kept normalised: shortest
    period first, then shortest preperiod."""

    preperiod: Word
    period: Word

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be non-empty")
        pre, per = _normalize(tuple(self.preperiod), tuple(self.period))
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def prefix(self, n: int) -> Word:
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.period)
        return tuple(out[:n])


def _primitive_root(w: Word) -> Word:
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w


def _normalize(pre: Word, per: Word) -> tuple[Word, Word]:
    per = _primitive_root(per)
    while pre and pre[-1] == per[-1]:
        pre, per = pre[:-1], per[-1:] + per[:-1]
    return pre, per


def act_eventually_periodic(m: MealyAutomaton, s: Sequence[str],
                            w: EventuallyPeriodicWord) -> EventuallyPeriodicWord:
    """Image of ``preperiod·period^ω`` under ``s``.  Residuals after
    whole periods live in the finite set Q^|s|, so they repeat."""
    s = tuple(s)
    out, r = act_residual(m, s, w.preperiod)
    head = list(out)
    seen = {r: 0}
    chunks = []
    k = 0
    while True:
        o, r = act_residual(m, r, w.period)
        chunks.append(o)
        k += 1
        if r in seen:
            k1 = seen[r]
            break
        seen[r] = k
    pre = tuple(head) + tuple(x for c in chunks[:k1] for x in c)
    per = tuple(x for c in chunks[k1:] for x in c)
    return EventuallyPeriodicWord(pre, per)


# -- wreath recursion -----------------------------------------------------------------

class NotClosed(ValueError):
    def __init__(self, word, state):
        self.word, self.state = word, state
        super().__init__(f"set is not closed: {state}·{word} leaves it")


@dataclass(frozen=True)
class WreathElement:
    """Pair (transformation of X, section map X -> state words).

    Product: ``(p1, f1)(p2, f2) = (p1∘p2, x ↦ f1(p2(x)) f2(x))``.
    """

    transform: dict = field(hash=False)
    sections: dict = field(hash=False)

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        transform = {x: self.transform[other.transform[x]] for x in other.transform}
        sections = {x: self.sections[other.transform[x]] + other.sections[x] for x in other.transform}
        return WreathElement(transform, sections)


def wreath_decomposition(m: MealyAutomaton, s: Sequence[str], X: Iterable[Sequence[str]]) -> WreathElement:
    X = [tuple(x) for x in X]
    xs = set(X)
    for x in X:
        for q in m.states:
            if act(m, (q,), x) not in xs:
                raise NotClosed(x, q)
    transform, sections = {}, {}
    for x in X:
        transform[x], sections[x] = act_residual(m, s, x)
    return WreathElement(transform, sections)


# -- simplification -------------------------------------------------------------------

def trivial_states(m: MealyAutomaton) -> frozenset[str]:
    return frozenset(q for q in m.states if equal_in_P(m, (q,), ()).equal)


def simplify_states(m: MealyAutomaton, s: Sequence[str]) -> Word:
    """Drop every state that acts as the identity."""
    trivial = trivial_states(m)
    return tuple(q for q in s if q not in trivial)


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out
