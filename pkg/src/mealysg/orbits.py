"""Orbits of words and periodic sequences, and the orbit language.

The orbit language of a base word ``u`` is the set of finite prefixes of
the orbit of ``u^ω``.  Its words of length ``n`` are exactly the orbit of
``u^n``, so everything here is driven by one breadth-first orbit
computation per length.  Multi-letter bases are handled over the power
automaton, which turns ``u`` into a single letter.

Nothing in this module can certify the stabilisation level ``T``; DFAs
come with the depth to which they were checked against direct
enumeration.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .automaton import MealyAutomaton, NotInvertible, classify, enriched, power, power_letter
from .errors import ExceedsCap
from .words import Word

__all__ = [
    "orbit_words", "OrbitLanguage", "orbit_language", "DegreeProfile", "degree_profile",
    "NotStabilized", "stabilization_candidate", "DegreeMismatch", "OrbitGraph",
    "build_orbit_graph", "OrbitLanguageDfa", "orbit_language_dfa", "ValidatedDepth",
    "Counterexample", "validate_dfa", "synthesize_orbit_dfa", "Condensation", "condensation",
    "terminal_scc", "cycles_with_distinct_first_edges", "path_to_vertex",
    "NotBireversible", "level_permutation", "stabilizer_projection", "preperiodic_dfa",
]

DEFAULT_CAP = 200_000


def _actor(m: MealyAutomaton, gens: Sequence[Word]):
    """Function applying each generator to a word, specialised for
    single-state generators."""
    table = m._table
    gens = [tuple(g) for g in gens]

    def apply(g: Word, w: Word) -> Word:
        states = list(g)
        out = []
        for a in w:
            for i in range(len(states) - 1, -1, -1):
                a, states[i] = table[(states[i], a)]
            out.append(a)
        return tuple(out)

    def apply_one(q: str, w: Word) -> Word:
        out = []
        for a in w:
            a, q = table[(q, a)]
            out.append(a)
        return tuple(out)

    return [(lambda w, q=g[0]: apply_one(q, w)) if len(g) == 1 else
            (lambda w, g=g: apply(g, w)) for g in gens]


_BITMAP_LIMIT = 1 << 26


class _Tables:
    """Integer form of an automaton for batched action on digit arrays."""

    def __init__(self, m: MealyAutomaton):
        self.m = m
        self.qi = {q: i for i, q in enumerate(m.states)}
        self.ai = {a: i for i, a in enumerate(m.alphabet)}
        self.out = np.array([[self.ai[m.out(q, a)] for a in m.alphabet] for q in m.states], dtype=np.int32)
        self.nxt = np.array([[self.qi[m.next(q, a)] for a in m.alphabet] for q in m.states], dtype=np.int32)
        self.base = len(m.alphabet)
        self.out_rows = self.out.tolist()
        self.nxt_rows = self.nxt.tolist()
        ident = list(range(self.base))
        self.trivial = frozenset(i for i in range(len(m.states))
                                 if self.out_rows[i] == ident and set(self.nxt_rows[i]) == {i})

    def apply_one(self, g: Sequence[int], code: int, n: int) -> int:
        """Scalar version of :meth:`apply` on a single code; stops as soon
        as every state is the trivial identity state."""
        digits = []
        c = code
        for _ in range(n):
            c, r = divmod(c, self.base)
            digits.append(r)
        digits.reverse()
        states = list(g)
        out_rows, nxt_rows, trivial = self.out_rows, self.nxt_rows, self.trivial
        for j in range(n):
            if all(q in trivial for q in states):
                break
            a = digits[j]
            for i in range(len(states) - 1, -1, -1):
                q = states[i]
                a, states[i] = out_rows[q][a], nxt_rows[q][a]
            digits[j] = a
        c = 0
        for a in digits:
            c = c * self.base + a
        return c

    def apply(self, g: Sequence[int], digits: np.ndarray) -> np.ndarray:
        d = digits.copy()
        for q in reversed(g):
            st = np.full(len(d), q, dtype=np.int32)
            for j in range(d.shape[1]):
                col = d[:, j].copy()
                d[:, j] = self.out[st, col]
                st = self.nxt[st, col]
        return d

    def encode(self, digits: np.ndarray) -> np.ndarray:
        codes = np.zeros(len(digits), dtype=np.int64)
        for j in range(digits.shape[1]):
            codes = codes * self.base + digits[:, j]
        return codes

    def decode(self, codes: np.ndarray, n: int) -> np.ndarray:
        d = np.zeros((len(codes), n), dtype=np.int32)
        c = codes.copy()
        for j in range(n - 1, -1, -1):
            c, d[:, j] = np.divmod(c, self.base)
        return d


def orbit_codes(m: MealyAutomaton, u: Sequence[str], gens: Sequence[Sequence[str]] | None = None,
                cap: int = DEFAULT_CAP, tables: _Tables | None = None) -> np.ndarray:
    """Sorted codes (base-|A| integers, first letter most significant) of
    the orbit of ``u``; breadth-first over whole frontiers at once."""
    if cap < 1:
        raise ValueError("cap must be positive")
    t = tables or _Tables(m)
    gens = [(q,) for q in m.states] if gens is None else [tuple(g) for g in gens]
    try:
        gidx = [[t.qi[q] for q in g] for g in gens]
    except KeyError as exc:
        raise ValueError(f"unknown state {exc.args[0]!r} in generator") from None
    try:
        start = np.array([[t.ai[a] for a in u]], dtype=np.int32).reshape(1, len(u))
    except KeyError as exc:
        raise ValueError(f"unknown letter {exc.args[0]!r}") from None
    n = len(u)
    if t.base ** n >= 2**62:
        raise ValueError("word too long for integer coding")
    space = t.base ** n
    bitmap = np.zeros(space, dtype=bool) if space <= _BITMAP_LIMIT else None
    pyseen: set[int] = set()
    found = [t.encode(start)]
    count = 1
    if bitmap is not None:
        bitmap[found[0]] = True
    if bitmap is None:
        pyseen.update(found[0].tolist())
    frontier = found[0]
    small: list[int] = []
    while len(frontier):
        if len(frontier) < 32:
            # thin frontiers (e.g. a single cyclic generator): stay scalar
            seen = pyseen if bitmap is None else None
            queue = deque(frontier.tolist())
            while queue and len(queue) < 256:
                c = queue.popleft()
                for g in gidx:
                    x = t.apply_one(g, c, n)
                    fresh = (x not in seen) if seen is not None else not bitmap[x]
                    if fresh:
                        if seen is not None:
                            seen.add(x)
                        else:
                            bitmap[x] = True
                        small.append(x)
                        queue.append(x)
                        count += 1
                        if count > cap:
                            found.append(np.array(small, dtype=np.int64))
                            raise ExceedsCap(cap, partial=_decode_words(t, np.concatenate(found), n),
                                             what="orbit")
            found.append(np.array(small, dtype=np.int64))
            small = []
            frontier = np.array(list(queue), dtype=np.int64)
            continue
        digits = t.decode(frontier, n)
        images = np.unique(np.concatenate([t.encode(t.apply(g, digits)) for g in gidx]))
        if bitmap is not None:
            new = images[~bitmap[images]]
            bitmap[new] = True
        else:
            new = np.array([c for c in images.tolist() if c not in pyseen], dtype=np.int64)
            pyseen.update(new.tolist())
        count += len(new)
        found.append(new)
        if count > cap:
            raise ExceedsCap(cap, partial=_decode_words(t, np.concatenate(found), n), what="orbit")
        frontier = new
    return np.sort(np.concatenate(found))


def _decode_words(t: _Tables, codes: np.ndarray, n: int) -> set[Word]:
    letters = t.m.alphabet
    return {tuple(letters[i] for i in row) for row in t.decode(codes, n).tolist()}


def orbit_words(m: MealyAutomaton, u: Sequence[str], gens: Sequence[Sequence[str]] | None = None,
                cap: int = DEFAULT_CAP) -> set[Word]:
    """Closure of ``{u}`` under the generators (default: the states)."""
    t = _Tables(m)
    return _decode_words(t, orbit_codes(m, u, gens, cap, t), len(u))


class OrbitLanguage:
    """Level sets of the orbit language of ``letter^ω`` over ``m``.

    ``m`` is the automaton that acts (already enriched and/or powered),
    ``letter`` a single letter of it.  Levels are memoised as sorted
    integer codes.
    """

    def __init__(self, m: MealyAutomaton, letter: str, gens: Sequence[Sequence[str]] | None = None,
                 cap: int = DEFAULT_CAP, theoretical: bool = True):
        if letter not in m.alphabet:
            raise ValueError(f"unknown letter {letter!r}")
        self.m = m
        self.letter = letter
        self.gens = [(q,) for q in m.states] if gens is None else [tuple(g) for g in gens]
        self.cap = cap
        self.theoretical = theoretical
        self.tables = _Tables(m)
        self._codes: dict[int, np.ndarray] = {0: np.zeros(1, dtype=np.int64)}

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.m.alphabet

    def codes(self, n: int) -> np.ndarray:
        if n not in self._codes:
            self._codes[n] = orbit_codes(self.m, (self.letter,) * n, self.gens, self.cap, self.tables)
        return self._codes[n]

    def size(self, n: int) -> int:
        return len(self.codes(n))

    def level(self, n: int) -> frozenset[Word]:
        return frozenset(_decode_words(self.tables, self.codes(n), n))

    def sorted_level(self, n: int) -> list[Word]:
        letters = self.alphabet
        return [tuple(letters[i] for i in row) for row in self.tables.decode(self.codes(n), n).tolist()]

    def code(self, w: Sequence[str]) -> int:
        c = 0
        for a in w:
            c = c * self.tables.base + self.tables.ai[a]
        return c

    def __contains__(self, w) -> bool:
        codes = self.codes(len(w))
        c = self.code(w)
        i = np.searchsorted(codes, c)
        return bool(i < len(codes) and codes[i] == c)

    def degree(self, w: Sequence[str]) -> int:
        nxt = self.codes(len(w) + 1)
        lo = self.code(w) * self.tables.base
        return int(np.searchsorted(nxt, lo + self.tables.base) - np.searchsorted(nxt, lo))

    def degrees(self, n: int) -> np.ndarray:
        """Degree of every level-n word, aligned with ``codes(n)``."""
        parents = self.codes(n + 1) // self.tables.base
        return np.searchsorted(parents, self.codes(n), side="right") - np.searchsorted(parents, self.codes(n))


def orbit_language(m: MealyAutomaton, u: Sequence[str], gens=None, cap: int = DEFAULT_CAP,
                   use_enriched: bool = True) -> OrbitLanguage:
    """Orbit language of ``u^ω``: over ``power(m, |u|)`` and, for invertible
    ``m``, over the enriched automaton.  Custom generators are allowed
    but the result is flagged non-theoretical (their orbits need not be
    closed under taking suffixes)."""
    u = tuple(u)
    if not u:
        raise ValueError("base word must be non-empty")
    invertible = classify(m).invertible
    # degree monotonicity needs a self-similar group: all states and inverses
    theoretical = invertible and gens is None and use_enriched
    actor = m
    if invertible and use_enriched:
        actor = enriched(m)
        if gens is None:
            gens = [(q,) for q in actor.states]
    if len(u) > 1:
        actor = power(actor, len(u))
    letter = power_letter(m, u)
    return OrbitLanguage(actor, letter, gens, cap, theoretical)


# -- degrees -----------------------------------------------------------------------

@dataclass
class DegreeProfile:
    base: Word
    degrees: list[int]
    k_max: int
    plateau: tuple[int, int] | None = None
    truncated: bool = False
    theoretical: bool = True

    def __str__(self) -> str:
        plateau = f"T={self.plateau[0]} d={self.plateau[1]}" if self.plateau else "none"
        flags = (" truncated" if self.truncated else "") + ("" if self.theoretical else " non-theoretical")
        return f"degrees {' '.join(map(str, self.degrees))} plateau {plateau}{flags}"


class NotStabilized(Exception):
    pass


def stabilization_candidate(profile, window: int = 3) -> tuple[int, int]:
    """Start (1-based) and value of the final plateau if it spans at least
    ``window`` entries.  A heuristic estimate of the stabilisation level,
    not a proof."""
    degrees = list(profile.degrees if isinstance(profile, DegreeProfile) else profile)
    if not degrees:
        raise NotStabilized("empty profile")
    start = len(degrees) - 1
    while start > 0 and degrees[start - 1] == degrees[-1]:
        start -= 1
    if len(degrees) - start < window:
        raise NotStabilized(f"final plateau has length {len(degrees) - start} < {window}")
    return start + 1, degrees[-1]


def degree_profile(m: MealyAutomaton, u: Sequence[str], k_max: int, gens=None,
                   cap: int = DEFAULT_CAP, window: int = 3,
                   language: OrbitLanguage | None = None) -> DegreeProfile:
    """``d_k = Deg(u^k)`` for ``k = 1..k_max``."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    lang = language or orbit_language(m, u, gens, cap)
    degrees = []
    truncated = False
    for k in range(1, k_max + 1):
        try:
            degrees.append(lang.degree((lang.letter,) * k))
        except ExceedsCap:
            truncated = True
            break
    if lang.theoretical:
        assert all(x >= y for x, y in zip(degrees, degrees[1:])), f"degrees increase: {degrees}"
    try:
        plateau = stabilization_candidate(degrees, window)
    except NotStabilized:
        plateau = None
    return DegreeProfile(tuple(u), degrees, k_max, plateau, truncated, lang.theoretical)


# -- the graph Γ -------------------------------------------------------------------

class DegreeMismatch(Exception):
    def __init__(self, T: int, degrees: dict):
        self.T, self.degrees = T, degrees
        super().__init__(f"level-{T} vertices have different out-degrees {sorted(set(degrees.values()))}")


@dataclass
class OrbitGraph:
    """Vertices are orbit-language words of length <= T (index = position
    in ``vertices``, shortlex order).  Edges ``(src, letter, dst)``."""

    language: OrbitLanguage
    T: int
    vertices: list[Word]
    edges: list[tuple[int, str, int]]
    d: int
    index: dict[Word, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.vertices)}
        self.out: dict[int, list[tuple[str, int]]] = {i: [] for i in range(len(self.vertices))}
        for s, a, t in self.edges:
            self.out[s].append((a, t))

    def level(self, n: int) -> list[int]:
        return [i for i, w in enumerate(self.vertices) if len(w) == n]

    def top_edges(self) -> list[tuple[int, str, int]]:
        return [e for e in self.edges if len(self.vertices[e[0]]) == self.T]

    def to_dot(self) -> str:
        fmt = lambda w: "".join(w) if all(len(a) == 1 for a in self.language.alphabet) else ".".join(w)
        lines = ["digraph orbit_graph {", "  rankdir=LR;"]
        for i, w in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{fmt(w) or "ε"}"];')
        for s, a, t in self.edges:
            lines.append(f'  v{s} -> v{t} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_orbit_graph(m: MealyAutomaton | None, u: Sequence[str] | None, T: int,
                      cap: int = DEFAULT_CAP, gens=None, d: int | None = None,
                      language: OrbitLanguage | None = None) -> OrbitGraph:
    if T < 1:
        raise ValueError("T must be at least 1")
    lang = language or orbit_language(m, u, gens, cap)
    if lang.theoretical is False:
        raise NotInvertible("the orbit graph needs the group of an invertible automaton")
    vertices: list[Word] = []
    for n in range(T + 1):
        vertices.extend(lang.sorted_level(n))
    index = {w: i for i, w in enumerate(vertices)}
    edges = []
    top = set(lang.codes(T + 1).tolist())
    base = lang.tables.base
    degrees = {}
    for i, w in enumerate(vertices):
        if len(w) < T:
            for a in lang.alphabet:
                j = index.get(w + (a,))
                if j is not None:
                    edges.append((i, a, j))
        else:
            count = 0
            c = lang.code(w) * base
            for k, a in enumerate(lang.alphabet):
                if c + k in top:
                    edges.append((i, a, index[w[1:] + (a,)]))
                    count += 1
            degrees[w] = count
    values = set(degrees.values())
    if len(values) != 1:
        raise DegreeMismatch(T, degrees)
    (deg,) = values
    if d is not None and d != deg:
        raise DegreeMismatch(T, {**degrees, "expected": d})
    assert len([w for w in vertices if not w]) == 1
    return OrbitGraph(lang, T, vertices, edges, deg)


# -- DFA ---------------------------------------------------------------------------

@dataclass
class OrbitLanguageDfa:
    """Deterministic acceptor; every state accepts, missing edges reject."""

    alphabet: tuple[str, ...]
    n_states: int
    start: int
    transitions: dict[tuple[int, str], int]
    validated_depth: int | None = None
    labels: list[str] | None = None

    def run(self, word: Iterable[str]) -> int | None:
        s = self.start
        for a in word:
            s = self.transitions.get((s, a))
            if s is None:
                return None
        return s

    def accepts(self, word: Iterable[str]) -> bool:
        return self.run(word) is not None

    def count_level(self, n: int) -> int:
        counts = {self.start: 1}
        for _ in range(n):
            nxt: dict[int, int] = {}
            for s, c in counts.items():
                for a in self.alphabet:
                    t = self.transitions.get((s, a))
                    if t is not None:
                        nxt[t] = nxt.get(t, 0) + c
            counts = nxt
        return sum(counts.values())

    def words(self, n: int) -> list[Word]:
        layer = [((), self.start)]
        for _ in range(n):
            layer = [(w + (a,), self.transitions[(s, a)]) for w, s in layer
                     for a in self.alphabet if (s, a) in self.transitions]
        return [w for w, _ in layer]

    def level_codes(self, n: int) -> np.ndarray:
        """Sorted codes of the accepted words of length n (same coding as
        :class:`OrbitLanguage`)."""
        k = len(self.alphabet)
        table = np.full((self.n_states, k), -1, dtype=np.int64)
        rank = {a: i for i, a in enumerate(self.alphabet)}
        for (s, a), t in self.transitions.items():
            table[s, rank[a]] = t
        states = np.array([self.start], dtype=np.int64)
        codes = np.zeros(1, dtype=np.int64)
        for _ in range(n):
            nxt = table[states]  # (words, letters)
            ok = nxt >= 0
            rows, cols = np.nonzero(ok)
            states = nxt[rows, cols]
            codes = codes[rows] * k + cols
        return np.sort(codes)

    def export(self) -> str:
        lines = [f"start {self.start}"]
        lines += [f"state {s}" for s in range(self.n_states)]
        for s in range(self.n_states):
            for a in self.alphabet:
                t = self.transitions.get((s, a))
                if t is not None:
                    lines.append(f"edge {s} {a} {t}")
        return "\n".join(lines) + "\n"

    def to_dot(self) -> str:
        lines = ["digraph dfa {", "  rankdir=LR;", "  node [shape=doublecircle];",
                 f"  init [shape=point]; init -> {self.start};"]
        for s in range(self.n_states):
            label = self.labels[s] if self.labels else str(s)
            lines.append(f'  {s} [label="{label}"];')
        for s in range(self.n_states):
            for a in self.alphabet:
                t = self.transitions.get((s, a))
                if t is not None:
                    lines.append(f'  {s} -> {t} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def orbit_language_dfa(g: OrbitGraph) -> OrbitLanguageDfa:
    transitions = {(s, a): t for s, a, t in g.edges}
    labels = ["".join(w) or "ε" for w in g.vertices]
    return OrbitLanguageDfa(g.language.alphabet, len(g.vertices), g.index[()], transitions, None, labels)


@dataclass(frozen=True)
class ValidatedDepth:
    depth: int


@dataclass(frozen=True)
class Counterexample:
    word: Word
    in_language: bool  # True: missed by the DFA; False: accepted but not in the language


def _level_sets_agree(dfa: OrbitLanguageDfa, n: int, expected: np.ndarray) -> Counterexample | None:
    got = dfa.level_codes(n)
    if np.array_equal(got, expected):
        return None
    missed = np.setdiff1d(expected, got)
    extra = np.setdiff1d(got, expected)
    first, in_language = (missed[0], True) if len(missed) and (not len(extra) or missed[0] < extra[0]) \
        else (extra[0], False)
    word = []
    k = len(dfa.alphabet)
    c = int(first)
    for _ in range(n):
        c, r = divmod(c, k)
        word.append(dfa.alphabet[r])
    return Counterexample(tuple(reversed(word)), in_language)


def validate_dfa(language: OrbitLanguage, dfa: OrbitLanguageDfa, depth: int):
    """Compare the accepted words of each length with the orbit of the
    base letter's power, exactly, up to ``depth``."""
    for n in range(depth + 1):
        bad = _level_sets_agree(dfa, n, language.codes(n))
        if bad is not None:
            return bad
    dfa.validated_depth = depth
    return ValidatedDepth(depth)


@dataclass
class Synthesis:
    dfa: OrbitLanguageDfa
    graph: OrbitGraph
    T: int
    profile: DegreeProfile
    history: list[str]


def synthesize_orbit_dfa(m: MealyAutomaton, u: Sequence[str], k_max: int = 8, extra: int = 5,
                         window: int = 3, cap: int = DEFAULT_CAP, max_T: int = 12, gens=None,
                         language: OrbitLanguage | None = None) -> Synthesis:
    """Guess T from the degree plateau, build Γ, validate to T+extra and
    raise T on a degree mismatch or a counterexample."""
    lang = language or orbit_language(m, u, gens, cap)
    profile = degree_profile(m, u if u is not None else (lang.letter,), k_max, window=window,
                             language=lang)
    T = profile.plateau[0] if profile.plateau else 1
    history = []
    while T <= max_T:
        try:
            graph = build_orbit_graph(None, None, T, language=lang)
        except DegreeMismatch as exc:
            history.append(f"T={T}: {exc}")
            T += 1
            continue
        dfa = orbit_language_dfa(graph)
        result = validate_dfa(lang, dfa, T + extra)
        if isinstance(result, ValidatedDepth):
            history.append(f"T={T}: validated to depth {result.depth}")
            return Synthesis(dfa, graph, T, profile, history)
        history.append(f"T={T}: counterexample {''.join(result.word)}")
        T += 1
    raise NotStabilized(f"no validated DFA with T <= {max_T}: " + "; ".join(history))


# -- strongly connected components --------------------------------------------------

@dataclass
class Condensation:
    components: list[list[int]]
    component_of: dict[int, int]
    dag: set[tuple[int, int]]

    def terminal(self) -> list[int]:
        sources = {a for a, _ in self.dag}
        return [i for i in range(len(self.components)) if i not in sources]


def _tarjan(nodes: list[int], succ: dict[int, list[int]]) -> list[list[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    out = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(sorted(comp))
    return out


def condensation(g: OrbitGraph) -> Condensation:
    """SCCs of the level-T layer (level-T vertices and overlap edges),
    ordered by smallest vertex."""
    nodes = g.level(g.T)
    succ = {v: [t for _, t in g.out[v]] for v in nodes}
    comps = sorted(_tarjan(nodes, succ))
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    dag = {(comp_of[v], comp_of[t]) for v in nodes for t in succ[v] if comp_of[v] != comp_of[t]}
    return Condensation(comps, comp_of, dag)


def terminal_scc(g: OrbitGraph) -> list[int]:
    cond = condensation(g)
    R = cond.components[cond.terminal()[0]]
    members = set(R)
    for v in R:
        assert len(g.vertices[v]) == g.T
        assert all(t in members for _, t in g.out[v]), "terminal component leaks"
    return R


def _vertex_id(g: OrbitGraph, V) -> int:
    return V if isinstance(V, int) else g.index[tuple(V)]


def cycles_with_distinct_first_edges(g: OrbitGraph, V, d: int | None = None) -> list[Word]:
    """One cycle at ``V`` per out-edge (shortest way back inside the
    terminal component), each repeated up to the lcm of their lengths."""
    v = _vertex_id(g, V)
    R = set(terminal_scc(g))
    if v not in R:
        raise ValueError("vertex is not in the terminal component")
    outs = g.out[v]
    if d is not None and d != len(outs):
        raise ValueError(f"vertex has out-degree {len(outs)}, not {d}")
    raw = []
    for a, t in outs:
        back = _shortest_path(g, t, v, R)
        raw.append((a,) + back)
    L = math.lcm(*(len(c) for c in raw))
    cycles = [c * (L // len(c)) for c in raw]
    assert len({c[0] for c in cycles}) == len(cycles)
    return cycles


def _shortest_path(g: OrbitGraph, src: int, dst: int, allowed: set[int]) -> Word:
    if src == dst:
        return ()
    parent = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for a, y in g.out[x]:
            if y in allowed and y not in parent:
                parent[y] = (x, a)
                if y == dst:
                    path = []
                    node = y
                    while parent[node] is not None:
                        node, letter = parent[node]
                        path.append(letter)
                    return tuple(reversed(path))
                queue.append(y)
    raise ValueError("no path inside the component")


def path_to_vertex(g: OrbitGraph, V, length: int) -> Word:
    """A language word of the given length whose path from the root ends
    at ``V``: the word of a level-T vertex followed by a walk inside the
    terminal component."""
    v = _vertex_id(g, V)
    if length < g.T:
        raise ValueError("length must be at least T")
    R = set(terminal_scc(g))
    if v not in R:
        raise ValueError("vertex is not in the terminal component")
    preds: dict[int, list[tuple[int, str]]] = {x: [] for x in R}
    for s, a, t in g.top_edges():
        if s in R and t in R:
            preds[t].append((s, a))
    letters = []
    node = v
    for _ in range(length - g.T):
        node, a = min(preds[node])
        letters.append(a)
    return g.vertices[node] + tuple(reversed(letters))


# -- pre-periodic sequences over bireversible automata -------------------------------

class NotBireversible(ValueError):
    pass


def level_permutation(m: MealyAutomaton, s: Sequence[str]) -> tuple[str, ...]:
    """Action of the state word on the letters, as images in alphabet order."""
    from .zs import act

    return tuple(act(m, s, (a,))[0] for a in m.alphabet)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """p∘q (apply q first)."""
    return tuple(p[i] for i in q)


def _inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _generate(gens: Iterable[tuple[int, ...]], n: int) -> frozenset:
    identity = tuple(range(n))
    group = {identity}
    frontier = [identity]
    gens = list(set(gens))
    while frontier:
        new = []
        for g in frontier:
            for s in gens:
                h = _compose(s, g)
                if h not in group:
                    group.add(h)
                    new.append(h)
        frontier = new
    return frozenset(group)


def stabilizer_projection(m: MealyAutomaton, point: Sequence[str], cap: int = DEFAULT_CAP) -> frozenset:
    """Image in Sym(A) of the stabiliser of ``point`` under the group
    generated by the (invertible) states, via Schreier generators."""
    rank = {a: i for i, a in enumerate(m.alphabet)}
    perm = {q: tuple(rank[m.out(q, a)] for a in m.alphabet) for q in m.states}
    fns = dict(zip(m.states, _actor(m, [(q,) for q in m.states])))
    start = tuple(point)
    coset = {start: tuple(range(len(m.alphabet)))}
    queue = deque([start])
    schreier = set()
    while queue:
        w = queue.popleft()
        tw = coset[w]
        for q in m.states:
            x = fns[q](w)
            sq = _compose(perm[q], tw)
            if x not in coset:
                coset[x] = sq
                if len(coset) > cap:
                    raise ExceedsCap(cap, what="stabiliser orbit")
                queue.append(x)
            else:
                schreier.add(_compose(_inverse(coset[x]), sq))
    return _generate(schreier, len(m.alphabet))


@dataclass
class PreperiodicDfa:
    dfa: OrbitLanguageDfa
    n0: int
    block: int
    projections: list[int]


def _expand_blocks(block_dfa: OrbitLanguageDfa, alphabet: tuple[str, ...], B: int,
                   split) -> OrbitLanguageDfa:
    """Replace each block-labelled edge by a chain of single letters,
    sharing prefixes so the result stays deterministic."""
    if B == 1:
        return OrbitLanguageDfa(alphabet, block_dfa.n_states, block_dfa.start,
                                {(s, split(a)[0]): t for (s, a), t in block_dfa.transitions.items()})
    n = block_dfa.n_states
    transitions = {}
    for s in range(block_dfa.n_states):
        trie: dict[Word, int] = {(): s}
        for a in block_dfa.alphabet:
            t = block_dfa.transitions.get((s, a))
            if t is None:
                continue
            letters = split(a)
            for i in range(1, B):
                prefix = letters[:i]
                if prefix not in trie:
                    trie[prefix] = n
                    n += 1
                    transitions[(trie[prefix[:-1]], prefix[-1])] = trie[prefix]
            transitions[(trie[letters[:-1]], letters[-1])] = t
    return OrbitLanguageDfa(alphabet, n, block_dfa.start, transitions)


def preperiodic_dfa(m: MealyAutomaton, u: Sequence[str], v: Sequence[str], window: int = 3,
                    depth: int = 12, cap: int = DEFAULT_CAP, max_n: int = 32) -> PreperiodicDfa:
    """DFA for the prefixes of the orbit of ``u v^ω`` (bireversible ``m``).

    Both words are first turned into single letters of a power automaton.
    ``n0`` is where the images in Sym(A) of the stabilisers of ``v^n``
    stop shrinking (confirmed over ``window`` further levels).  From then
    on ``a w`` is in the language iff ``w`` is in the language of ``v^ω``
    and ``a w`` starts with a prefix of the orbit of ``u v^n0``; the DFA
    is a trie for the latter that continues into the DFA for the former.
    The result is checked against direct enumeration up to ``depth``.
    """
    if not classify(m).bireversible:
        raise NotBireversible(f"{m.name or 'automaton'} is not bireversible")
    u, v = tuple(u), tuple(v)
    if not v:
        raise ValueError("period must be non-empty")
    B = len(v) * max(1, -(-len(u) // len(v)))
    seq = lambda n: tuple(itertools.islice(itertools.chain(u, itertools.cycle(v)), n))
    U = seq(B)
    V = seq(2 * B)[B:]
    mb = power(m, B)
    sep = "" if all(len(a) == 1 for a in m.alphabet) else "."
    split = (lambda s: tuple(s.split(".")) if sep else tuple(s))
    U_letter, V_letter = power_letter(m, U), power_letter(m, V)

    sizes = []
    n0 = None
    for n in range(1, max_n + 1):
        sizes.append(len(stabilizer_projection(mb, (V_letter,) * n, cap)))
        start = len(sizes) - window
        if start >= 0 and len(set(sizes[start:])) == 1:
            n0 = start + 1
            break
    if n0 is None:
        raise NotStabilized(f"stabiliser images still shrinking at n={max_n}")

    v_lang = OrbitLanguage(mb, V_letter, cap=cap)
    v_dfa = synthesize_orbit_dfa(None, None, language=v_lang, cap=cap).dfa
    prefix_words = orbit_words(mb, (U_letter,) + (V_letter,) * n0, cap=cap)

    # trie states come after the copy of the v-DFA
    offset = v_dfa.n_states
    transitions = {k: t for k, t in v_dfa.transitions.items()}
    trie = {(): offset}
    n_states = offset + 1
    for w in sorted(prefix_words):
        for i in range(1, len(w)):
            p = w[:i]
            if p not in trie:
                trie[p] = n_states
                n_states += 1
                transitions[(trie[p[:-1]], p[-1])] = trie[p]
        transitions[(trie[w[:-1]], w[-1])] = v_dfa.run(w[1:])
    block_dfa = OrbitLanguageDfa(mb.alphabet, n_states, offset, transitions)
    dfa = _expand_blocks(block_dfa, m.alphabet, B, split)

    for n in range(depth + 1):
        expected = orbit_codes(m, seq(n), cap=cap)
        bad = _level_sets_agree(dfa, n, expected)
        if bad is not None:
            raise AssertionError(f"pre-periodic DFA disagrees with the orbit at {bad}")
    dfa.validated_depth = depth
    return PreperiodicDfa(dfa, n0, B, sizes)
