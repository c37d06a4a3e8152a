"""Mealy automata: construction, file format, classification and the
standard transformations (dual, enriched, alphabet power) plus DOT export.

An automaton is a finite stateset Q, an alphabet A and a total map
``(q, a) -> (q·a, q@a)``.  Values are immutable; every transformation
returns a new automaton.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

INVERSE_SUFFIX = "^-1"


class AutomatonError(ValueError):
    """Invalid automaton data (duplicate symbols, partial table, ...)."""


class AutomatonFormatError(AutomatonError):
    """Syntax or consistency error in an automaton file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NotInvertible(AutomatonError):
    pass


@dataclass(frozen=True)
class Classification:
    invertible: bool
    reversible: bool
    bireversible: bool

    def __str__(self) -> str:
        return " ".join(f"{k}={'yes' if getattr(self, k) else 'no'}"
                        for k in ("invertible", "reversible", "bireversible"))


def join_symbols(symbols: Iterable[str], universe: Iterable[str]) -> str:
    """Render a word: plain concatenation when every symbol of the
    universe is a single character, ``.``-separated otherwise."""
    symbols = list(symbols)
    sep = "" if all(len(x) == 1 for x in universe) else "."
    return sep.join(symbols)


class MealyAutomaton:
    """A complete deterministic Mealy automaton.

    ``table[(q, a)] == (b, r)`` means state ``q`` reading ``a`` writes ``b``
    and moves to ``r``.  Equality is structural and ignores ``name``.
    """

    __slots__ = ("name", "states", "alphabet", "_table", "_hash")

    def __init__(self, states: Iterable[str], alphabet: Iterable[str],
                 table: Mapping[tuple[str, str], tuple[str, str]], name: str | None = None):
        states = tuple(states)
        alphabet = tuple(alphabet)
        if not states:
            raise AutomatonError("stateset is empty")
        if not alphabet:
            raise AutomatonError("alphabet is empty")
        for kind, seq in (("state", states), ("letter", alphabet)):
            seen = set()
            for x in seq:
                if not isinstance(x, str) or not x or any(c.isspace() for c in x):
                    raise AutomatonError(f"bad {kind} symbol {x!r}")
                if x in seen:
                    raise AutomatonError(f"duplicate {kind} {x}")
                seen.add(x)
        sset, aset = set(states), set(alphabet)
        tab = {}
        for q in states:
            for a in alphabet:
                try:
                    b, r = table[(q, a)]
                except KeyError:
                    raise AutomatonError(f"missing transition ({q},{a})") from None
                if b not in aset:
                    raise AutomatonError(f"transition ({q},{a}) writes undeclared letter {b}")
                if r not in sset:
                    raise AutomatonError(f"transition ({q},{a}) enters undeclared state {r}")
                tab[(q, a)] = (b, r)
        if len(table) != len(tab):
            extra = next(k for k in table if k not in tab)
            raise AutomatonError(f"transition for undeclared pair {extra}")
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "_table", tab)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("MealyAutomaton is immutable")

    @property
    def table(self) -> Mapping[tuple[str, str], tuple[str, str]]:
        return dict(self._table)

    def __getitem__(self, key: tuple[str, str]) -> tuple[str, str]:
        return self._table[key]

    def out(self, q: str, a: str) -> str:
        return self._table[(q, a)][0]

    def next(self, q: str, a: str) -> str:
        return self._table[(q, a)][1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MealyAutomaton):
            return NotImplemented
        return (self.states == other.states and self.alphabet == other.alphabet
                and self._table == other._table)

    def __hash__(self) -> int:
        if self._hash is None:
            h = hash((self.states, self.alphabet,
                      tuple(self._table[(q, a)] for q in self.states for a in self.alphabet)))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<MealyAutomaton{label} |Q|={len(self.states)} |A|={len(self.alphabet)}>"

    def with_name(self, name: str | None) -> "MealyAutomaton":
        return MealyAutomaton(self.states, self.alphabet, self._table, name=name)

    def state_word(self, symbols: Iterable[str]) -> str:
        return join_symbols(symbols, self.states)

    def letter_word(self, symbols: Iterable[str]) -> str:
        return join_symbols(symbols, self.alphabet)


# -- file format -------------------------------------------------------------

def _tokens(line: str):
    """Yield (column, token) pairs, columns 1-based."""
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        yield col + 1, tok
        col += len(tok)


def parse_automaton(text: str) -> MealyAutomaton:
    name = None
    states = alphabet = None
    table: dict[tuple[str, str], tuple[str, str]] = {}
    first = True
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = list(_tokens(raw))
        head = toks[0][1]
        if head == "name":
            if not first:
                raise AutomatonFormatError("'name' must be the first declaration", lineno, toks[0][0])
            if len(toks) != 2:
                raise AutomatonFormatError("expected 'name <identifier>'", lineno, toks[0][0])
            name = toks[1][1]
        elif head in ("states", "alphabet"):
            if (states if head == "states" else alphabet) is not None:
                raise AutomatonFormatError(f"'{head}' declared twice", lineno, toks[0][0])
            if len(toks) < 2:
                raise AutomatonFormatError(f"'{head}' needs at least one symbol", lineno, toks[0][0])
            syms = []
            for col, tok in toks[1:]:
                if tok in syms:
                    raise AutomatonFormatError(f"duplicate symbol {tok}", lineno, col)
                syms.append(tok)
            if head == "states":
                states = syms
            else:
                alphabet = syms
        else:
            if states is None or alphabet is None:
                raise AutomatonFormatError("transition before 'states' and 'alphabet'", lineno, toks[0][0])
            if len(toks) != 5 or toks[2][1] != "->":
                raise AutomatonFormatError("expected '<state> <letter> -> <letter> <state>'",
                                           lineno, toks[0][0])
            (cq, q), (ca, a), _, (cb, b), (cr, r) = toks
            for col, sym, pool, kind in ((cq, q, states, "state"), (ca, a, alphabet, "letter"),
                                         (cb, b, alphabet, "letter"), (cr, r, states, "state")):
                if sym not in pool:
                    raise AutomatonFormatError(f"undeclared {kind} {sym}", lineno, col)
            if (q, a) in table:
                raise AutomatonFormatError(f"duplicate transition ({q},{a})", lineno, cq)
            table[(q, a)] = (b, r)
        first = False
    if states is None:
        raise AutomatonFormatError("missing 'states' declaration")
    if alphabet is None:
        raise AutomatonFormatError("missing 'alphabet' declaration")
    for q in states:
        if q.endswith(INVERSE_SUFFIX) and q[: -len(INVERSE_SUFFIX)] not in states:
            raise AutomatonFormatError(f"inverse state {q} without its base state")
    for q in states:
        for a in alphabet:
            if (q, a) not in table:
                raise AutomatonFormatError(f"missing transition ({q},{a})")
    return MealyAutomaton(states, alphabet, table, name=name)


def serialize_automaton(m: MealyAutomaton) -> str:
    lines = []
    if m.name:
        lines.append(f"name {m.name}")
    lines.append("states " + " ".join(m.states))
    lines.append("alphabet " + " ".join(m.alphabet))
    for q in m.states:
        for a in m.alphabet:
            b, r = m[(q, a)]
            lines.append(f"{q} {a} -> {b} {r}")
    return "\n".join(lines) + "\n"


# -- classification and transformations --------------------------------------

def classify(m: MealyAutomaton) -> Classification:
    nq, na = len(m.states), len(m.alphabet)
    invertible = all(len({m.out(q, a) for a in m.alphabet}) == na for q in m.states)
    reversible = all(len({m.next(q, a) for q in m.states}) == nq for a in m.alphabet)
    bijective = len({m[(q, a)] for q in m.states for a in m.alphabet}) == nq * na
    return Classification(invertible, reversible, invertible and reversible and bijective)


def dual(m: MealyAutomaton) -> MealyAutomaton:
    table = {(a, q): (m.next(q, a), m.out(q, a)) for q in m.states for a in m.alphabet}
    name = None
    if m.name:
        name = m.name[len("dual-"):] if m.name.startswith("dual-") else "dual-" + m.name
    return MealyAutomaton(m.alphabet, m.states, table, name=name)


def inverse_symbol(q: str) -> str:
    if q.endswith(INVERSE_SUFFIX):
        return q[: -len(INVERSE_SUFFIX)]
    return q + INVERSE_SUFFIX


def enriched(m: MealyAutomaton) -> MealyAutomaton:
    """Adjoin a formal inverse ``q^-1`` for every state; the result
    generates a group with ``q`` and ``q^-1`` mutually inverse."""
    if not classify(m).invertible:
        raise NotInvertible(f"{m.name or 'automaton'} is not invertible")
    inverses = [q + INVERSE_SUFFIX for q in m.states]
    clash = set(inverses) & set(m.states)
    if clash:
        raise AutomatonError(f"inverse name collides with declared state {sorted(clash)[0]}")
    table = dict(m.table)
    for q in m.states:
        for a in m.alphabet:
            b, r = m[(q, a)]
            table[(q + INVERSE_SUFFIX, b)] = (a, r + INVERSE_SUFFIX)
    name = f"enriched-{m.name}" if m.name else None
    return MealyAutomaton(m.states + tuple(inverses), m.alphabet, table, name=name)


def power(m: MealyAutomaton, k: int) -> MealyAutomaton:
    """Automaton over blocks of ``k`` letters (alphabet A^k)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return m
    sep = "" if all(len(a) == 1 for a in m.alphabet) else "."
    blocks = list(itertools.product(m.alphabet, repeat=k))
    table = {}
    for q in m.states:
        for block in blocks:
            out, r = [], q
            for a in block:
                b, r = m[(r, a)]
                out.append(b)
            table[(q, sep.join(block))] = (sep.join(out), r)
    name = f"{m.name}^{k}" if m.name else None
    return MealyAutomaton(m.states, [sep.join(b) for b in blocks], table, name=name)


def power_letter(m: MealyAutomaton, word: Iterable[str]) -> str:
    """Symbol of ``power(m, len(word))`` for the given block of letters."""
    sep = "" if all(len(a) == 1 for a in m.alphabet) else "."
    return sep.join(word)


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def moore_dot(m: MealyAutomaton) -> str:
    lines = [f"digraph {_dot_id(m.name or 'mealy')} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for q in m.states:
        lines.append(f"  {_dot_id(q)};")
    for q in m.states:
        for a in m.alphabet:
            b, r = m[(q, a)]
            lines.append(f"  {_dot_id(q)} -> {_dot_id(r)} [label={_dot_id(a + '|' + b)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
