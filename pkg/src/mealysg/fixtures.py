"""Built-in automata.

``notregular_N`` follows the dual Moore diagram of the non-regular orbit
example; the printed transition table disagrees with the diagram in a few
cells and, read literally, is not invertible.
"""
from __future__ import annotations

from .automaton import MealyAutomaton

FIXTURE_NAMES = ("figure1", "z2", "classes_not_preserved", "notregular_N", "identity", "perm")


def figure1() -> MealyAutomaton:
    table = {
        ("t", "0"): ("0", "s"),
        ("t", "1"): ("0", "t"),
        ("s", "0"): ("1", "s"),
        ("s", "1"): ("0", "s"),
    }
    return MealyAutomaton("ts", "01", table, name="figure1")


def z2() -> MealyAutomaton:
    table = {}
    for q in (0, 1):
        for a in (0, 1):
            r = str((q + a) % 2)
            table[(str(q), str(a))] = (r, r)
    return MealyAutomaton("01", "01", table, name="z2")


def classes_not_preserved() -> MealyAutomaton:
    rows = {
        # letter: outputs/next states for a, b, c
        "x1": [("x2", "a"), ("x2", "a"), ("x2", "a")],
        "y1": [("y2", "a"), ("y2", "a"), ("y2", "a")],
        "x2": [("x2", "a"), ("x2", "b"), ("x2", "c")],
        "y2": [("y2", "a"), ("y2", "c"), ("y2", "b")],
        "z1": [("z2", "a"), ("z1", "b"), ("z2", "c")],
        "z2": [("z2", "a"), ("z2", "b"), ("z2", "c")],
    }
    table = {}
    for a, cells in rows.items():
        for q, cell in zip("abc", cells):
            table[(q, a)] = cell
    return MealyAutomaton("abc", list(rows), table, name="classes_not_preserved")


_N_COLUMNS = {
    # letter -> (s, t, x, y) cells; "ε" is the identity state
    "a": (("b", "ε"), ("j", "ε"), ("a", "ε"), ("a", "ε")),
    "b": (("e", "s"), ("b", "ε"), ("c", "ε"), ("b", "ε")),
    "c": (("f", "t"), ("c", "ε"), ("b", "ε"), ("c", "ε")),
    "d": (("a", "ε"), ("d", "ε"), ("d", "ε"), ("d", "y")),
    "e": (("d", "ε"), ("e", "ε"), ("f", "ε"), ("e", "y")),
    "f": (("c", "t"), ("f", "ε"), ("e", "x"), ("f", "y")),
    "g": (("g", "ε"), ("a", "ε"), ("g", "x"), ("g", "ε")),
    "h": (("h", "ε"), ("g", "ε"), ("h", "x"), ("i", "ε")),
    "i": (("i", "ε"), ("k", "s"), ("i", "x"), ("h", "y")),
    "j": (("j", "ε"), ("h", "t"), ("j", "ε"), ("k", "ε")),
    "k": (("k", "ε"), ("i", "s"), ("k", "ε"), ("j", "ε")),
}


def notregular_N() -> MealyAutomaton:
    letters = list(_N_COLUMNS)
    table = {("ε", a): (a, "ε") for a in letters}
    for a, cells in _N_COLUMNS.items():
        for q, cell in zip("stxy", cells):
            table[(q, a)] = cell
    return MealyAutomaton(["ε", "s", "t", "x", "y"], letters, table, name="notregular_N")


def identity(alphabet=("a", "b")) -> MealyAutomaton:
    table = {("e", a): (a, "e") for a in alphabet}
    return MealyAutomaton(["e"], alphabet, table, name="identity")


def perm(mapping=None) -> MealyAutomaton:
    """One-state automaton acting letterwise by a permutation
    (default: the transposition of ``a`` and ``b``)."""
    if mapping is None:
        mapping = {"a": "b", "b": "a"}
    if sorted(mapping.values()) != sorted(mapping):
        raise ValueError("mapping is not a permutation")
    table = {("p", a): (b, "p") for a, b in mapping.items()}
    return MealyAutomaton(["p"], list(mapping), table, name="perm")


_BUILDERS = {
    "figure1": figure1,
    "z2": z2,
    "classes_not_preserved": classes_not_preserved,
    "notregular_N": notregular_N,
}


def fixture(name: str) -> MealyAutomaton:
    """Look up a fixture by name.

    ``identity`` and ``perm`` take optional parameters:
    ``identity:a,b,c`` and ``perm:a=b,b=c,c=a``.
    """
    base, _, arg = name.partition(":")
    if base in _BUILDERS and not arg:
        return _BUILDERS[base]()
    if base == "identity":
        return identity(arg.split(",")) if arg else identity()
    if base == "perm":
        if not arg:
            return perm()
        mapping = {}
        for item in arg.split(","):
            src, eq, dst = item.partition("=")
            if not eq or not src or not dst:
                raise ValueError(f"bad permutation entry {item!r}")
            mapping[src] = dst
        return perm(mapping)
    raise KeyError(f"unknown fixture {name!r} (known: {', '.join(FIXTURE_NAMES)})")
