"""The two-counter machine whose run drives the periodic-orbit example.

Only the machine itself and the printed type-III excerpt of the encoding
automaton are provided; the full automaton is not reconstructed.
"""
from __future__ import annotations

from typing import NamedTuple

INSTRUCTIONS = ("a1", "a2", "b1", "b2", "c1", "c2", "d1", "d2")

INSTRUCTION_TYPES = {
    "a1": "III", "a2": "III",
    "b1": "IV", "c1": "IV",
    "b2": "V", "c2": "V",
    "d1": "VII",
    "d2": "VIII",
}


class MinskyState(NamedTuple):
    instruction: str
    m: int
    n: int

    def __str__(self) -> str:
        return f"({self.instruction}, {self.m}, {self.n})"


START = MinskyState("a1", 0, 0)


def minsky_step(s: MinskyState) -> MinskyState:
    ins, m, n = s
    if ins == "a1":
        nxt = MinskyState("b1", m + 1, n + 1)
    elif ins == "a2":
        nxt = MinskyState("b2", m + 1, n + 1)
    elif ins == "b1":
        nxt = MinskyState("d1", m - 1, n)
    elif ins == "b2":
        nxt = MinskyState("d2", m, n - 1)
    elif ins == "c1":
        nxt = MinskyState("a1", m - 1, n)
    elif ins == "c2":
        nxt = MinskyState("a2", m, n - 1)
    elif ins == "d1":
        nxt = MinskyState("a2" if m == 0 else "c1", m, n)
    elif ins == "d2":
        nxt = MinskyState("a1" if n == 0 else "c2", m, n)
    else:
        raise ValueError(f"unknown instruction {ins!r}")
    if nxt.m < 0 or nxt.n < 0:
        raise ValueError(f"counter would go negative from {s}")
    return nxt


def minsky_trace(steps: int, start: MinskyState = START) -> list[MinskyState]:
    """The first ``steps`` configurations, starting with ``start``."""
    out = []
    s = start
    for _ in range(steps):
        out.append(s)
        s = minsky_step(s)
    return out


def instruction_types(trace) -> list[str]:
    return [INSTRUCTION_TYPES[s.instruction] for s in trace]


# Rows of the printed excerpt for the type-III letters.  Letters are
# III_1, III_2 and their barred copies; "t" stands for every instruction
# other than a1, a2.  Cells are (output letter, next state).  The y row's
# last cell is kept exactly as printed.
TYPE_III_LETTERS = ("III_1", "III_2", "III_1bar", "III_2bar")
TYPE_III_EXCERPT = {
    "x": (("III_1", "x"), ("III_2", "x"), ("III_1bar", "x^-1"), ("III_2bar", "x^-1")),
    "y": (("III_1", "y"), ("III_2", "y"), ("III_1bar", "y^-1"), ("III_1bar", "y^-1")),
    "a1": (("III_2", "b1"), ("III_1", "ε"), ("III_2bar", "ε"), ("III_1bar", "b1^-1")),
    "a2": (("III_2", "b2"), ("III_1", "ε"), ("III_2bar", "ε"), ("III_1bar", "b2^-1")),
    "t": (("III_1bar", "ε"), ("III_2bar", "ε"), ("III_1", "ε"), ("III_2", "ε")),
}
