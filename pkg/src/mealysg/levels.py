"""Action of state words on a fixed level of the rooted tree, as integer
arrays.  Level-``L`` words are indexed in base ``|A|`` with the first letter
most significant, so an array ``f`` with ``f[i] = j`` encodes ``s·w_i = w_j``.
Equal arrays at level ``L`` mean equal action on every word of length ``<= L``.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .automaton import MealyAutomaton


def deepest_level(m: MealyAutomaton, max_points: int) -> int:
    n, level = len(m.alphabet), 0
    while n ** (level + 1) <= max_points:
        level += 1
    return max(level, 1)


class LevelAction:
    def __init__(self, m: MealyAutomaton, depth: int):
        self.m = m
        self.depth = depth
        base = len(m.alphabet)
        self.size = base ** depth
        dtype = np.int32 if self.size < 2**31 else np.int64
        self.dtype = dtype
        letter = {a: i for i, a in enumerate(m.alphabet)}
        arrs = {q: np.zeros(1, dtype=dtype) for q in m.states}
        for level in range(1, depth + 1):
            block = base ** (level - 1)
            new = {}
            for q in m.states:
                parts = []
                for a in m.alphabet:
                    b, r = m[(q, a)]
                    parts.append(letter[b] * block + arrs[r])
                new[q] = np.concatenate(parts).astype(dtype, copy=False)
            arrs = new
        self.arrays = arrs
        self.identity = np.arange(self.size, dtype=dtype)

    def of(self, word: Iterable[str]) -> np.ndarray:
        res = self.identity
        for q in reversed(tuple(word)):
            res = self.arrays[q][res]
        return res

    def index(self, letters: Iterable[str]) -> int:
        letter = {a: i for i, a in enumerate(self.m.alphabet)}
        idx = 0
        for a in letters:
            idx = idx * len(self.m.alphabet) + letter[a]
        return idx

    def word(self, index: int) -> tuple[str, ...]:
        base = len(self.m.alphabet)
        out = []
        for _ in range(self.depth):
            index, r = divmod(index, base)
            out.append(self.m.alphabet[r])
        return tuple(reversed(out))
