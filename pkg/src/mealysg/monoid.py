"""The monoid P_M built layer by layer as a minimal automaton on classes.

Every ~Q-class gets an id; class ``c`` stores its output row and the ids
of its residuals.  A word ``r q`` (``q`` acts first) behaves like the pair
``(class(r), q)``, whose residuals are again pairs ``(class(r'), q')`` with
``|r'| = |r|``.  So the candidates of the next layer, together with the
classes already known, form a finite Mealy automaton, and equality of a
candidate with anything is plain bisimulation on it.  Known classes are
pairwise distinct, which lets the bisimulation stop at any pair of ids.
Candidates are only compared when their behaviour hashes agree.  The
level-``l`` hashes are Moore's partition refinement; levels are added until
the number of distinct hashes over known classes and candidates stops
growing, at which point equal hashes mean equal behaviour (the pair
closure still confirms each match).
"""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .automaton import MealyAutomaton
from .words import Word

_MUL = np.uint64(0x100000001B3)
_FIN = np.uint64(0xBF58476D1CE4E5B9)


def _mix(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    h = (h * _MUL) ^ v
    h ^= h >> np.uint64(31)
    return h * _FIN


class RefinementTooDeep(RuntimeError):
    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(f"hash refinement still splitting at depth {depth}")


class ClassMonoid:
    """Classes of state words, grown one word length at a time.

    ``reps[c]`` is the shortlex-first word of class ``c``; ``layer_start``
    records where each length begins.  Class 0 is the empty word.
    """

    def __init__(self, m: MealyAutomaton):
        self.m = m
        ai = {a: i for i, a in enumerate(m.alphabet)}
        qi = {q: i for i, q in enumerate(m.states)}
        self._gout = [tuple(ai[m.out(q, a)] for a in m.alphabet) for q in m.states]
        self._gnext = [tuple(qi[m.next(q, a)] for a in m.alphabet) for q in m.states]
        self.reps: list[Word] = [()]
        self.out: list[tuple[int, ...]] = [tuple(range(len(m.alphabet)))]
        self.next: list[tuple[int, ...]] = [(0,) * len(m.alphabet)]
        self.layer_start = [0, 1]  # layer n is reps[layer_start[n]:layer_start[n+1]]
        self.complete = True
        self._prod: dict[tuple[int, int], int] = {}
        k = len(m.alphabet)
        self._code = self._codes(self.out)
        self._kids = np.zeros((1, k), dtype=np.int64)
        self._H = np.empty((1, 1), dtype=np.uint64)
        self._H[:, 0] = _mix(self._code, np.uint64(k))
        self._buckets: dict[int, list[int]] = defaultdict(list)
        self._bucket_level = 0
        self._rebucket()

    def _codes(self, outs) -> np.ndarray:
        k = len(self.m.alphabet)
        return np.array([sum(b * k ** a for a, b in enumerate(o)) for o in outs], dtype=np.uint64)

    def _rebucket(self):
        self._buckets = defaultdict(list)
        for c, h in enumerate(self._H[:, -1].tolist()):
            self._buckets[h].append(c)

    def _extend_known(self):
        """Add one hash level for the known classes."""
        L = self._H.shape[1] - 1
        h = self._code.copy()
        for a in range(self._kids.shape[1]):
            h = _mix(h, self._H[self._kids[:, a], L])
        self._H = np.concatenate([self._H, h[:, None]], axis=1)

    def _candidate_hashes(self, code, children, sig=None) -> np.ndarray:
        """Hash levels of new nodes whose children are new nodes
        (``-1 - index``) or known classes, extended to the known depth."""
        n, k = children.shape
        if sig is None:
            sig = np.empty((n, 1), dtype=np.uint64)
            sig[:, 0] = _mix(code, np.uint64(k))
        own = children < 0
        own_idx = np.where(own, -1 - children, 0)
        known_idx = np.where(own, 0, children)
        cols = [sig[:, l] for l in range(sig.shape[1])]
        for l in range(sig.shape[1], self._H.shape[1]):
            h = code.copy()
            for a in range(k):
                h = _mix(h, np.where(own[:, a], cols[l - 1][own_idx[:, a]], self._H[known_idx[:, a], l - 1]))
            cols.append(h)
        return np.stack(cols, axis=1)

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def depth(self) -> int:
        return len(self.layer_start) - 2

    def product(self, c: int, q: int) -> int:
        """Class of ``reps[c] q`` (``q`` acting first); ``c`` must lie below
        the newest layer."""
        return self._prod[(c, q)]

    def grow(self, limit: int | None = None, max_depth: int | None = None) -> int:
        """Add the classes of the next word length and return how many were
        new.  With ``limit``, stop as soon as more than ``limit`` classes are
        known; the monoid is then left incomplete and cannot grow further.
        RefinementTooDeep (leaving the monoid unchanged) if telling the
        candidates apart would need more than ``max_depth`` hash levels."""
        if not self.complete:
            raise RuntimeError("the last layer was cut short")
        lo, hi = self.layer_start[-2], self.layer_start[-1]
        nq, nA = len(self._gout), len(self.out[0])
        # candidate node (c, q) for c in the newest layer; encoded as -1 - index
        cand = [(c, q) for c in range(lo, hi) for q in range(nq)]
        pos = {cq: i for i, cq in enumerate(cand)}

        def node(c, q):
            if c >= lo:
                return -1 - pos[(c, q)]
            return self._prod[(c, q)]

        c_out, c_next = [], []
        for c, q in cand:
            go, gn = self._gout[q], self._gnext[q]
            row, nxt = self.out[c], self.next[c]
            c_out.append(tuple(row[go[a]] for a in range(nA)))
            c_next.append(tuple(node(nxt[go[a]], gn[a]) for a in range(nA)))
        code = self._codes(c_out)
        children = np.array(c_next, dtype=np.int64).reshape(len(cand), nA)
        sig = self._candidate_hashes(code, children)
        while True:
            L = sig.shape[1] - 1
            if L > 0:
                before = np.unique(np.concatenate([self._H[:, L - 1], sig[:, L - 1]])).size
                after = np.unique(np.concatenate([self._H[:, L], sig[:, L]])).size
                if before == after:
                    break
            if max_depth is not None and L >= max_depth:
                raise RefinementTooDeep(L)
            self._extend_known()
            sig = self._candidate_hashes(code, children, sig)
        if self._bucket_level != self._H.shape[1]:
            self._rebucket()
            self._bucket_level = self._H.shape[1]

        def n_out(x):
            return c_out[-1 - x] if x < 0 else self.out[x]

        def n_next(x):
            return c_next[-1 - x] if x < 0 else self.next[x]

        def same(x, y) -> bool:
            seen = {(x, y)}
            stack = [(x, y)]
            while stack:
                s, t = stack.pop()
                if s >= 0 and t >= 0:
                    if s != t:
                        return False
                    continue
                if n_out(s) != n_out(t):
                    return False
                for p in zip(n_next(s), n_next(t)):
                    if p[0] != p[1] and p not in seen:
                        seen.add(p)
                        stack.append(p)
            return True

        n = len(cand)
        resolved: list[int] = [0] * n
        fresh: list[int] = []  # candidate indices that became new classes
        keys = sig[:, -1].tolist()
        for i in range(n):
            x = -1 - i
            bucket = self._buckets[keys[i]]
            hit = next((y for y in bucket if same(x, y)), None)
            if hit is None:
                resolved[i] = -1 - len(fresh)
                bucket.append(x)
                fresh.append(i)
                if limit is not None and hi + len(fresh) > limit:
                    self.complete = False
                    break
            else:
                resolved[i] = hit if hit >= 0 else resolved[-1 - hit]
        final = [r if r >= 0 else hi - 1 - r for r in resolved]
        for i in fresh:
            bucket = self._buckets[keys[i]]
            bucket[bucket.index(-1 - i)] = final[i]
        for i in fresh:
            c, q = cand[i]
            self.reps.append(self.reps[c] + (self.m.states[q],))
        self.layer_start.append(len(self.reps))
        if not self.complete:
            return len(fresh)
        for i, (c, q) in enumerate(cand):
            self._prod[(c, q)] = final[i]
        for i in fresh:
            self.out.append(c_out[i])
            self.next.append(tuple(final[-1 - x] if x < 0 else x for x in c_next[i]))
        self._code = np.concatenate([self._code, code[fresh]])
        self._kids = np.concatenate([self._kids, np.array([self.next[c] for c in range(hi, len(self.reps))],
                                                          dtype=np.int64).reshape(-1, nA)])
        self._H = np.concatenate([self._H, sig[fresh]])
        return len(fresh)
