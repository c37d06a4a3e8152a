"""Word parsing and formatting shared by the library and the CLI.

Words are tuples of symbols.  On the command line a word is written as a
plain concatenation when all symbols of its kind are single characters and
as a ``.``-separated list otherwise; ``-`` (or the empty string) is the
empty word.  Mixed words may tag tokens as ``q:x`` / ``a:x``.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .automaton import MealyAutomaton

EMPTY = "-"

Word = tuple[str, ...]
Mixed = tuple[tuple[str, str], ...]  # ("q" | "a", symbol)


def parse_word(text: str, symbols: Sequence[str]) -> Word:
    if text in ("", EMPTY) and EMPTY not in symbols:
        return ()
    pool = set(symbols)
    if "." in text or not all(len(s) == 1 for s in symbols):
        parts = text.split(".")
    else:
        parts = list(text)
    for p in parts:
        if p not in pool:
            raise ValueError(f"unknown symbol {p!r} in word {text!r}")
    return tuple(parts)


def format_word(word: Iterable[str], symbols: Sequence[str]) -> str:
    word = tuple(word)
    if not word:
        return EMPTY
    sep = "" if all(len(s) == 1 for s in symbols) else "."
    return sep.join(word)


def parse_mixed(text: str, m: MealyAutomaton) -> Mixed:
    qs, as_ = set(m.states), set(m.alphabet)
    if text in ("", EMPTY):
        return ()
    single = all(len(s) == 1 for s in m.states + m.alphabet)
    if "." in text or ":" in text or not single:
        parts = text.split(".")
    else:
        parts = list(text)
    out = []
    for p in parts:
        tag, colon, sym = p.partition(":")
        if colon:
            if tag not in ("q", "a"):
                raise ValueError(f"bad tag {tag!r} in {p!r}")
            pool = qs if tag == "q" else as_
            if sym not in pool:
                raise ValueError(f"{sym!r} is not a {'state' if tag == 'q' else 'letter'}")
            out.append((tag, sym))
            continue
        in_q, in_a = p in qs, p in as_
        if in_q and in_a:
            raise ValueError(f"{p!r} is both a state and a letter; tag it as q:{p} or a:{p}")
        if not (in_q or in_a):
            raise ValueError(f"unknown symbol {p!r}")
        out.append(("q" if in_q else "a", p))
    return tuple(out)


def format_mixed(word: Mixed) -> str:
    if not word:
        return EMPTY
    return ".".join(f"{tag}:{sym}" for tag, sym in word)


def shortlex_words(symbols: Sequence[str], max_len: int, min_len: int = 0):
    """All words of length min_len..max_len in shortlex order."""
    import itertools

    for n in range(min_len, max_len + 1):
        yield from itertools.product(symbols, repeat=n)


def shortlex_key(symbols: Sequence[str]):
    rank = {s: i for i, s in enumerate(symbols)}
    return lambda w: (len(w), [rank[x] for x in w])
