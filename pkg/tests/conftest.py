"""Shared oracles.  Everything here is computed from the raw transition
table, without going through the library's deciders."""
import itertools
import random

import numpy as np
import pytest
from hypothesis import strategies as st

from mealysg import MealyAutomaton, fixture

EXAMPLE_FIXTURES = ("figure1", "z2", "classes_not_preserved", "notregular_N")


def words_upto(symbols, n):
    for k in range(n + 1):
        yield from itertools.product(symbols, repeat=k)


def run(m, s, u):
    """Apply state word ``s`` (rightmost state first) to ``u``, one letter
    at a time; return (image, residual)."""
    states = list(s)
    out = []
    for a in u:
        for i in reversed(range(len(states))):
            a, states[i] = m.table[(states[i], a)]
        out.append(a)
    return tuple(out), tuple(states)


def moore_classes(keys, inputs, step):
    """Coarsest partition of ``keys`` compatible with ``step(key, x) ->
    (output, next key)``.  Returns {key: block id}."""
    index = {k: i for i, k in enumerate(keys)}
    outs, nxt = [], []
    for k in keys:
        row_o, row_n = [], []
        for x in inputs:
            o, r = step(k, x)
            row_o.append(o)
            row_n.append(index[r])
        outs.append(tuple(row_o))
        nxt.append(row_n)
    codes = {}
    rows = np.array([[codes.setdefault(o, len(codes)) for o in row] for row in outs], dtype=np.int64)
    _, block = np.unique(rows.reshape(len(keys), len(inputs)), axis=0, return_inverse=True)
    block = block.ravel()
    nxt = np.array(nxt, dtype=np.int64).reshape(len(keys), len(inputs))
    while True:
        sig = np.concatenate([block[:, None], block[nxt]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        if new.max() == block.max():
            return {k: int(new[i]) for i, k in enumerate(keys)}
        block = new


def p_classes(m, n):
    """P_M-classes of all state words of length <= n."""
    keys = list(words_upto(m.states, n))

    def step(s, a):
        (b,), r = run(m, s, (a,))
        return b, r

    return moore_classes(keys, m.alphabet, step)


def d_classes(m, n):
    """~A-classes (equality in D_M) of all letter words of length <= n."""
    keys = list(words_upto(m.alphabet, n))

    def step(u, q):
        out, (r,) = run(m, (q,), u)
        return r, out

    return moore_classes(keys, m.states, step)


def p_same(m, x, y):
    """Do state words ``x`` and ``y`` act alike?  Moore refinement on the
    residuals reachable from the two of them."""
    x, y = tuple(x), tuple(y)
    keys, queue = {x, y}, [x, y]
    while queue:
        w = queue.pop()
        for a in m.alphabet:
            r = run(m, w, (a,))[1]
            if r not in keys:
                keys.add(r)
                queue.append(r)

    def step(w, a):
        (b,), r = run(m, w, (a,))
        return b, r

    classes = moore_classes(sorted(keys), m.alphabet, step)
    return classes[x] == classes[y]


def random_automaton(rng: random.Random, nq=None, na=None) -> MealyAutomaton:
    nq = nq or rng.randint(1, 4)
    na = na or rng.randint(1, 4)
    Q = [f"q{i}" for i in range(nq)]
    A = [f"a{i}" for i in range(na)]
    table = {(q, a): (rng.choice(A), rng.choice(Q)) for q in Q for a in A}
    return MealyAutomaton(Q, A, table)


@st.composite
def automata(draw, max_states=4, max_letters=4):
    nq = draw(st.integers(1, max_states))
    na = draw(st.integers(1, max_letters))
    Q = [f"q{i}" for i in range(nq)]
    A = [f"a{i}" for i in range(na)]
    cells = draw(st.lists(st.tuples(st.sampled_from(A), st.sampled_from(Q)),
                          min_size=nq * na, max_size=nq * na))
    return MealyAutomaton(Q, A, dict(zip([(q, a) for q in Q for a in A], cells)))


@pytest.fixture(params=EXAMPLE_FIXTURES)
def example_fixture(request):
    return fixture(request.param)


# -- acceptance summary -----------------------------------------------------------

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, [title, True])
    entry[1] = entry[1] and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
