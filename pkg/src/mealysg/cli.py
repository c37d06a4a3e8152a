"""Command line front end: ``mealysg <command> ...``.

Automaton arguments are file paths when such a file exists and fixture
names otherwise.  Exit status: 0 decided/success, 1 usage or input error,
2 undecided (Unknown, ExceedsCap or unresolved).
"""
from __future__ import annotations

import argparse
import os
import sys

from . import automaton as am
from . import fixtures, minsky, notregular, orbits, order, zs
from .errors import ExceedsCap
from .words import format_word, parse_mixed, parse_word

UNDECIDED = 2


class UsageError(Exception):
    pass


def load(name: str) -> am.MealyAutomaton:
    if name == "-":
        return am.parse_automaton(sys.stdin.read())
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            return am.parse_automaton(fh.read())
    try:
        return fixtures.fixture(name)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"{name}: no such file or fixture") from exc


def _states(m, text):
    return parse_word(text, m.states)


def _letters(m, text):
    return parse_word(text, m.alphabet)


def _gens(m, text):
    if text is None:
        return None
    return [_states(m, g) for g in text.split(",")]


def _table(rows):
    return "\n".join("\t".join(str(c) for c in row) for row in rows)


# -- automata -------------------------------------------------------------------

def cmd_check(args, out):
    m = load(args.automaton)
    c = am.classify(m)
    if args.format == "table":
        print(_table([("invertible", "reversible", "bireversible"),
                      tuple(int(getattr(c, k)) for k in ("invertible", "reversible", "bireversible"))]),
              file=out)
    elif args.format == "dot":
        print(am.moore_dot(m), end="", file=out)
    else:
        print(f"{m.name or args.automaton}: |Q|={len(m.states)} |A|={len(m.alphabet)} {c}", file=out)
    return 0


def _emit_automaton(m, args, out):
    print(am.moore_dot(m) if args.format == "dot" else am.serialize_automaton(m), end="", file=out)
    return 0


def cmd_dual(args, out):
    return _emit_automaton(am.dual(load(args.automaton)), args, out)


def cmd_enrich(args, out):
    return _emit_automaton(am.enriched(load(args.automaton)), args, out)


def cmd_power(args, out):
    return _emit_automaton(am.power(load(args.automaton), args.k), args, out)


# -- actions and equality ---------------------------------------------------------

def cmd_act(args, out):
    m = load(args.automaton)
    print(format_word(zs.act(m, _states(m, args.states), _letters(m, args.letters)), m.alphabet), file=out)
    return 0


def cmd_residual(args, out):
    m = load(args.automaton)
    print(format_word(zs.residual(m, _states(m, args.states), _letters(m, args.letters)), m.states), file=out)
    return 0


def cmd_normal_form(args, out):
    m = load(args.automaton)
    u, s = zs.normal_form(m, parse_mixed(args.word, m), args.strategy)
    print(f"{format_word(u, m.alphabet)} {format_word(s, m.states)}", file=out)
    return 0


def cmd_equal(args, out):
    m = load(args.automaton)
    if args.relation == "P":
        parse, decide, wsyms = _states, zs.equal_in_P, m.alphabet
    else:
        parse = _letters
        decide = zs.equal_in_D if args.relation == "D" else zs.equal_in_Dprime
        wsyms = m.states
    v = decide(m, parse(m, args.left), parse(m, args.right))
    if v.equal:
        print("equal", file=out)
    else:
        print(f"distinct witness={format_word(v.witness, wsyms)}", file=out)
    return 0


# -- orbits and languages ---------------------------------------------------------

def cmd_orbit(args, out):
    m = load(args.automaton)
    words = orbits.orbit_words(m, _letters(m, args.word), _gens(m, args.gens), args.cap)
    for w in sorted(words):
        print(format_word(w, m.alphabet), file=out)
    return 0


def cmd_degrees(args, out):
    m = load(args.automaton)
    p = orbits.degree_profile(m, _letters(m, args.word), args.k_max, _gens(m, args.gens), args.cap,
                              args.window)
    if args.format == "table":
        print(_table([("k", "degree")] + list(enumerate(p.degrees, 1))), file=out)
    else:
        print(p, file=out)
    return UNDECIDED if p.truncated else 0


def cmd_graph(args, out):
    m = load(args.automaton)
    g = orbits.build_orbit_graph(m, _letters(m, args.word), args.T, args.cap)
    if args.format == "dot":
        print(g.to_dot(), end="", file=out)
    else:
        fmt = lambda w: format_word(w, g.language.alphabet)
        print(f"T={g.T} d={g.d} vertices={len(g.vertices)} edges={len(g.edges)}", file=out)
        for s, a, t in g.edges:
            print(f"{fmt(g.vertices[s])} {a} {fmt(g.vertices[t])}", file=out)
    return 0


def _emit_dfa(dfa, args, out):
    print(dfa.to_dot() if args.format == "dot" else dfa.export(), end="", file=out)


def cmd_dfa(args, out):
    m = load(args.automaton)
    syn = orbits.synthesize_orbit_dfa(m, _letters(m, args.word), k_max=args.k_max,
                                      extra=args.validate_depth, window=args.window, cap=args.cap)
    for line in syn.history:
        print(f"# {line}", file=out)
    _emit_dfa(syn.dfa, args, out)
    return 0


def cmd_preperiodic_dfa(args, out):
    m = load(args.automaton)
    r = orbits.preperiodic_dfa(m, _letters(m, args.u), _letters(m, args.v), window=args.window,
                               depth=args.validate_depth, cap=args.cap)
    print(f"# n0={r.n0} block={r.block} validated to depth {r.dfa.validated_depth}", file=out)
    _emit_dfa(r.dfa, args, out)
    return 0


# -- orders and closures ----------------------------------------------------------

def cmd_order(args, out):
    m = load(args.automaton)
    v = order.order_in_D(m, _letters(m, args.word), args.bound, args.relation)
    print(v.record(), file=out)
    return 0 if v.finite else UNDECIDED


def cmd_orbit_verdict(args, out):
    m = load(args.automaton)
    v = order.periodic_orbit_verdict(m, _letters(m, args.word), args.bound, args.cap)
    print(v.record(), file=out)
    return 0 if v.finite else UNDECIDED


def cmd_closure(args, out):
    m = load(args.automaton)
    v = order.semigroup_closure(m, args.cap, args.max_len)
    print(v.record(), file=out)
    if v.finite and args.format != "table":
        for w in v.elements:
            print(format_word(w, m.states), file=out)
    return 0 if v.finite else UNDECIDED


def cmd_growth(args, out):
    m = load(args.automaton)
    sizes = order.growth_series(m, args.max_len, args.cap)
    if args.format == "table":
        print(_table([("n", "ball")] + list(enumerate(sizes, 1))), file=out)
    else:
        print(" ".join(map(str, sizes)), file=out)
    return 0


def cmd_free_search(args, out):
    m = load(args.automaton)
    r = order.free_pair_relation_search(m, _letters(m, args.y), _letters(m, args.z), args.max_len,
                                        args.relation)
    print(r.record(), file=out)
    return 0 if r.found else UNDECIDED


def cmd_crosscheck(args, out):
    m = load(args.automaton)
    r = order.dual_finiteness_crosscheck(m, args.cap)
    print(r.record(), file=out)
    return 0 if r.P.finite and r.D.finite else UNDECIDED


# -- fixtures and the worked examples -------------------------------------------------

def cmd_fixtures(args, out):
    if args.action == "list":
        for name in fixtures.FIXTURE_NAMES:
            print(name, file=out)
        return 0
    if not args.name:
        raise UsageError("fixtures show needs a name")
    return _emit_automaton(load(args.name), args, out)


def cmd_minsky(args, out):
    for s in minsky.minsky_trace(args.steps):
        print(s if args.format != "table" else f"{s.instruction}\t{s.m}\t{s.n}", file=out)
    return 0


def cmd_psi_tower(args, out):
    N = fixtures.notregular_N()
    for k in range(args.k + 1):
        e = notregular.psi_tower(k, N)
        member = notregular.notregular_membership(k, N)
        print(f"{k}\t{e.pattern()}\t{'member' if member else '-'}", file=out)
    return 0


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mealysg", description="Mealy automaton semigroup toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help, *args, auto=True, cap=orbits.DEFAULT_CAP):
        sp = sub.add_parser(name, help=help)
        if auto:
            sp.add_argument("automaton", help="automaton file or fixture name")
        for a in args:
            sp.add_argument(a)
        sp.add_argument("--format", choices=("text", "dot", "table"), default="text")
        sp.add_argument("--cap", type=int, default=cap)
        sp.set_defaults(fn=fn)
        return sp

    cmd("check", cmd_check, "validate and classify")
    cmd("dual", cmd_dual, "print the dual automaton")
    cmd("enrich", cmd_enrich, "add formal inverses")
    cmd("power", cmd_power, "alphabet power").add_argument("k", type=int)
    cmd("act", cmd_act, "s·u", "states", "letters")
    cmd("residual", cmd_residual, "s@u", "states", "letters")
    cmd("normal-form", cmd_normal_form, "letters-then-states form of a mixed word", "word") \
        .add_argument("--strategy", choices=("fold", "leftmost", "rightmost"), default="fold")
    sp = cmd("equal", cmd_equal, "decide equality of two words", "left", "right")
    sp.add_argument("--in", dest="relation", choices=("P", "D", "Dprime"), default="P")
    for name, fn, help in (("orbit", cmd_orbit, "orbit of a letter word"),
                           ("degrees", cmd_degrees, "degree profile of u^k")):
        sp = cmd(name, fn, help, "word")
        sp.add_argument("--gens", help="comma-separated state words")
        if name == "degrees":
            sp.add_argument("--k-max", type=int, default=8)
            sp.add_argument("--window", type=int, default=3)
    cmd("graph", cmd_graph, "orbit graph at level T", "word").add_argument("-T", type=int, default=1)
    sp = cmd("dfa", cmd_dfa, "synthesize and validate the orbit-language DFA", "word")
    sp.add_argument("--validate-depth", type=int, default=5, help="levels beyond T to validate")
    sp.add_argument("--k-max", type=int, default=8)
    sp.add_argument("--window", type=int, default=3)
    sp = cmd("preperiodic-dfa", cmd_preperiodic_dfa, "DFA for the orbit of u v^ω", "u", "v")
    sp.add_argument("--validate-depth", type=int, default=12)
    sp.add_argument("--window", type=int, default=3)
    for name, fn, help in (("order", cmd_order, "order of u in the dual semigroup"),
                           ("orbit-verdict", cmd_orbit_verdict, "is the orbit of u^ω finite")):
        sp = cmd(name, fn, help, "word")
        sp.add_argument("--bound", type=int, default=8)
        if name == "order":
            sp.add_argument("--relation", choices=order.RELATIONS, default="~A")
    cmd("closure", cmd_closure, "elements of P_M", cap=10_000).add_argument("--max-len", type=int, default=64)
    cmd("growth", cmd_growth, "ball sizes of P_M").add_argument("--max-len", type=int, default=6)
    sp = cmd("free-search", cmd_free_search, "look for a relation between two letter words", "y", "z")
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--relation", choices=order.RELATIONS, default="~A")
    cmd("crosscheck", cmd_crosscheck, "compare finiteness of P_M and D_M", cap=10_000)
    sp = cmd("fixtures", cmd_fixtures, "list or print built-in automata", auto=False)
    sp.add_argument("action", choices=("list", "show"))
    sp.add_argument("name", nargs="?")
    cmd("minsky", cmd_minsky, "run the two-counter machine", auto=False) \
        .add_argument("--steps", type=int, default=16)
    cmd("psi-tower", cmd_psi_tower, "tower words and membership of a^k b", auto=False) \
        .add_argument("k", type=int)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.fn(args, out)
    except ExceedsCap as exc:
        print(f"exceeds-cap {exc}", file=out)
        return UNDECIDED
    except orbits.NotStabilized as exc:
        print(f"unknown {exc}", file=out)
        return UNDECIDED
    except (UsageError, am.AutomatonError, orbits.NotBireversible, orbits.DegreeMismatch,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
