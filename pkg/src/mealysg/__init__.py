"""Semigroups generated by Mealy automata and their duals: equality
deciders, orbit languages of periodic words, order and finiteness checks."""
from .automaton import (AutomatonError, AutomatonFormatError, MealyAutomaton, NotInvertible,
                        classify, dual, enriched, parse_automaton, power, serialize_automaton)
from .errors import ExceedsCap
from .fixtures import fixture
from .order import (dual_finiteness_crosscheck, growth_series, order_in_D, periodic_orbit_verdict,
                    semigroup_closure)
from .orbits import (build_orbit_graph, degree_profile, orbit_language, orbit_words,
                     preperiodic_dfa, synthesize_orbit_dfa)
from .zs import act, equal_in_D, equal_in_Dprime, equal_in_P, normal_form, residual

__all__ = [
    "AutomatonError", "AutomatonFormatError", "ExceedsCap", "MealyAutomaton", "NotInvertible",
    "act", "build_orbit_graph", "classify", "degree_profile", "dual", "dual_finiteness_crosscheck",
    "enriched", "equal_in_D", "equal_in_Dprime", "equal_in_P", "fixture", "growth_series",
    "normal_form", "orbit_language", "orbit_words", "order_in_D", "parse_automaton",
    "periodic_orbit_verdict", "power", "preperiodic_dfa", "residual", "semigroup_closure",
    "serialize_automaton", "synthesize_orbit_dfa",
]
