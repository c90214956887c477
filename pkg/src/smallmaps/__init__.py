"""Small maps over finite sets: classes of maps, their axioms, exact
completion, W-types, and the hereditarily finite universe as a set model."""
from __future__ import annotations

from .checks import (AxiomReport, check_axioms, scov, scov_comparison, SMALL_MAP_AXIOMS,
                     DISPLAY_AXIOMS, PASS, FAIL, INCONCLUSIVE, OUT_OF_SCOPE)
from .classes import Inconclusive, MapClass, find_covering, parse_class
from .core import FinMap, FinObj, Scope, Square, Subobject
from .formula import evaluate, parse_formula
from .hf import HFSet, universe
from .represent import Representation, pi_k, universal_small_map
from .settheory import build_v, check_axiom, fullness_set

__all__ = [
    "AxiomReport", "check_axioms", "scov", "scov_comparison", "SMALL_MAP_AXIOMS", "DISPLAY_AXIOMS",
    "PASS", "FAIL", "INCONCLUSIVE", "OUT_OF_SCOPE", "Inconclusive", "MapClass", "find_covering",
    "parse_class", "FinMap", "FinObj", "Scope", "Square", "Subobject", "evaluate", "parse_formula",
    "HFSet", "universe", "Representation", "pi_k", "universal_small_map", "build_v", "check_axiom",
    "fullness_set",
]
