"""Exact computation in R. Thompson's groups F and T.

Elements are exact piecewise-linear maps (:mod:`thompson.plhomeo`) with tree-pair
diagrams for F (:mod:`thompson.treepair`).  :mod:`thompson.witness` builds and
replays normalish witnesses; :mod:`thompson.analysis` checks the orbital and
fixed-set hypotheses for copies of F and free subgroups.
"""

from thompson.catalog import B, X0, X1, base_generator, rotation, transplant
from thompson.exprlang import eval_expr, parse
from thompson.plhomeo import (
    CircleMap,
    PLMap,
    compose,
    conjugate,
    evaluate,
    fixed_set,
    invert,
    support,
    validate,
)
from thompson.treepair import TreePair

__all__ = [
    "B", "X0", "X1", "base_generator", "rotation", "transplant",
    "eval_expr", "parse",
    "CircleMap", "PLMap", "compose", "conjugate", "evaluate", "fixed_set", "invert",
    "support", "validate",
    "TreePair",
]
