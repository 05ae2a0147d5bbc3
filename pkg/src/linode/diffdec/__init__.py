"""Differential Thomas-style decomposition, plus Janet completion for
linear homogeneous systems."""

from .core import (
    COMPLETE,
    INCONCLUSIVE,
    INCONSISTENT,
    Budget,
    BudgetExceeded,
    Certificate,
    DecompositionResult,
    Decomposer,
    SimpleSystem,
    integrability_conditions,
    prem,
    pseudo_reduce,
    thomas_decompose,
    verify_certificate,
)
from .janet import JanetIndex, multiplicative
from .linear import LinearCompletion, complete_linear
from .ranking import DEFAULT_RANKING, Ranking, initial, is_unit, reductum, separant

__all__ = [
    "COMPLETE", "INCONCLUSIVE", "INCONSISTENT", "Budget", "BudgetExceeded", "Certificate",
    "DecompositionResult", "Decomposer", "SimpleSystem", "integrability_conditions", "prem",
    "pseudo_reduce", "thomas_decompose", "verify_certificate", "JanetIndex", "multiplicative",
    "LinearCompletion", "complete_linear", "DEFAULT_RANKING", "Ranking", "initial", "is_unit",
    "reductum", "separant",
]
