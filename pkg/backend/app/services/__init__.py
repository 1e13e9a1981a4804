"""
Services for the heaviest-cycle bound verifier
"""

from .cycle_engine import CycleEngine, two_opt_swap
from .equality_lab import EqualityLab, solve_linear_exact, solve_vertex_induced
from .inequality_verifier import InequalityVerifier, classify_gap

__all__ = [
    "CycleEngine",
    "EqualityLab",
    "InequalityVerifier",
    "classify_gap",
    "solve_linear_exact",
    "solve_vertex_induced",
    "two_opt_swap",
]
