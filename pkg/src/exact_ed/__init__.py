"""Exact quantum-walk algorithm for element distinctness with at most one colliding pair.

A parameter solver plus two simulators: an exact model on a 5-dimensional
invariant subspace, and a brute-force state vector on the quasi-Johnson graph.
"""

from .config import DEFAULT, Tolerances
from .errors import (
    ContractError, DegeneratePhaseError, DomainError, ExactEDError, ModelViolationError,
    ResourceError, SolverError, UnsupportedInstanceError,
)
from .params import AlgorithmParams, derive_structure, solve_params
from .reduced import build_reduced_model, run_reduced

__all__ = [
    "AlgorithmParams", "ContractError", "DEFAULT", "DegeneratePhaseError", "DomainError",
    "ExactEDError", "ModelViolationError", "ResourceError", "SolverError", "Tolerances",
    "UnsupportedInstanceError", "build_reduced_model", "derive_structure", "run_reduced",
    "solve_params",
]
