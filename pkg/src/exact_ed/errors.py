"""Exception hierarchy for the package; every class derives from ExactEDError."""


class ExactEDError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ExactEDError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedInstanceError(ExactEDError, ValueError):
    """The problem size cannot be handled (e.g. N < 5, where a group is empty)."""


class SolverError(ExactEDError, RuntimeError):
    """A root finder found no sign change.

    ``equation`` names the equation being solved and ``bracket`` the interval
    that was scanned, so the CLI can print a useful diagnostic.
    """

    def __init__(self, message, equation=None, bracket=None):
        super().__init__(message)
        self.equation = equation
        self.bracket = bracket


class DegeneratePhaseError(ExactEDError, ValueError):
    """beta is a multiple of 2*pi, so the inner walk acts as the identity."""


class IllConditionedError(ExactEDError, RuntimeError):
    pass


class ContractError(ExactEDError, ValueError):
    """Inputs were produced for a different instance (mismatched N, r, ...)."""


class ResourceError(ExactEDError, MemoryError):
    """Full state-vector dimension exceeds the configured cap."""

    def __init__(self, message, dimension=None, cap=None):
        super().__init__(message)
        self.dimension = dimension
        self.cap = cap


class ModelViolationError(ExactEDError, AssertionError):
    """The value register was found entangled beyond the deterministic pattern."""
