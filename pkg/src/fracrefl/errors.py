"""Exception hierarchy.

Argument-level problems derive from ``ValueError`` so callers that only care
about "bad input" can catch that; numerical failures derive from
``SolverError``.
"""


class FracReflError(Exception):
    """Base class for all package errors."""


class DomainError(FracReflError, ValueError):
    """An argument lies outside the domain of the operation."""


class GrazingIncidenceError(DomainError):
    """Transverse slowness fraction eta >= 1."""


class BranchCutError(DomainError):
    """Complex argument on the branch cut arg z = pi."""


class AliasingError(DomainError):
    """Sampling too coarse for the requested wavelet."""


class IllConditionedBandError(DomainError):
    """Incident spectrum too weak on the requested band."""


class PureIncomingError(DomainError):
    """u'(0)/u(0) = i, the reflection coefficient is unbounded."""


class DegenerateStateError(DomainError):
    """Both field and derivative vanish."""


class SolverError(FracReflError, RuntimeError):
    """Numerical procedure failed."""


class ContractionError(SolverError):
    """The Volterra kernel is not a contraction (M_x0 >= 2)."""


class ConvergenceError(SolverError):
    """Iteration or quadrature did not reach its tolerance."""


class StepSizeError(SolverError):
    """ODE integrator step size underflow."""
