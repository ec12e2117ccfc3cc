"""Acoustic reflection from fractional-ramp interfaces c^-2 = 1 + theta x_+^alpha."""

from .closedform import (reflection_airy, reflection_asymptotic,
                         reflection_fresnel, remainder_exponent)
from .errors import (ContractionError, ConvergenceError, DomainError,
                     FracReflError, SolverError)
from .methods import METHODS, reflection
from .profile import FractionalProfile, PhysicalScenario, m_norm, theta_value
from .propagate import ReflectionResult, reflection_shooting, reflection_volterra
from .volterra import SolveConfig, solve_series

__all__ = [
    "ContractionError", "ConvergenceError", "DomainError", "FracReflError",
    "FractionalProfile", "METHODS", "PhysicalScenario", "ReflectionResult",
    "SolveConfig", "SolverError", "m_norm", "reflection", "reflection_airy",
    "reflection_asymptotic", "reflection_fresnel", "reflection_shooting",
    "reflection_volterra", "remainder_exponent", "solve_series", "theta_value",
]
