"""One entry point over all the ways of getting R."""

from .closedform import reflection_airy, reflection_asymptotic, reflection_fresnel
from .errors import DomainError
from .profile import FractionalProfile
from .propagate import ReflectionResult, reflection_shooting, reflection_volterra
from .volterra import SolveConfig

METHODS = ("volterra", "shooting", "airy", "asymptotic", "fresnel")


def reflection(alpha, theta, method="volterra", cfg=None, c_ratio=None, eta=0.0):
    """R for the ramp (alpha, theta) by the named method.

    ``fresnel`` is the sharp-interface case and uses ``c_ratio`` and ``eta``
    instead of theta; alpha must then be 0.
    """
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "fresnel":
        if alpha != 0:
            raise DomainError("fresnel is the alpha = 0 interface")
        if c_ratio is None:
            raise DomainError("fresnel needs c_ratio")
        return ReflectionResult(reflection_fresnel(c_ratio, eta), "fresnel",
                                {"est_error": 0.0})
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    if theta < 0:
        raise DomainError("theta must be >= 0")
    if method == "airy":
        if alpha != 1:
            raise DomainError("the airy method exists only for alpha = 1")
        R = reflection_airy(theta) if theta > 0 else 0j
        return ReflectionResult(R, "airy", {"est_error": 1e-13 * abs(R)})
    if method == "asymptotic":
        return ReflectionResult(reflection_asymptotic(alpha, theta), "asymptotic",
                                {"est_error": float("nan")})
    cfg = SolveConfig() if cfg is None else cfg
    p = FractionalProfile(alpha, theta)
    if method == "volterra":
        return reflection_volterra(p, cfg)
    return reflection_shooting(p, cfg)
