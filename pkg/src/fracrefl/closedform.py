"""Reference formulas: small-theta asymptotics, the exact alpha = 1 case
and the sharp-interface (alpha = 0) Fresnel coefficient."""

import cmath
import math

from .errors import DomainError
from .special import (AIRY_ASYMPTOTIC_RADIUS, airy_ai_complex,
                      airy_log_derivative, gamma_fn)

_E_PI3 = cmath.exp(1j * math.pi / 3.0)


def reflection_asymptotic(alpha, theta):
    """Leading small-theta coefficient Gamma(alpha+1) theta / (2i)^(alpha+2)."""
    alpha, theta = float(alpha), float(theta)
    if not alpha > 0:
        raise DomainError("alpha must be > 0; alpha = 0 is the Fresnel case")
    if theta < 0:
        raise DomainError("theta must be >= 0")
    mod = gamma_fn(alpha + 1.0) * 2.0 ** -(alpha + 2.0)
    return mod * cmath.exp(-0.5j * math.pi * (alpha + 2.0)) * theta


def remainder_exponent(alpha):
    """Exponent e in R - R_asymptotic = O(theta^(1+e))."""
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    return min(1.0 / alpha, 1.0)


def reflection_airy(theta):
    """Exact coefficient of the linear ramp c^-2 = 1 + theta x.

    The outgoing solution is Ai(e^{i pi/3} theta^{1/3} (x + 1/theta)), so
    with z = e^{i pi/3} beta, beta = theta^(-2/3), and rho = Ai'(z)/Ai(z),

        q = u'(0)/u(0) = e^{i pi/3} theta^{1/3} rho,
        q + i = e^{i pi/3} theta^{1/3} (rho + sqrt z) =: D,
        R = D / (2i - D).

    For |z| beyond the asymptotic radius rho + sqrt z comes from the scaled
    expansion directly, which avoids both overflow and cancellation.
    """
    theta = float(theta)
    if not theta > 0 or not math.isfinite(theta):
        raise DomainError("theta must be > 0 and finite")
    beta = theta ** (-2.0 / 3.0)
    z = _E_PI3 * beta
    if abs(z) >= AIRY_ASYMPTOTIC_RADIUS:
        shifted = airy_log_derivative(z)
    else:
        pair = airy_ai_complex(z)
        shifted = pair.ai_prime / pair.ai + cmath.sqrt(z)
    D = _E_PI3 * theta ** (1.0 / 3.0) * shifted
    return D / (2j - D)


def reflection_fresnel(c_ratio, eta):
    """Sharp-interface coefficient with c_ratio = c_minus / c_plus.

    An evanescent transmitted root is taken as +i sqrt(|.|).
    """
    c_ratio, eta = float(c_ratio), float(eta)
    if not c_ratio > 0:
        raise DomainError("c_ratio must be > 0")
    if not 0.0 <= eta < 1.0:
        raise DomainError("eta must lie in [0, 1)")
    d = c_ratio * c_ratio - eta * eta
    top = math.sqrt(d) if d >= 0 else 1j * math.sqrt(-d)
    bottom = math.sqrt(1.0 - eta * eta)
    return complex((top - bottom) / (top + bottom))
