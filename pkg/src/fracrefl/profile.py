"""The fractional-ramp medium c(x)^-2 = 1 + theta * max(x, 0)**alpha.

Everything here is nondimensional: lengths are in units of the horizontal
wavelength over 2 pi.  ``PhysicalScenario`` maps dimensional inputs onto the
single strength parameter theta.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _quadrature as quad
from .errors import DomainError, GrazingIncidenceError

# geometric grading used for the x**alpha singularity at the interface
_GRADE_RATIO = 0.5
_GRADE_DEPTH = 52
_PHASE_ORDER = 16
_CHUNK = 2048


@dataclass(frozen=True)
class FractionalProfile:
    """Nondimensional fractional ramp.

    Parameters
    ----------
    alpha : float
        Exponent of the ramp, > 0.
    theta : float
        Reflector strength, >= 0.  ``theta == 0`` is the free medium.
    """

    alpha: float
    theta: float

    def __post_init__(self):
        if not np.isfinite(self.alpha) or self.alpha <= 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha!r}")
        if not np.isfinite(self.theta) or self.theta < 0:
            raise DomainError(f"theta must be >= 0, got {self.theta!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def is_free(self):
        return self.theta == 0.0

    # -- pointwise functions (vectorised, no domain checks) -----------------

    def ramp(self, x):
        """theta * max(x, 0)**alpha."""
        x = np.asarray(x, dtype=float)
        return self.theta * np.maximum(x, 0.0) ** self.alpha

    def slowness_squared(self, x):
        return 1.0 + self.ramp(x)

    def speed(self, x):
        return self.slowness_squared(x) ** -0.5

    def slowness(self, x):
        """1/c, i.e. the phase derivative."""
        return np.sqrt(self.slowness_squared(x))

    def amplitude(self, x):
        """WKB amplitude b = c**(1/2)."""
        return self.slowness_squared(x) ** -0.25

    def amplitude_prime(self, x):
        x = np.asarray(x, dtype=float)
        xp = np.maximum(x, 0.0)
        a = self.alpha
        if self.theta == 0.0:
            return np.zeros_like(xp)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = self.theta * a * xp ** (a - 1.0)
        d = np.where(x > 0, d, 0.0)
        return -0.25 * self.slowness_squared(x) ** -1.25 * d

    def coupling(self, x):
        """M = c**(1/2) (c**(1/2))'' for x > 0, differentiated analytically.

        M = (5/16) th^2 a^2 x^(2a-2) f^(-5/2) - (1/4) th a (a-1) x^(a-2) f^(-3/2)
        with f = 1 + th x^a.
        """
        x = np.asarray(x, dtype=float)
        if self.theta == 0.0:
            return np.zeros_like(x)
        a, th = self.alpha, self.theta
        X = th * x**a
        f = 1.0 + X
        return th * a * x ** (a - 2.0) * f**-1.5 * (
            (5.0 / 16.0) * a * X / f - 0.25 * (a - 1.0))

    def coupling_sign_change(self):
        """Location where M changes sign (alpha > 1 only), else None."""
        a = self.alpha
        if a <= 1.0 or self.theta == 0.0:
            return None
        X = (a - 1.0) / (a / 4.0 + 1.0)
        return (X / self.theta) ** (1.0 / a)

    def coupling_envelope_constant(self):
        """|M| ~ K theta^(-1/2) x^(-alpha/2 - 2) once theta x^alpha >> 1."""
        a = self.alpha
        return a * (a + 4.0) / 16.0

    def phase(self, x):
        """phi(x) = int_0^x 1/c.  Exact for x <= 0, panel quadrature otherwise."""
        x = np.asarray(x, dtype=float)
        out = x.copy()
        if self.theta == 0.0:
            return out
        pos = np.flatnonzero(x > 0)
        flat = out.reshape(-1)
        xs = x.reshape(-1)
        for start in range(0, len(pos), _CHUNK):
            idx = pos[start:start + _CHUNK]
            flat[idx] = xs[idx] + self._excess_phase(xs[idx])
        return out

    def _excess_integrand(self, y):
        X = self.theta * y**self.alpha
        return X / (1.0 + np.sqrt(1.0 + X))

    def _excess_phase(self, x):
        # int_0^x (sqrt(1 + th y^a) - 1) dy on geometric panels x*2^-k
        rel = quad.geometric_edges(1.0, _GRADE_RATIO, _GRADE_DEPTH)
        t, w = quad.gauss_legendre(_PHASE_ORDER)
        lo, hi = rel[:-1], rel[1:]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        ynode = (mid[:, None] + half[:, None] * t[None, :]).ravel()
        wnode = (half[:, None] * w[None, :]).ravel()
        y = x[:, None] * ynode[None, :]
        body = x * (self._excess_integrand(y) @ wnode)
        eps = x * rel[0]
        a = self.alpha
        head = 0.5 * self.theta * eps ** (a + 1.0) / (a + 1.0)
        return body + head


# -- physical inputs -------------------------------------------------------

@dataclass(frozen=True)
class PhysicalScenario:
    """Dimensional description of an incident plane-wave mode.

    c0 in m/s, ell in m, omega in rad/s, eta dimensionless transverse
    slowness fraction (sine of the incidence angle).
    """

    c0: float
    ell: float
    omega: float
    eta: float
    alpha: float

    def __post_init__(self):
        if not self.c0 > 0:
            raise DomainError(f"c0 must be > 0, got {self.c0!r}")
        if not self.ell > 0:
            raise DomainError(f"ell must be > 0, got {self.ell!r}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be > 0, got {self.alpha!r}")
        if not np.isfinite(self.omega):
            raise DomainError("omega must be finite")
        if self.omega == 0:
            raise DomainError("omega = 0 has no finite theta")
        if not 0 <= self.eta:
            raise DomainError(f"eta must be >= 0, got {self.eta!r}")
        if self.eta >= 1:
            raise GrazingIncidenceError(
                f"eta = {self.eta!r} >= 1 is grazing or evanescent incidence")

    @property
    def theta(self):
        return theta_from_physical(self)

    def profile(self):
        return FractionalProfile(self.alpha, self.theta)


def theta_value(c0, ell, omega, eta, alpha):
    """(c0/(ell |omega|))**alpha * (1 - eta^2)**(-(alpha+2)/2), vectorised in omega."""
    eta = float(eta)
    if eta >= 1:
        raise GrazingIncidenceError(f"eta = {eta!r} >= 1")
    omega = np.abs(np.asarray(omega, dtype=float))
    with np.errstate(divide="ignore"):
        ratio = c0 / (ell * omega)
    return ratio**alpha * (1.0 - eta * eta) ** (-(alpha + 2.0) / 2.0)


def theta_from_physical(s):
    """Strength parameter theta for a ``PhysicalScenario``."""
    return float(theta_value(s.c0, s.ell, s.omega, s.eta, s.alpha))


# -- module-level operations -----------------------------------------------

def sound_speed(p, x):
    return p.speed(x)


def wkb_phase(p, x):
    return p.phase(x)


def coupling_M(p, x):
    """M(x) for x > 0; raises ``DomainError`` otherwise (singular at 0 for alpha < 2)."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("coupling_M is defined for x > 0 only")
    return p.coupling(xa)


class WkbWave:
    """One-term WKB wave b(x) exp(-+ i phi(x)).

    ``direction`` is ``">"`` (right-going, exp(-i phi)) or ``"<"``.
    With ``order=0`` the amplitude is dropped (w waves).
    """

    def __init__(self, profile, direction, order=1):
        if direction not in (">", "<"):
            raise ValueError("direction must be '>' or '<'")
        self.profile = profile
        self.direction = direction
        self.order = order
        self._sign = -1.0 if direction == ">" else 1.0

    def __call__(self, x):
        p = self.profile
        b = p.amplitude(x) if self.order else 1.0
        return b * np.exp(1j * self._sign * p.phase(x))

    def derivative(self, x):
        p = self.profile
        e = np.exp(1j * self._sign * p.phase(x))
        k = p.slowness(x)
        if not self.order:
            return 1j * self._sign * k * e
        b = p.amplitude(x)
        return (p.amplitude_prime(x) + 1j * self._sign * b * k) * e


def _m_norm_edges(p, x0):
    a, th = p.alpha, p.theta
    # integrate until theta x^alpha ~ 1e8, then use the envelope asymptote
    x_end = max(x0 * 2.0, (1e8 / th) ** (1.0 / a))
    n = int(np.ceil(np.log2(x_end / x0)))
    edges = x0 * 2.0 ** np.arange(n + 1)
    xs = p.coupling_sign_change()
    if xs is not None and x0 < xs < edges[-1]:
        edges = np.sort(np.append(edges, xs))
    return edges


def m_norm(p, x0):
    """M_x0 = int_{x0}^inf |M(x)| dx."""
    if not x0 > 0:
        raise DomainError("x0 must be > 0")
    if p.theta == 0.0:
        return 0.0
    edges = _m_norm_edges(p, x0)
    x, w, _ = quad.panel_nodes(edges, 24)
    body = float(np.sum(np.abs(p.coupling(x)) * w))
    X = edges[-1]
    s = p.alpha / 2.0 + 1.0
    tail = p.coupling_envelope_constant() * p.theta**-0.5 * X**-s / s
    return body + tail


class ContractionCheck(NamedTuple):
    ok: bool
    m_norm: float
    margin: float


def check_contraction(p, x0):
    """Whether int_{x0}^inf |M| < 2, with the margin 2 - M_x0."""
    m = m_norm(p, x0)
    return ContractionCheck(m < 2.0, m, 2.0 - m)
