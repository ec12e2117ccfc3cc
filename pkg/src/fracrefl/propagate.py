"""From the radiation data at x0 to the reflection coefficient at x = 0.

Two routes:

* ``reflection_volterra``: Volterra series on [x0, inf), then direct
  integration of u'' + (1 + theta x^alpha) u = 0 back to the interface.
* ``reflection_shooting``: start from a corrected WKB outgoing wave far out
  and integrate the Riccati equation for q = u'/u straight down to 0.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (ContractionError, DegenerateStateError, DomainError,
                     PureIncomingError, StepSizeError)
from .profile import check_contraction
from .volterra import SolveConfig, solve_series

RTOL = 1e-11
ATOL = 1e-13
# step ceiling in phase units
MAX_PHASE_STEP = math.pi / 20.0
X0_FALLBACK_LIMIT = 16.0
# largest phase span (radians) an oscillation-resolving pass may cover
PHASE_BUDGET = 2e4


class BoundaryState(NamedTuple):
    u: complex
    du: complex
    x: float


@dataclass
class ReflectionResult:
    R: complex
    method: str
    diagnostics: dict = field(default_factory=dict)


def flux(state):
    """Im(u' conj(u)), conserved by the real-coefficient equation."""
    return (state.du * np.conj(state.u)).imag


def outgoing_initial_data(p, x0, R_x0):
    """u = v>(x0) + R_x0 v<(x0) and its derivative."""
    if not x0 > 0:
        raise DomainError("x0 must be > 0")
    b = float(p.amplitude(x0))
    db = float(p.amplitude_prime(x0))
    k = float(p.slowness(x0))
    e = np.exp(-1j * float(p.phase(x0)))
    ec = 1.0 / e
    u = b * e + R_x0 * b * ec
    du = (db - 1j * b * k) * e + R_x0 * (db + 1j * b * k) * ec
    if u == 0 and du == 0:
        raise DegenerateStateError("outgoing data vanish identically")
    return BoundaryState(complex(u), complex(du), float(x0))


def _rhs(p):
    def f(x, y):
        return [y[1], -(1.0 + p.theta * max(x, 0.0) ** p.alpha) * y[0]]
    return f


def check_phase_budget(p, a, b):
    """StepSizeError if resolving [a, b] means tracking too many oscillations."""
    span = float(p.phase(b) - p.phase(a))
    if span > PHASE_BUDGET:
        raise StepSizeError(
            f"phase advances {span:.3g} rad over [{a:g}, {b:g}]; theta too large "
            f"for step-resolved integration (budget {PHASE_BUDGET:g})")


def integrate_cauchy(p, start, to_x=0.0):
    """Integrate (u, u') from ``start.x`` down to ``to_x``."""
    if not start.x > to_x >= 0:
        raise DomainError("need start.x > to_x >= 0")
    check_phase_budget(p, to_x, start.x)
    max_step = MAX_PHASE_STEP / float(p.slowness(start.x))
    sol = solve_ivp(_rhs(p), (start.x, to_x), [start.u, start.du],
                    method="DOP853", rtol=RTOL, atol=ATOL, max_step=max_step)
    if sol.status != 0:
        raise StepSizeError(sol.message)
    u, du = sol.y[:, -1]
    return BoundaryState(complex(u), complex(du), float(to_x))


def extract_R(state):
    """R = (q + i)/(i - q), q = u'(0)/u(0); u(0) = 0 gives R = -1."""
    if state.x != 0:
        raise DomainError("state must be taken at x = 0")
    u, du = complex(state.u), complex(state.du)
    if u == 0 and du == 0:
        raise DegenerateStateError("u(0) = u'(0) = 0")
    den = 1j * u - du
    if abs(den) <= 1e-15 * abs(u):
        raise PureIncomingError("u'(0)/u(0) = i: purely incoming, R unbounded")
    return (du + 1j * u) / den


def admissible_x0(p, x0, limit=X0_FALLBACK_LIMIT):
    """Smallest x0 * 2^j (<= limit) at which K is a contraction."""
    while True:
        chk = check_contraction(p, x0)
        if chk.ok:
            return x0
        if x0 * 2 > limit:
            raise ContractionError(
                f"no contraction up to x0 = {x0}: int |M| = {chk.m_norm:.4g}")
        x0 *= 2.0


def reflection_volterra(p, cfg=SolveConfig()):
    """Volterra series on [x0, inf) followed by ODE integration to 0."""
    if p.theta == 0.0:
        return ReflectionResult(0j, "volterra", {
            "m_norm": 0.0, "iterations": 0, "x_max": None, "est_error": 0.0,
            "x0_used": cfg.x0})
    x0 = admissible_x0(p, cfg.x0)
    if x0 != cfg.x0:
        cfg = dataclasses.replace(cfg, x0=x0, x_max_start=None)
    check_phase_budget(p, 0.0, cfg.start_x_max())
    sol = solve_series(p, cfg)
    state = outgoing_initial_data(p, x0, sol.r_x0)
    end = integrate_cauchy(p, state, 0.0)
    R = extract_R(end)
    ratio = sol.m_norm / 2.0
    est = (sol.term_norms[-1] / (1.0 - ratio) + cfg.tol_tail * abs(sol.r_x0)
           + RTOL * (1.0 + abs(R)))
    return ReflectionResult(R, "volterra", {
        "m_norm": sol.m_norm, "iterations": sol.iterations, "x_max": sol.x_max,
        "est_error": est, "x0_used": x0, "r_x0": sol.r_x0})


# -- shooting ---------------------------------------------------------------

def _wkb_correction(p, x):
    """Outgoing impedance q and a truncation estimate at x.

    The outgoing solution is b e^{-i phi} (1 + beta) + ..., with G = M/phi'
    and derivatives taken in phase units,
        beta = -G/4 + (i/8) dG/dphi.
    """
    h = 1e-3 * x

    def G(y):
        return p.coupling(y) / p.slowness(y)

    xs = np.array([x - 2 * h, x - h, x, x + h, x + 2 * h])
    g = G(xs)
    k = float(p.slowness(x))
    d1 = (g[0] - 8 * g[1] + 8 * g[3] - g[4]) / (12 * h) / k
    d2 = (-g[0] + 16 * g[1] - 30 * g[2] + 16 * g[3] - g[4]) / (12 * h * h) / k**2
    beta = -g[2] / 4.0 + 0.125j * d1
    b = float(p.amplitude(x))
    db = float(p.amplitude_prime(x))
    q = ((db - 1j * b * k) + beta * (db + 1j * b * k)) / (b * (1.0 + beta))
    est = abs(d2) / 16.0 + abs(float(p.coupling(x)) * g[2]) / 4.0
    return q, est


def _riccati(p):
    def f(x, y):
        return [-(1.0 + p.theta * max(x, 0.0) ** p.alpha) - y[0] * y[0]]
    return f


def reflection_shooting(p, cfg=SolveConfig(), tol=1e-12, x_start=None):
    """WKB shooting: corrected outgoing impedance at X, Riccati back to 0."""
    if p.theta == 0.0:
        return ReflectionResult(0j, "shooting", {"x_max": None, "est_error": 0.0})
    X = max(cfg.x0 + 20.0, 8.0) if x_start is None else x_start
    q, est = _wkb_correction(p, X)
    while est > tol:
        X *= 2.0
        q, est = _wkb_correction(p, X)
    check_phase_budget(p, 0.0, X)
    max_step = MAX_PHASE_STEP / float(p.slowness(X)) * 20.0
    sol = solve_ivp(_riccati(p), (X, 0.0), [q], method="DOP853",
                    rtol=RTOL / 10, atol=ATOL, max_step=max_step)
    if sol.status != 0:
        raise StepSizeError(sol.message)
    q0 = complex(sol.y[0, -1])
    R = extract_R(BoundaryState(1.0 + 0j, q0, 0.0))
    return ReflectionResult(R, "shooting", {"x_max": X, "est_error": est + RTOL})
