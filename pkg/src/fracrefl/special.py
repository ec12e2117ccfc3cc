"""Special functions and oscillatory quadrature.

* ``gamma_fn``: Lanczos approximation (g = 7, 9 terms) with reflection.
* ``airy_ai_complex``: Ai and Ai' for complex z.  Maclaurin series where it
  is well conditioned, the large-|z| asymptotic series where its optimally
  truncated remainder is below double precision, and Taylor continuation
  of the Airy ODE (integrated radially inward from the asymptotic zone) in
  the sector where Ai is recessive and the series cancels.
* ``osc_integral``: int_a^b f(y) exp(-2 i k phi(y)) dy for a profile phase phi.
"""

import cmath
import math
from typing import NamedTuple

import numpy as np

from . import _quadrature as quad
from .errors import BranchCutError, ConvergenceError, DomainError

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(x):
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    x -= 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * s


def gamma_fn(x):
    """Gamma function for real x > 0."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x == round(x) and x <= 30:
        return float(math.factorial(int(x) - 1))
    return _lanczos(x)


def power_2i(p):
    """(2i)**p on the principal branch, 2**p * exp(i pi p / 2)."""
    return 2.0**p * cmath.exp(0.5j * math.pi * p)


# -- Airy -------------------------------------------------------------------

class AiryPair(NamedTuple):
    ai: complex
    ai_prime: complex


_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * _lanczos(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * _lanczos(1.0 / 3.0))
_EPS = np.finfo(float).eps
_OMEGA = cmath.exp(2j * math.pi / 3.0)
_OMEGA2 = _OMEGA * _OMEGA

# radius beyond which the asymptotic series is used unconditionally
AIRY_ASYMPTOTIC_RADIUS = 9.0
# series accepted when its cancellation estimate is below this
_SERIES_RTOL = 1e-13


def airy_series(z):
    """Maclaurin series.  Returns (Ai, Ai', relative rounding estimate)."""
    z = complex(z)
    z3 = z * z * z
    f, fp, g, gp = 1.0 + 0j, 0j, z, 1.0 + 0j
    tf, tg = 1.0 + 0j, z
    tfp, tgp = 0.5 * z * z, 1.0 + 0j
    fp = tfp
    mag = abs(_AI0) + abs(_AIP0 * z)
    for k in range(0, 400):
        tf = tf * z3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * z3 / ((3 * k + 3) * (3 * k + 4))
        tgp = tgp * z3 / ((3 * k + 1) * (3 * k + 3))
        tfp = tfp * z3 / ((3 * k + 3) * (3 * k + 5))
        f += tf
        g += tg
        fp += tfp
        gp += tgp
        mag += abs(_AI0 * tf) + abs(_AIP0 * tg)
        if abs(tf) + abs(tg) + abs(tfp) + abs(tgp) < 1e-18 * (
                abs(f) + abs(g) + abs(fp) + abs(gp)):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    est = 8 * _EPS * mag / max(abs(ai), 1e-300)
    return ai, aip, est


def _asymptotic_sums(zeta):
    """Optimally truncated sums U, V, U - V and the first omitted term size."""
    u = 1.0
    U = 1.0 + 0j
    V = 1.0 + 0j
    D = 0j
    prev = math.inf
    w = 1.0 + 0j
    last = 0.0
    for k in range(1, 200):
        u = u * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        v = -(6 * k + 1) / (6 * k - 1) * u
        w = -w / zeta
        tu, tv = u * w, v * w
        size = max(abs(tu), abs(tv))
        if size >= prev:
            last = size
            break
        U += tu
        V += tv
        D += tu - tv
        prev = size
        last = size
        if size < 1e-18:
            break
    return U, V, D, last


def airy_asymptotic(z):
    """Large-|z| expansion valid for |arg z| < pi.

    Returns (Ai, Ai', error estimate relative to the leading term).
    """
    z = complex(z)
    zeta = (2.0 / 3.0) * z**1.5
    U, V, _, err = _asymptotic_sums(zeta)
    pre = cmath.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    q = z**0.25
    return pre / q * U, -pre * q * V, err


def airy_log_derivative(z):
    """Ai'(z)/Ai(z) + sqrt(z) from the asymptotic series, free of cancellation.

    Only meaningful for |z| >= AIRY_ASYMPTOTIC_RADIUS.
    """
    z = complex(z)
    zeta = (2.0 / 3.0) * z**1.5
    U, _, D, _ = _asymptotic_sums(zeta)
    return cmath.sqrt(z) * D / U


def _taylor_step(z0, y, yp, h):
    # Ai'' = z Ai about z0: a_m = (z0 a_{m-2} + a_{m-3}) / ((m-1) m)
    a3, a2, a1 = 0j, y, yp
    val = y + yp * h
    der = yp + 0j
    hp = h
    quiet = 0
    for m in range(2, 300):
        am = (z0 * a2 + a3) / ((m - 1) * m)
        a3, a2, a1 = a2, a1, am
        td = m * am * hp
        hp = hp * h
        tv = am * hp
        val += tv
        der += td
        if abs(tv) + abs(td) < 1e-18 * (abs(val) + abs(der)):
            quiet += 1
            if quiet > 3:
                break
        else:
            quiet = 0
    return val, der


def _airy_taylor(z):
    r = abs(z)
    z_far = z * (AIRY_ASYMPTOTIC_RADIUS / r)
    y, yp, _ = airy_asymptotic(z_far)
    steps = max(1, int(math.ceil((AIRY_ASYMPTOTIC_RADIUS - r) / 0.4)))
    h = (z - z_far) / steps
    zc = z_far
    for _ in range(steps):
        y, yp = _taylor_step(zc, y, yp, h)
        zc = zc + h
    return y, yp


def airy_ai_complex(z):
    """Ai(z) and Ai'(z) for complex z with |arg z| < pi."""
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        raise BranchCutError("arg z = pi lies on the branch cut of z**(3/2)")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("non-finite argument")
    if abs(cmath.phase(z)) > 2.0 * math.pi / 3.0:
        ai, aip, est = airy_series(z)
        if est < _SERIES_RTOL:
            return AiryPair(ai, aip)
        # Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0 rotates into |arg| < pi/3
        p1 = airy_ai_complex(_OMEGA * z)
        p2 = airy_ai_complex(_OMEGA2 * z)
        return AiryPair(-_OMEGA * p1.ai - _OMEGA2 * p2.ai,
                        -_OMEGA2 * p1.ai_prime - _OMEGA * p2.ai_prime)
    r = abs(z)
    if r >= AIRY_ASYMPTOTIC_RADIUS:
        ai, aip, _ = airy_asymptotic(z)
        return AiryPair(ai, aip)
    ai, aip, est = airy_series(z)
    if est < _SERIES_RTOL:
        return AiryPair(ai, aip)
    ai, aip = _airy_taylor(z)
    return AiryPair(ai, aip)


# -- oscillatory quadrature --------------------------------------------------

_LEVIN_N = 32
_LEVIN_CHECK_N = 20
_PANEL_ORDER = 16
_MAX_LEVIN_PANELS = 400
# start of the Levin zone for semi-infinite integrals
LEVIN_START = 8.0


def phase_panel_edges(profile, a, b, k=1.0, max_advance=0.5 * math.pi,
                      graded=False, width_ratio=0.5):
    """Panel edges on [a, b] with 2|k| phi advancing at most ``max_advance``.

    Panels are also kept narrower than ``width_ratio * x`` so the x**(alpha-2)
    behaviour of M is resolved, and optionally graded geometrically into a = 0.
    """
    kk = abs(k)
    edges = []
    x = a
    if graded and a == 0.0:
        top = min(b, 1.0)
        edges.extend(quad.geometric_edges(top)[:-1].tolist())
        edges[0] = 0.0
        x = top
    edges.append(x)
    while x < b:
        s = float(profile.slowness(x))
        h = max_advance / (2.0 * kk * s)
        if x > 0:
            h = min(h, width_ratio * x)
        while h > 1e-14 * max(1.0, x) and 2.0 * kk * float(profile.slowness(x + h)) * h > max_advance:
            h *= 0.8
        x = min(b, x + h)
        if b - x < 1e-12 * max(1.0, b):
            x = b
        edges.append(x)
    return np.asarray(edges)


def panel_phases(profile, edges, x_nodes, h):
    """Phase at panel nodes from phi(edges[0]) and cumulative slowness."""
    phi0 = float(profile.phase(edges[0]))
    at_nodes, at_edges = quad.cumulative_panels(profile.slowness(x_nodes), h)
    return phi0 + at_nodes, phi0 + at_edges


def _levin_panel(f, profile, a, b, phi_a, k, n):
    xc, D = quad.chebyshev_lobatto(n)
    x = 0.5 * (a + b) + 0.5 * (b - a) * xc
    A = D * (2.0 / (b - a)) - 2j * k * np.diag(profile.slowness(x))
    rhs = np.asarray(f(x), dtype=complex)
    p = np.linalg.solve(A, rhs)
    t, w = quad.gauss_legendre(32)
    y = 0.5 * (a + b) + 0.5 * (b - a) * t
    phi_b = phi_a + 0.5 * (b - a) * float(profile.slowness(y) @ w)
    ea = np.exp(-2j * k * phi_a)
    eb = np.exp(-2j * k * phi_b)
    # Lobatto points run from b (index 0) to a (index n)
    return p[0] * eb - p[-1] * ea, phi_b, abs(p[0] * eb)


def _levin_tail(f, profile, a, k, tol, phi_a):
    total = 0j
    x = a
    phi = phi_a
    width = max(a, 1.0)
    for _ in range(_MAX_LEVIN_PANELS):
        b = x + width
        hi, phi_b, edge = _levin_panel(f, profile, x, b, phi, k, _LEVIN_N)
        lo, _, _ = _levin_panel(f, profile, x, b, phi, k, _LEVIN_CHECK_N)
        scale = max(abs(total + hi), 1e-300)
        if abs(hi - lo) > tol * scale and width > 1e-3 * max(1.0, x):
            width *= 0.5
            continue
        total += hi
        x, phi = b, phi_b
        if edge <= tol * max(abs(total), 1e-300) or edge == 0.0:
            return total
        width = x
    raise ConvergenceError("oscillatory tail did not converge within the panel budget")


def osc_integral(f, a, b, profile, k=1.0, tol=1e-13, graded=None):
    """int_a^b f(y) exp(-2 i k phi(y)) dy with phi the profile phase.

    ``f`` is a vectorised callable.  ``b`` may be ``math.inf``; the tail past
    ``max(a, LEVIN_START)`` is then integrated by Levin collocation on
    doubling panels and truncated once the boundary term of the
    non-oscillatory antiderivative falls below ``tol`` relative to the
    running total.  ``k`` may be complex (k = 1 + i sigma with sigma <= 0).
    """
    a = float(a)
    if b <= a:
        return 0j
    if graded is None:
        graded = a == 0.0
    infinite = math.isinf(b)
    split = max(a, LEVIN_START) if infinite else b
    total = 0j
    phi_split = None
    if split > a:
        edges = phase_panel_edges(profile, a, split, k=k, graded=graded)
        x, w, h = quad.panel_nodes(edges, _PANEL_ORDER)
        phi_nodes, phi_edges = panel_phases(profile, edges, x, h)
        vals = np.asarray(f(x), dtype=complex)
        total = complex(np.sum(vals * np.exp(-2j * k * phi_nodes) * w))
        phi_split = float(phi_edges[-1])
    if infinite:
        if phi_split is None:
            phi_split = float(profile.phase(split))
        total += _levin_tail(f, profile, split, k, tol, phi_split)
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise ConvergenceError("non-finite oscillatory integral")
    return total


def gamma_identity_residual(alpha, x0, n):
    """|LHS - RHS| of the split Gamma identity at (alpha, x0, n).

    LHS = Gamma(alpha+1)/(2i)^(alpha+1).  RHS = int_0^x0 y^a e^{-2iy}
    + (2i)^-n int_x0^inf (d^n y^a) e^{-2iy} + e^{-2ix0} sum_p (d^p y^a)(x0)/(2i)^(p+1).
    """
    from .profile import FractionalProfile

    alpha, x0 = float(alpha), float(x0)
    if alpha <= 0 or x0 <= 0 or n < 1:
        raise DomainError("need alpha > 0, x0 > 0, n >= 1")
    free = FractionalProfile(1.0, 0.0)

    def falling(p):
        c = 1.0
        for j in range(p):
            c *= alpha - j
        return c

    cn = falling(n)
    if cn != 0.0 and alpha - n >= -1.0:
        raise DomainError("d^n(y^alpha) is not integrable at infinity; increase n")
    lhs = gamma_fn(alpha + 1.0) / power_2i(alpha + 1.0)
    rhs = osc_integral(lambda y: y**alpha, 0.0, x0, free)
    if cn != 0.0:
        rhs += osc_integral(lambda y: cn * y ** (alpha - n), x0, math.inf, free) / power_2i(n)
    e = cmath.exp(-2j * x0)
    for p in range(n):
        rhs += e * falling(p) * x0 ** (alpha - p) / power_2i(p + 1)
    return abs(lhs - rhs)
