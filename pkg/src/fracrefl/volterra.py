"""Volterra series for the outgoing solution on [x0, inf).

The unknown is kept in its slowly varying form s(x) = S(x) exp(2ik phi(x)),
k = 1 + i sigma, which satisfies

    s = 1 + (1/2ik) [ int_{x0}^x M s  +  e^{2ik phi(x)} int_x^inf M s e^{-2ik phi} ].

The series s = sum_n T_n, T_0 = 1, T_{n+1} = K T_n, is summed on a
Gauss-Legendre panel grid over [x0, X_max].  Past X_max every term has the
exact form a + b e^{2ik phi} up to a drift of relative size int_X^inf |M|,
and a(X), b(X) fall out of the previous application of K, so the tail of
each integral reduces to two precomputed constants.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline

from . import _quadrature as quad
from .errors import ContractionError, ConvergenceError, DomainError
from .profile import check_contraction
from .special import osc_integral, panel_phases, phase_panel_edges


@dataclass(frozen=True)
class SolveConfig:
    """Numerical knobs for the Volterra solver.

    ``x_max_start`` defaults to ``x0 + 20``; X_max then grows by
    ``x_max_growth`` until R_x0 moves by less than ``tol_tail`` (relative).
    """

    x0: float = 1.0
    tol_fixed_point: float = 1e-12
    tol_tail: float = 1e-10
    max_iter: int = 200
    quadrature_order: int = 16
    x_max_start: float | None = None
    x_max_growth: float = 1.5
    max_nodes: int = 2_000_000

    def __post_init__(self):
        if not self.x0 > 0:
            raise DomainError("x0 must be > 0")
        if not (self.tol_fixed_point > 0 and self.tol_tail > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")
        if self.quadrature_order < 2:
            raise DomainError("quadrature_order must be >= 2")
        if not self.x_max_growth > 1:
            raise DomainError("x_max_growth must exceed 1")

    def start_x_max(self):
        return self.x_max_start if self.x_max_start is not None else self.x0 + 20.0


@dataclass
class SampledSolution:
    """s(x) = S(x) exp(2ik phi(x)) at the grid nodes on [x0, x_max]."""

    nodes: np.ndarray
    values: np.ndarray
    x0: float
    x_max: float
    term_norms: list
    r_x0: complex = 0j
    m_norm: float = 0.0
    sigma: float = 0.0
    phases: np.ndarray = field(default=None, repr=False)

    @property
    def iterations(self):
        return len(self.term_norms) - 1

    def __call__(self, x):
        """Piecewise-cubic interpolant of the slowly varying factor."""
        spline = CubicSpline(self.nodes, self.values)
        return spline(x)

    def full(self):
        """S at the nodes."""
        k = 1.0 + 1j * self.sigma
        return self.values * np.exp(-2j * k * self.phases)


class SampledFunction(NamedTuple):
    nodes: np.ndarray
    values: np.ndarray


def _coupling_partial(p, X, y):
    """int_X^y M for y >= X, in the variable u = log(x/X)."""
    y = np.asarray(y, dtype=float)
    t, w = quad.gauss_legendre(48)
    span = np.log(y / X)
    u = 0.5 * span[..., None] * (t + 1.0)
    x = X * np.exp(u)
    return 0.5 * span * np.sum(p.coupling(x) * x * w, axis=-1)


class _Grid:
    """Panel grid on [x0, X] with everything K needs precomputed."""

    def __init__(self, p, x0, x_max, order, sigma=0.0, max_nodes=None):
        self.k = 1.0 + 1j * sigma
        edges = phase_panel_edges(p, x0, x_max, k=1.0, width_ratio=0.25)
        if max_nodes is not None and (len(edges) - 1) * order > max_nodes:
            raise ConvergenceError(
                f"grid to X_max = {x_max:.4g} needs more than {max_nodes} nodes")
        self.edges = edges
        self.x, self.w, self.h = quad.panel_nodes(edges, order)
        self.phi, phi_edges = panel_phases(p, edges, self.x, self.h)
        self.M = p.coupling(self.x)
        self.E = np.exp(2j * self.k * self.phi)
        self.Einv = np.exp(-2j * self.k * self.phi)
        self.J = osc_integral(p.coupling, x_max, math.inf, p, k=self.k)
        # second-order tail: the drift of A and the e^{2ik phi} B part of a
        # term both reduce to L = int_X^inf M m e^{-2ik phi}, m = int_X^y M
        self.L = osc_integral(lambda y: p.coupling(y) * _coupling_partial(p, x_max, y),
                              x_max, math.inf, p, k=self.k)

    def apply(self, s, a, a_prev=None):
        """K applied to a term with node values s.

        Past X the term is a + O(M) with ``a`` its level there; the O(M) part
        is fixed by the previous term's level ``a_prev`` (None for the
        constant first term, whose tail is exactly a J).
        Returns (K s at nodes, its level a, int_{x0}^inf M s e^{-2ik phi}).
        """
        A_nodes, A_edges = quad.cumulative_panels(self.M * s, self.h)
        C_nodes, C_edges = quad.cumulative_panels(self.M * s * self.Einv, self.h)
        tail = a * self.J
        if a_prev is not None:
            tail += a_prev * self.L / (1j * self.k)
        B_nodes = (C_edges[-1] - C_nodes) + tail
        c = 1.0 / (2j * self.k)
        out = c * (A_nodes + self.E * B_nodes)
        return out, c * A_edges[-1], C_edges[-1] + tail


def _require_contraction(p, x0):
    chk = check_contraction(p, x0)
    if not chk.ok:
        raise ContractionError(
            f"int_x0^inf |M| = {chk.m_norm:.6g} >= 2 at x0 = {x0}; increase x0")
    return chk.m_norm


def _sum_series(grid, cfg):
    s = np.ones_like(grid.x, dtype=complex)
    a_prev, a = None, 1.0 + 0j
    term, a_next, integral = grid.apply(s.copy(), a)
    norms = [1.0]
    for _ in range(cfg.max_iter):
        a_prev, a = a, a_next
        size = float(np.max(np.abs(term)))
        norms.append(size)
        s += term
        term, a_next, part = grid.apply(term, a, a_prev)
        integral += part
        if size < cfg.tol_fixed_point:
            return s, norms, integral
    raise ConvergenceError(
        f"series did not reach {cfg.tol_fixed_point} in {cfg.max_iter} terms")


def _solve_on(p, cfg, x_max, sigma):
    grid = _Grid(p, cfg.x0, x_max, cfg.quadrature_order, sigma, cfg.max_nodes)
    s, norms, integral = _sum_series(grid, cfg)
    r = integral / (2j * grid.k)
    return grid, s, norms, r


def solve_series(p, cfg=SolveConfig(), sigma=0.0):
    """Sum the Volterra series, growing X_max until R_x0 settles.

    ``sigma`` (<= 0) selects the damped kernel used only for consistency checks.
    """
    if sigma > 0:
        raise DomainError("sigma must be <= 0")
    mn = _require_contraction(p, cfg.x0) if p.theta > 0 else 0.0
    x_max = cfg.start_x_max()
    if p.theta == 0.0:
        grid = _Grid(p, cfg.x0, x_max, cfg.quadrature_order, sigma)
        s = np.ones_like(grid.x, dtype=complex)
        return _pack(grid, s, [1.0], 0j, cfg, x_max, mn, sigma)
    grid, s, norms, r = _solve_on(p, cfg, x_max, sigma)
    while True:
        x_next = x_max * cfg.x_max_growth
        grid_n, s_n, norms_n, r_n = _solve_on(p, cfg, x_next, sigma)
        settled = abs(r_n - r) <= cfg.tol_tail * max(abs(r_n), 1e-14)
        grid, s, norms, r, x_max = grid_n, s_n, norms_n, r_n, x_next
        if settled:
            return _pack(grid, s, norms, r, cfg, x_max, mn, sigma)


def _pack(grid, s, norms, r, cfg, x_max, mn, sigma):
    return SampledSolution(
        nodes=grid.x.ravel(), values=s.ravel(), x0=cfg.x0, x_max=x_max,
        term_norms=norms, r_x0=complex(r), m_norm=mn, sigma=sigma,
        phases=grid.phi.ravel())


def reflection_at_x0(p, cfg=SolveConfig()):
    """R_x0 = (1/2i) int_{x0}^inf M S."""
    if p.theta == 0.0:
        return 0j
    return solve_series(p, cfg).r_x0


def _smooth_tail(p, g, X):
    """int_X^inf g for a non-oscillating g = O(|M|), on doubling panels."""
    x_end = max(2.0 * X, (1e8 / p.theta) ** (1.0 / p.alpha))
    n = int(np.ceil(np.log2(x_end / X)))
    x, w, _ = quad.panel_nodes(X * 2.0 ** np.arange(n + 1), 24)
    return complex(np.sum(np.asarray(g(x), dtype=complex) * w))


def apply_K(p, f, cfg=SolveConfig(), x_max=None, form="S"):
    """K applied to a callable f.

    With ``form="S"`` f is used as it stands and must not oscillate past
    x_max.  With ``form="s"`` f is the slowly varying factor of
    S = f e^{-2i phi}, and the result comes back in the same form.
    Returns a ``SampledFunction`` on the solver grid over [x0, x_max].
    """
    if form not in ("S", "s"):
        raise DomainError("form must be 'S' or 's'")
    if p.theta > 0:
        _require_contraction(p, cfg.x0)
    x_max = cfg.start_x_max() if x_max is None else x_max
    edges = phase_panel_edges(p, cfg.x0, x_max, width_ratio=0.25)
    x, _, h = quad.panel_nodes(edges, cfg.quadrature_order)
    if p.theta == 0.0:
        return SampledFunction(x.ravel(), np.zeros(x.size, dtype=complex))
    phi, _ = panel_phases(p, edges, x, h)
    M = p.coupling(x)
    fx = np.asarray(f(x), dtype=complex)
    if form == "s":
        fx = fx * np.exp(-2j * phi)
        tail = osc_integral(lambda y: p.coupling(y) * np.asarray(f(y), dtype=complex),
                            x_max, math.inf, p)
    else:
        tail = _smooth_tail(p, lambda y: p.coupling(y) * np.asarray(f(y), dtype=complex),
                            x_max)
    A_nodes, _ = quad.cumulative_panels(M * fx * np.exp(2j * phi), h)
    C_nodes, C_edges = quad.cumulative_panels(M * fx, h)
    B = C_edges[-1] - C_nodes + tail
    out = (np.exp(-2j * phi) * A_nodes + B) / 2j
    if form == "s":
        out = out * np.exp(2j * phi)
    return SampledFunction(x.ravel(), out.ravel())


def fixed_point_residual(p, sol, cfg=SolveConfig()):
    """sup |s - 1 - K s| on the grid of ``sol``."""
    grid = _Grid(p, sol.x0, sol.x_max, cfg.quadrature_order, sol.sigma)
    s = sol.values.reshape(grid.x.shape)
    K1, a1, _ = grid.apply(np.ones_like(s), 1.0)
    # s - 1 is the sum of the terms from T_1 on; its level past X is
    # (1/2ik) int M s and its predecessors' levels sum to 1 + that
    a = quad.cumulative_panels(grid.M * s, grid.h)[1][-1] / (2j * grid.k)
    Krest, _, _ = grid.apply(s - 1.0, a, 1.0 + a)
    return float(np.max(np.abs(s - 1.0 - K1 - Krest)))


def sigma_extrapolation(p, cfg=SolveConfig(), sigmas=(-0.01, -0.005)):
    """R_x0 from the damped kernel at two sigmas, extrapolated linearly to 0."""
    s1, s2 = sigmas
    r1 = solve_series(p, cfg, sigma=s1).r_x0
    r2 = solve_series(p, cfg, sigma=s2).r_x0
    return r2 + (r2 - r1) * (0.0 - s2) / (s2 - s1)
