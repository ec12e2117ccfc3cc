"""Panel quadrature building blocks shared by the solvers.

Gauss-Legendre panels with spectral (cumulative) integration matrices, and
Chebyshev-Lobatto collocation for Levin-type oscillatory integrals.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as L


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights on [-1, 1]."""
    t, w = L.leggauss(n)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@lru_cache(maxsize=None)
def cumulative_matrix(n):
    """Matrix Q with (Q @ f)[i] = integral of the interpolant of f from -1 to t_i.

    f is sampled at the n Gauss-Legendre nodes; exact for polynomials of
    degree < n.
    """
    t, _ = gauss_legendre(n)
    V = L.legvander(t, n - 1)
    W = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        W[:, j] = L.legval(t, L.legint(e, lbnd=-1.0))
    Q = np.linalg.solve(V.T, W.T).T
    Q.setflags(write=False)
    return Q


@lru_cache(maxsize=None)
def chebyshev_lobatto(n):
    """Points cos(pi*j/n), j=0..n (descending) and the differentiation matrix."""
    j = np.arange(n + 1)
    x = np.cos(np.pi * j / n)
    c = np.where((j == 0) | (j == n), 2.0, 1.0) * (-1.0) ** j
    X = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (X + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    x.setflags(write=False)
    D.setflags(write=False)
    return x, D


def panel_nodes(edges, n):
    """Gauss-Legendre nodes and weights on consecutive panels.

    Returns (x, w, h) with x and w of shape (P, n) and half-widths h (P,).
    """
    edges = np.asarray(edges, dtype=float)
    t, w = gauss_legendre(n)
    mid = 0.5 * (edges[1:] + edges[:-1])
    h = 0.5 * (edges[1:] - edges[:-1])
    x = mid[:, None] + h[:, None] * t[None, :]
    return x, h[:, None] * w[None, :], h


def cumulative_panels(values, h):
    """Running integral from the first edge to every node.

    values has shape (P, n) (may be complex), h the panel half-widths.
    Returns (at_nodes, at_edges) where at_edges has P + 1 entries.
    """
    n = values.shape[1]
    _, w = gauss_legendre(n)
    Q = cumulative_matrix(n)
    totals = h * (values @ w)
    at_edges = np.concatenate([[0.0], np.cumsum(totals)])
    inner = h[:, None] * (values @ Q.T)
    return at_edges[:-1, None] + inner, at_edges


def geometric_edges(x_hi, ratio=0.5, depth=52):
    """Edges x_hi * ratio**k, k=depth..0, ascending, for endpoint singularities at 0."""
    k = np.arange(depth, -1, -1)
    return x_hi * ratio**k
