import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracrefl.errors import BranchCutError, DomainError
from fracrefl.profile import FractionalProfile
from fracrefl.special import (AIRY_ASYMPTOTIC_RADIUS, airy_ai_complex, airy_asymptotic,
                              airy_log_derivative, airy_series, gamma_fn,
                              gamma_identity_residual, osc_integral, power_2i)

mpmath = pytest.importorskip("mpmath")


def test_gamma_examples():
    assert gamma_fn(1) == 1
    assert gamma_fn(5) == 24
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_gamma_domain():
    for bad in (0.0, -1.5):
        with pytest.raises(DomainError):
            gamma_fn(bad)


def test_gamma_recurrence():
    rng = np.random.default_rng(0)
    for x in rng.uniform(0.1, 20, 200):
        assert abs(gamma_fn(x + 1) - x * gamma_fn(x)) / gamma_fn(x + 1) < 1e-12


def test_gamma_against_mpmath():
    for x in np.linspace(0.05, 30, 97):
        assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-13)


def test_power_2i_branch():
    assert power_2i(2) == pytest.approx(-4)
    assert power_2i(0.5) == pytest.approx(math.sqrt(2) * cmath.exp(0.25j * math.pi))


def test_airy_examples():
    ai, aip = airy_ai_complex(0)
    assert ai == pytest.approx(0.35502805, abs=5e-9)
    assert aip == pytest.approx(-0.25881940, abs=5e-9)
    assert airy_ai_complex(1).ai == pytest.approx(0.13529242, abs=5e-9)
    z = cmath.exp(1j * math.pi / 3) * 10
    a_ser = airy_ai_complex(z).ai
    a_asy = airy_asymptotic(z)[0]
    assert abs(a_ser - a_asy) / abs(a_asy) < 1e-8


def test_airy_real_positive_is_real():
    for x in (0.0, 0.4, 2.0, 7.0, 15.0):
        ai = airy_ai_complex(x).ai
        assert ai.real > 0 and abs(ai.imag) <= 1e-14 * ai.real


def test_airy_branch_cut():
    with pytest.raises(BranchCutError):
        airy_ai_complex(-2.0)


def _sample_disk(n, rmax, seed):
    rng = np.random.default_rng(seed)
    r = rmax * np.sqrt(rng.uniform(0, 1, n))
    th = rng.uniform(-0.97 * math.pi, 0.97 * math.pi, n)
    return r * np.exp(1j * th)


def test_airy_against_mpmath():
    for z in _sample_disk(150, 14.0, 1):
        ai, aip = airy_ai_complex(z)
        ref = complex(mpmath.airyai(z))
        refp = complex(mpmath.airyai(z, derivative=1))
        assert abs(ai - ref) <= 1e-11 * abs(ref)
        assert abs(aip - refp) <= 1e-11 * abs(refp)


def test_airy_ode_residual():
    # Ai'' by a five-point difference of the returned Ai'
    h = 1e-3

    def aip(w):
        return airy_ai_complex(w).ai_prime

    for z in _sample_disk(100, 8.0, 2):
        ai = airy_ai_complex(z).ai
        d2 = (aip(z - 2 * h) - 8 * aip(z - h) + 8 * aip(z + h) - aip(z + 2 * h)) / (12 * h)
        assert abs(d2 - z * ai) < 1e-8 * (1 + abs(ai))


def test_airy_prime_matches_difference_of_ai():
    for z in _sample_disk(30, 6.0, 5):
        errs = []
        for h in (1e-2, 5e-3):
            fd = (airy_ai_complex(z + h).ai - airy_ai_complex(z - h).ai) / (2 * h)
            errs.append(abs(fd - airy_ai_complex(z).ai_prime))
        # O(h^2): halving h divides the error by about four
        assert errs[1] < errs[0] / 3


def _annulus(rmin, rmax, n=200):
    rng = np.random.default_rng(7)
    r = rng.uniform(rmin, rmax, n)
    th = rng.uniform(-2 * math.pi / 3, 2 * math.pi / 3, n)
    return r * np.exp(1j * th)


def test_airy_series_asymptotic_overlap_full_annulus():
    # expected to fail: near |z| = 4 the optimally truncated expansion is
    # only good to about exp(-2|zeta|) ~ 1e-3
    worst = 0.0
    for z in _annulus(4.0, 6.0):
        s = airy_series(z)[0]
        a = airy_asymptotic(z)[0]
        worst = max(worst, abs(s - a) / abs(a))
    assert worst < 1e-8


def test_airy_raw_representations_agree_where_both_hold():
    # the asymptotic error falls like exp(-2|zeta|); the series loses digits
    # like exp(2|zeta|); both are below 1e-8 on this band
    for z in _annulus(8.5, 9.5):
        s, _, est = airy_series(z)
        a = airy_asymptotic(z)[0]
        assert abs(s - a) / abs(a) < max(1e-8, 10 * est)


def test_airy_both_representations_match_mpmath_on_annulus():
    # in the annulus the evaluator's answer must be right regardless of route
    for z in _annulus(4.0, 6.0, 60):
        ref = complex(mpmath.airyai(z))
        assert abs(airy_ai_complex(z).ai - ref) <= 1e-11 * abs(ref)


def test_airy_log_derivative_large_argument():
    # Ai'/Ai + sqrt(z), a small difference of large numbers; reference in 40 digits
    mpmath.mp.dps = 40
    for z in (30.0, 100 * cmath.exp(1j * math.pi / 3), 1e4 * cmath.exp(0.5j)):
        zm = mpmath.mpc(z)
        ref = complex(mpmath.airyai(zm, derivative=1) / mpmath.airyai(zm) + mpmath.sqrt(zm))
        assert abs(airy_log_derivative(z) - ref) <= 1e-12 * abs(ref)
    mpmath.mp.dps = 15
    assert AIRY_ASYMPTOTIC_RADIUS > 0


def test_osc_integral_examples():
    free = FractionalProfile(1.0, 0.0)
    val = osc_integral(lambda y: np.exp(-y), 0.0, math.inf, free)
    assert abs(val - (0.2 - 0.4j)) < 1e-12
    assert osc_integral(lambda y: np.zeros_like(y), 1.0, math.inf, free) == 0


def test_osc_integral_inverse_square():
    # brute force: fine composite Simpson on [1, 400] plus an integration by
    # parts tail expansion, both independent of the production code
    free = FractionalProfile(1.0, 0.0)
    val = osc_integral(lambda y: y**-2.0, 1.0, math.inf, free)
    Y = 400.0
    y = np.linspace(1.0, Y, 2_000_001)
    g = y**-2.0 * np.exp(-2j * y)
    h = y[1] - y[0]
    body = h / 3 * (g[0] + g[-1] + 4 * g[1:-1:2].sum() + 2 * g[2:-1:2].sum())
    # int_Y^inf y^-2 e^{-2iy} = e^{-2iY} sum_n (-1)^n (n+1)! / ((2i)^{n+1} Y^{n+2})
    tail = sum((-1) ** n * math.factorial(n + 1) / ((2j) ** (n + 1) * Y ** (n + 2))
               for n in range(8))
    tail *= cmath.exp(-2j * Y)
    assert abs(val - (body + tail)) < 1e-8


def test_osc_integral_finite_interval_and_profile():
    p = FractionalProfile(1.0, 0.5)
    val = osc_integral(lambda y: 1.0 / (1.0 + y), 0.0, 30.0, p)
    mpmath.mp.dps = 30
    ref = mpmath.quad(lambda y: mpmath.exp(-2j * (2 / 1.5) * ((1 + 0.5 * y) ** 1.5 - 1)) / (1 + y),
                      mpmath.linspace(0, 30, 200))
    assert abs(val - complex(ref)) < 1e-12


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.3, 3), st.floats(0.3, 3))
def test_osc_integral_linear(c1, c2, r1, r2):
    p = FractionalProfile(1.5, 0.2)

    def f(y):
        return c1 * np.exp(-r1 * y)

    def g(y):
        return c2 / (1 + r2 * y) ** 2

    lhs = osc_integral(lambda y: f(y) + g(y), 0.5, math.inf, p)
    rhs = osc_integral(f, 0.5, math.inf, p) + osc_integral(g, 0.5, math.inf, p)
    assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("case", [(0.5, 1.0, 2), (2.0, 1.0, 4), (1.7, 0.5, 3), (3.2, 2.0, 5)])
def test_gamma_identity(case):
    assert gamma_identity_residual(*case) < 1e-8
