import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracrefl.closedform import (reflection_airy, reflection_asymptotic,
                                 reflection_fresnel, remainder_exponent)
from fracrefl.errors import DomainError
from fracrefl.profile import FractionalProfile
from fracrefl.propagate import reflection_volterra

mpmath = pytest.importorskip("mpmath")


def test_asymptotic_examples():
    assert reflection_asymptotic(1, 0.01) == pytest.approx(0.00125j, abs=1e-17)
    assert reflection_asymptotic(2, 0.1) == pytest.approx(0.0125, abs=1e-17)
    r = reflection_asymptotic(0.5, 0.1)
    assert r.real == pytest.approx(-0.011078, abs=5e-7)
    assert r.imag == pytest.approx(0.011078, abs=5e-7)


def test_asymptotic_rejects_alpha_zero():
    with pytest.raises(DomainError):
        reflection_asymptotic(0.0, 0.1)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 6.0), st.floats(1e-8, 1.0))
def test_asymptotic_phase_and_amplitude_laws(alpha, theta):
    r = reflection_asymptotic(alpha, theta)
    want = -math.pi * (alpha + 2) / 2
    d = (cmath.phase(r) - want + math.pi) % (2 * math.pi) - math.pi
    assert abs(d) < 1e-12
    assert abs(reflection_asymptotic(alpha, 2 * theta)) / abs(r) == pytest.approx(2.0, rel=1e-14)


def test_remainder_exponent_examples():
    assert remainder_exponent(0.5) == 1
    assert remainder_exponent(2) == 0.5
    assert remainder_exponent(1) == 1


def _airy_reference(theta):
    """The ratio of Airy data written in the large variable beta = theta^{-2/3}."""
    mpmath.mp.dps = 50
    beta = mpmath.mpf(theta) ** (-mpmath.mpf(2) / 3)
    e = mpmath.exp(1j * mpmath.pi / 3)
    w = mpmath.airyai(e * beta)
    wp = e * mpmath.airyai(e * beta, derivative=1)
    root = mpmath.sqrt(beta)
    return complex((wp + 1j * root * w) / (-wp + 1j * root * w))


@pytest.mark.parametrize("theta", [3.0, 1.0, 0.2, 0.01, 1e-4, 1e-7])
def test_airy_against_extended_precision(theta):
    ref = _airy_reference(theta)
    assert abs(reflection_airy(theta) - ref) < 1e-12 * abs(ref)


def test_airy_examples():
    r = reflection_airy(0.01)
    assert abs(r - 0.00125j) <= 0.1 * 0.01**2
    v = reflection_volterra(FractionalProfile(1.0, 0.2)).R
    assert abs(reflection_airy(0.2) - v) < 1e-6 * abs(v)
    assert abs(reflection_airy(1.0)) <= 1


def test_airy_tiny_theta_no_overflow():
    for t in (1e-6, 1e-9, 1e-12):
        r = reflection_airy(t)
        assert np.isfinite(r)
        assert abs(r - 0.125j * t) < 0.2 * t**2


def test_airy_remainder_is_second_order():
    thetas = np.geomspace(1e-3, 1e-1, 9)
    ratios = [abs(reflection_airy(t) - reflection_asymptotic(1, t)) / t**2 for t in thetas]
    assert max(ratios) < 0.2
    assert max(ratios) / min(ratios) < 1.5


def test_airy_domain():
    with pytest.raises(DomainError):
        reflection_airy(0.0)


def test_fresnel_examples():
    assert reflection_fresnel(1, 0) == 0
    assert abs(reflection_fresnel(2, 0) - 1 / 3) <= 1e-15
    assert abs(abs(reflection_fresnel(0.5, 0.6)) - 1) <= 1e-12


@settings(max_examples=80, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.0, 0.999))
def test_fresnel_flux(c_ratio, eta):
    r = reflection_fresnel(c_ratio, eta)
    if c_ratio**2 - eta**2 >= 0:
        assert abs(r) ** 2 <= 1 + 1e-12
    else:
        assert abs(abs(r) - 1) < 1e-12


def test_fresnel_domain():
    with pytest.raises(DomainError):
        reflection_fresnel(1.0, 1.0)
    with pytest.raises(DomainError):
        reflection_fresnel(0.0, 0.0)
