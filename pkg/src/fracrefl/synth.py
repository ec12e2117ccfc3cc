"""Reflected-trace synthesis with R(theta(omega, eta)) as a Fourier multiplier.

Time dependence is e^{i omega t}, so a trace's spectrum uses the forward
transform with e^{-i omega t}, which is numpy's convention; positive-frequency
bins are multiplied by R and negative ones by its conjugate.
"""

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .closedform import reflection_airy, reflection_asymptotic
from .errors import (AliasingError, DomainError, GrazingIncidenceError,
                     IllConditionedBandError)
from .profile import FractionalProfile, theta_value

THETA_CAP = 0.3
TAPER_OCTAVES = 0.5
SYMBOL_METHODS = ("asymptotic", "volterra", "airy")
# below this theta, R/theta from the Volterra grid is held at its smallest node
_VOLTERRA_THETA_FLOOR = 1e-6
_VOLTERRA_NODES = 33


@dataclass(frozen=True)
class Trace:
    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be > 0")
        s = np.asarray(self.samples, dtype=float)
        if not np.all(np.isfinite(s)):
            raise DomainError("trace samples must be finite")
        object.__setattr__(self, "samples", s)

    @property
    def n(self):
        return len(self.samples)

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.n)


@dataclass(frozen=True)
class Spectrum:
    """One-sided spectrum; negative frequencies follow by conjugation."""

    df: float
    values: np.ndarray
    hermitian: bool = True

    @property
    def freqs(self):
        return self.df * np.arange(len(self.values))


def fft_length(n):
    return 1 << max(0, (int(n) - 1).bit_length())


def trace_spectrum(trace, n_fft=None):
    n_fft = fft_length(trace.n) if n_fft is None else n_fft
    return Spectrum(1.0 / (n_fft * trace.dt), np.fft.rfft(trace.samples, n_fft))


def hermitian_extension(spectrum, n_fft):
    """Full two-sided array with X[-k] = conj(X[k])."""
    full = np.zeros(n_fft, dtype=complex)
    half = spectrum.values
    full[:len(half)] = half
    tail = np.conj(half[1:n_fft - len(half) + 1])[::-1]
    full[len(half):] = tail
    return full


# -- the symbol --------------------------------------------------------------

def _volterra_ratio(alpha, thetas):
    """R(theta)/theta through a log-theta spline of Volterra solves."""
    from .propagate import reflection_volterra

    lo = max(float(np.min(thetas)), _VOLTERRA_THETA_FLOOR)
    hi = max(float(np.max(thetas)), lo * 1.01)
    grid = np.geomspace(lo, hi, _VOLTERRA_NODES)
    ratio = np.array([reflection_volterra(FractionalProfile(alpha, t)).R / t for t in grid])
    spline = CubicSpline(np.log(grid), ratio)
    return spline(np.log(np.clip(thetas, lo, hi)))


def _taper(freqs, f_cap):
    """0 below f_cap, 1 above f_cap * 2^TAPER_OCTAVES, raised cosine between."""
    if not math.isfinite(f_cap):
        return np.zeros_like(freqs)
    with np.errstate(divide="ignore"):
        octaves = np.log2(np.where(freqs > 0, freqs, np.nan) / f_cap)
    w = 0.5 * (1.0 - np.cos(np.pi * np.clip(octaves / TAPER_OCTAVES, 0.0, 1.0)))
    return np.nan_to_num(w, nan=0.0)


def cap_frequency(alpha, ell, c0, eta, theta_cap=THETA_CAP):
    """Frequency (Hz) at which theta(omega, eta) equals theta_cap."""
    if theta_cap <= 0:
        return math.inf
    t1 = float(theta_value(c0, ell, 1.0, eta, alpha))  # theta at omega = 1
    omega = (t1 / theta_cap) ** (1.0 / alpha)
    return omega / (2.0 * math.pi)


def multiplier_symbol(alpha, ell, c0, eta, freq_grid, method="asymptotic",
                      theta_cap=THETA_CAP):
    """R(theta(2 pi f, eta)) on nonnegative frequencies f (Hz), tapered."""
    if method not in SYMBOL_METHODS:
        raise DomainError(f"method must be one of {SYMBOL_METHODS}")
    if method == "airy" and alpha != 1:
        raise DomainError("the airy symbol exists only for alpha = 1")
    if not alpha > 0:
        raise DomainError("alpha must be > 0")
    if eta >= 1:
        raise GrazingIncidenceError(f"eta = {eta} >= 1")
    f = np.asarray(freq_grid, dtype=float)
    if np.any(f < 0):
        raise DomainError("frequencies must be nonnegative")
    w = _taper(f, cap_frequency(alpha, ell, c0, eta, theta_cap))
    out = np.zeros(f.shape, dtype=complex)
    live = w > 0
    if not np.any(live):
        return out
    theta = theta_value(c0, ell, 2.0 * np.pi * f[live], eta, alpha)
    if method == "asymptotic":
        vals = reflection_asymptotic(alpha, 1.0) * theta
    elif method == "airy":
        vals = np.array([reflection_airy(t) for t in theta])
    else:
        vals = _volterra_ratio(alpha, theta) * theta
    out[live] = w[live] * vals
    return out


# -- traces ------------------------------------------------------------------

def ricker_wavelet(fpeak, dt, n):
    """Ricker wavelet of peak frequency fpeak centred at sample n // 2."""
    if not fpeak > 0 or not dt > 0 or n < 1:
        raise DomainError("need fpeak > 0, dt > 0, n >= 1")
    if 0.5 / dt < 3.0 * fpeak:
        raise AliasingError(f"Nyquist {0.5 / dt:g} Hz < 3 x fpeak = {3 * fpeak:g} Hz")
    t = (np.arange(n) - n // 2) * dt
    a = (np.pi * fpeak * t) ** 2
    return Trace(-(n // 2) * dt, dt, (1.0 - 2.0 * a) * np.exp(-a))


def reflect_trace(incident, alpha, ell, c0, eta, method="asymptotic",
                  theta_cap=THETA_CAP, symbol=None):
    """Reflected trace at the interface for one plane-wave mode.

    ``symbol`` overrides R with a fixed array over the rfft bins (testing).
    """
    n_fft = fft_length(incident.n)
    spec = trace_spectrum(incident, n_fft)
    if symbol is None:
        symbol = multiplier_symbol(alpha, ell, c0, eta, spec.freqs, method, theta_cap)
    symbol = np.array(symbol, dtype=complex)
    symbol[0] = symbol[0].real
    if n_fft % 2 == 0:
        symbol[-1] = symbol[-1].real
    out = np.fft.irfft(spec.values * symbol, n_fft)[:incident.n]
    return Trace(incident.t0, incident.dt, out)


def _band_ratio(incident, reflected, band):
    f_lo, f_hi = band
    if incident.dt != reflected.dt or incident.n != reflected.n:
        raise DomainError("traces must share sampling")
    if not 0 < f_lo < f_hi <= 0.5 / incident.dt:
        raise DomainError("band must satisfy 0 < f_lo < f_hi <= Nyquist")
    n_fft = fft_length(incident.n)
    si = trace_spectrum(incident, n_fft)
    sr = trace_spectrum(reflected, n_fft)
    f = si.freqs
    sel = (f >= f_lo) & (f <= f_hi)
    if np.count_nonzero(sel) < 2:
        raise IllConditionedBandError("fewer than two frequency bins in band")
    mag = np.abs(si.values)
    if np.min(mag[sel]) < 1e-3 * np.max(mag):
        raise IllConditionedBandError("incident spectrum below 1e-3 of its peak in band")
    return f[sel], sr.values[sel] / si.values[sel]


def spectral_slope(incident, reflected, band):
    """Least-squares slope of log|reflected/incident| against log f on band."""
    f, ratio = _band_ratio(incident, reflected, band)
    slope, _ = np.polyfit(np.log(f), np.log(np.abs(ratio)), 1)
    return float(slope)


def spectral_phase(incident, reflected, band):
    """Circular mean of arg(reflected/incident) on band, in (-pi, pi]."""
    _, ratio = _band_ratio(incident, reflected, band)
    return float(np.angle(np.mean(ratio / np.abs(ratio))))


def valid_band(alpha, ell, c0, eta, f_max, theta_max=0.1):
    """(f_lo, f_max) with f_lo the frequency where theta = theta_max."""
    return cap_frequency(alpha, ell, c0, eta, theta_max), float(f_max)


# -- CSV ---------------------------------------------------------------------

def format_number(x):
    return "%.17g" % x


def write_trace_csv(trace, dest):
    """First line t0,dt,n (values); then one sample per line."""
    lines = [",".join([format_number(trace.t0), format_number(trace.dt), str(trace.n)])]
    lines.extend(format_number(v) for v in trace.samples)
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)


def read_trace_csv(src):
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src) as fh:
            text = fh.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if rows and [c.strip() for c in rows[0]] == ["t0", "dt", "n"]:
        rows = rows[1:]
    t0, dt, n = float(rows[0][0]), float(rows[0][1]), int(rows[0][2])
    samples = np.array([float(r[0]) for r in rows[1:]])
    if len(samples) != n:
        raise DomainError(f"header says {n} samples, found {len(samples)}")
    return Trace(t0, dt, samples)
