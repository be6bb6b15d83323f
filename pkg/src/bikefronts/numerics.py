"""Quadrature and resampling helpers for uniformly sampled periodic data."""

from __future__ import annotations

import numpy as np


def periodic_simpson(values, period):
    """Composite Simpson rule over one period of uniformly sampled data.

    `values` holds samples at u_i = i * period / N for i = 0..N-1 with
    the wrap sample omitted.  N must be even.  Deterministic summation
    order (plain left-to-right numpy sums).
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n % 2 != 0:
        raise ValueError("periodic Simpson needs an even sample count")
    h = period / n
    even = values[0::2].sum()
    odd = values[1::2].sum()
    return (h / 3.0) * (2.0 * even + 4.0 * odd)


def periodic_cumtrapz(values, period):
    """Cumulative trapezoid antiderivative at the sample points.

    Returns an array of length N+1: entry i is the integral over
    [0, u_i], entry N covers the full period using the wrap sample.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    h = period / n
    closed = np.concatenate([values, values[:1]])
    steps = 0.5 * h * (closed[:-1] + closed[1:])
    out = np.empty(n + 1)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def resample_periodic(values, m):
    """Trigonometric (FFT) resampling of periodic samples onto m points.

    Exact for band-limited data, spectrally accurate for smooth data.
    Input length n and output length m may differ; both grids start at
    u = 0 and are uniform over the same period.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if m == n:
        return values.copy()
    spec = np.fft.rfft(values)
    out_spec = np.zeros(m // 2 + 1, dtype=complex)
    keep = min(spec.shape[0], out_spec.shape[0])
    out_spec[:keep] = spec[:keep]
    if n % 2 == 0 and m > n:
        # split the Nyquist bin symmetrically when upsampling
        out_spec[n // 2] *= 0.5
        # conjugate partner lands outside rfft storage; irfft symmetrizes
    return np.fft.irfft(out_spec, m) * (m / n)


def spectral_derivative(values, period, order=1):
    """Differentiate uniformly sampled periodic data via FFT."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    k = np.fft.rfftfreq(n, d=period / (2.0 * np.pi * n))
    spec = np.fft.rfft(values) * (1j * k) ** order
    if n % 2 == 0 and order % 2 == 1:
        spec[-1] = 0.0  # odd derivative of the Nyquist mode is not representable
    return np.fft.irfft(spec, n)


def unwrap_angle(phi):
    """Continuous lift of a sampled angle, first sample unchanged."""
    return np.unwrap(np.asarray(phi, dtype=float))


def circle_distance(a, b):
    """Distance between two angles on the circle (mod 2 pi)."""
    d = np.abs(np.asarray(a) - np.asarray(b)) % (2.0 * np.pi)
    return np.minimum(d, 2.0 * np.pi - d)
