"""Hot integration loops: steering-angle RK4 and the SL(2) propagator.

Both kernels step through one period of a closed front in its curve
parameter u.  Curvature and speed are pre-sampled on a fine grid with
2 * n_steps + 1 entries (step nodes at even indices, RK4 midpoints at
odd indices, wrap sample at the end), so no interpolation happens
inside the loop and the classical order 4 is preserved.

The kernels are compiled with numba by default.  Setting the
environment variable ``BIKEFRONTS_NUMBA=0`` before import selects the
pure-Python/numpy fallback (identical code path, identical numerics);
``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

#: matrix entry magnitude that triggers a rescale of the SL(2) propagator
_RESCALE_AT = 1e100

#: steering blowup guard half-width (radians)
_ALPHA_WINDOW = 20.0 * math.pi


def _steering_rk4_impl(sigma, kappa, c0, h, n_steps, stride, alpha0, out):
    """RK4 for d(alpha)/du = sigma(u) * (c0 * sin(alpha) - kappa(u)).

    Records alpha every `stride` steps into `out` (length
    n_steps // stride + 1, out[0] = alpha0).  Returns 0 on success and
    1 if alpha left the +/-20 pi guard window.
    """
    a = alpha0
    out[0] = alpha0
    for step in range(n_steps):
        j = 2 * step
        k1 = sigma[j] * (c0 * math.sin(a) - kappa[j])
        a2 = a + 0.5 * h * k1
        k2 = sigma[j + 1] * (c0 * math.sin(a2) - kappa[j + 1])
        a3 = a + 0.5 * h * k2
        k3 = sigma[j + 1] * (c0 * math.sin(a3) - kappa[j + 1])
        a4 = a + h * k3
        k4 = sigma[j + 2] * (c0 * math.sin(a4) - kappa[j + 2])
        a = a + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if abs(a - alpha0) > _ALPHA_WINDOW:
            return 1
        if (step + 1) % stride == 0:
            out[(step + 1) // stride] = a
    return 0


def _sl2_rk4_impl(sigma, kappa, c0, h, n_steps, out):
    """RK4 for U' = sigma(u) * A(kappa(u)) * U with the trace-free lift.

    A = [[c0/2, -kappa/2], [kappa/2, -c0/2]].  The propagator is
    rescaled whenever an entry exceeds 1e100; the accumulated log of
    the scale factors is returned so hyperbolic growth at tiny bicycle
    length never overflows.

    Writes the final (rescaled) propagator into `out` (flat, length 4)
    and returns (log_scale, max_det_drift).  The drift max |det U - 1|
    is tracked only while it is measurable: once entries pass 1e7 the
    determinant of a float64 product is cancellation noise, so the
    tracker freezes at the last trustworthy value.
    """
    u00 = 1.0
    u01 = 0.0
    u10 = 0.0
    u11 = 1.0
    log_scale = 0.0
    max_drift = 0.0
    for step in range(n_steps):
        j = 2 * step
        # stage coefficients at the node, midpoint and next node
        p0 = 0.5 * sigma[j] * c0
        q0 = 0.5 * sigma[j] * kappa[j]
        pm = 0.5 * sigma[j + 1] * c0
        qm = 0.5 * sigma[j + 1] * kappa[j + 1]
        p1 = 0.5 * sigma[j + 2] * c0
        q1 = 0.5 * sigma[j + 2] * kappa[j + 2]

        k1_00 = p0 * u00 - q0 * u10
        k1_01 = p0 * u01 - q0 * u11
        k1_10 = q0 * u00 - p0 * u10
        k1_11 = q0 * u01 - p0 * u11

        v00 = u00 + 0.5 * h * k1_00
        v01 = u01 + 0.5 * h * k1_01
        v10 = u10 + 0.5 * h * k1_10
        v11 = u11 + 0.5 * h * k1_11
        k2_00 = pm * v00 - qm * v10
        k2_01 = pm * v01 - qm * v11
        k2_10 = qm * v00 - pm * v10
        k2_11 = qm * v01 - pm * v11

        v00 = u00 + 0.5 * h * k2_00
        v01 = u01 + 0.5 * h * k2_01
        v10 = u10 + 0.5 * h * k2_10
        v11 = u11 + 0.5 * h * k2_11
        k3_00 = pm * v00 - qm * v10
        k3_01 = pm * v01 - qm * v11
        k3_10 = qm * v00 - pm * v10
        k3_11 = qm * v01 - pm * v11

        v00 = u00 + h * k3_00
        v01 = u01 + h * k3_01
        v10 = u10 + h * k3_10
        v11 = u11 + h * k3_11
        k4_00 = p1 * v00 - q1 * v10
        k4_01 = p1 * v01 - q1 * v11
        k4_10 = q1 * v00 - p1 * v10
        k4_11 = q1 * v01 - p1 * v11

        w = h / 6.0
        u00 = u00 + w * (k1_00 + 2.0 * k2_00 + 2.0 * k3_00 + k4_00)
        u01 = u01 + w * (k1_01 + 2.0 * k2_01 + 2.0 * k3_01 + k4_01)
        u10 = u10 + w * (k1_10 + 2.0 * k2_10 + 2.0 * k3_10 + k4_10)
        u11 = u11 + w * (k1_11 + 2.0 * k2_11 + 2.0 * k3_11 + k4_11)
        big = max(abs(u00), abs(u01), abs(u10), abs(u11))
        if big > _RESCALE_AT:
            u00 /= big
            u01 /= big
            u10 /= big
            u11 /= big
            log_scale += math.log(big)
        elif big < 1e7 and log_scale == 0.0:
            det = u00 * u11 - u01 * u10
            drift = abs(det - 1.0)
            if drift > max_drift:
                max_drift = drift
    out[0] = u00
    out[1] = u01
    out[2] = u10
    out[3] = u11
    return log_scale, max_drift


def _want_numba():
    return os.environ.get("BIKEFRONTS_NUMBA", "1") != "0"


def _jit(func):
    import numba

    return numba.njit(cache=True, fastmath=False)(func)


if _want_numba():
    try:
        steering_rk4_core = _jit(_steering_rk4_impl)
        sl2_rk4_core = _jit(_sl2_rk4_impl)
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency
        steering_rk4_core = _steering_rk4_impl
        sl2_rk4_core = _sl2_rk4_impl
        BACKEND = "numpy"
else:
    steering_rk4_core = _steering_rk4_impl
    sl2_rk4_core = _sl2_rk4_impl
    BACKEND = "numpy"


def steering_rk4(sigma_fine, kappa_fine, c0, h, n_steps, stride, alpha0):
    """Run the steering kernel; returns the recorded alpha array.

    Raises no exceptions itself: the (alpha, status) pair is returned so
    callers can map status 1 to StepUnstable with context.
    """
    out = np.empty(n_steps // stride + 1)
    status = steering_rk4_core(
        np.ascontiguousarray(sigma_fine),
        np.ascontiguousarray(kappa_fine),
        float(c0),
        float(h),
        int(n_steps),
        int(stride),
        float(alpha0),
        out,
    )
    return out, status


def sl2_rk4(sigma_fine, kappa_fine, c0, h, n_steps):
    """Run the SL(2) kernel; returns (U 2x2, log_scale, max |det - 1|)."""
    out = np.empty(4)
    log_scale, max_drift = sl2_rk4_core(
        np.ascontiguousarray(sigma_fine),
        np.ascontiguousarray(kappa_fine),
        float(c0),
        float(h),
        int(n_steps),
        out,
    )
    return out.reshape(2, 2), log_scale, max_drift
