"""Closed curves and wave fronts on constant-curvature surfaces.

A front is stored as N uniform samples of a co-oriented closed curve
together with its Legendrian frame data:

* ``epsilon``   unit tangent field, smooth through cusps, chosen so that
  rotating it by +90 degrees (via the model cross product with the
  position) gives the co-orientation ``coorient``;
* ``w``         signed speed d(arclength)/du relative to ``epsilon``:
  ``d1 = w * epsilon``.  The sign of ``w`` is the signed-arclength
  indicator and flips exactly at cusps;
* ``omega``     rotation rate of the frame, ``omega = kappa * |w|`` with
  kappa the geodesic curvature of the traversal.

With this data the signed length is the integral of ``w``, the signed
curvature integral is the integral of ``omega``, and moving the front a
geodesic distance d along its co-orientation transports the pair
(w, omega) linearly, which keeps duals and equidistant fronts exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import DegenerateCurve, NotConvex, NotProper, SpecInvalid, WrongModel
from .geometry import SurfaceModel, cross, inner, project_to_surface, tangent_frame_at
from .numerics import (
    periodic_simpson,
    resample_periodic,
    spectral_derivative,
)

DEFAULT_SAMPLES = 1024

# relative floor below which a whole track counts as a point (degenerate)
_DEGENERATE_SPEED = 1e-9


# ---------------------------------------------------------------------------
# curve specifications


@dataclass(frozen=True)
class CurveSpec:
    """Polar-graph curve description around a base point.

    ``kind`` is "circle" (constant radius) or "polar_fourier" with
    radius function rho(u) = rho0 + sum a_n cos(n u) + b_n sin(n u).
    The curve is traversed counterclockwise as seen from the base
    point, which makes convex curves properly oriented with the
    co-orientation pointing toward the base point.
    """

    model: SurfaceModel
    kind: str = "circle"
    radius: float | None = None
    rho0: float | None = None
    fourier_cos: tuple = ()
    fourier_sin: tuple = ()
    samples: int = DEFAULT_SAMPLES
    base_point: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.kind not in ("circle", "polar_fourier"):
            raise SpecInvalid(f"unknown curve kind {self.kind!r}")
        if self.samples < 64:
            raise SpecInvalid("at least 64 samples are required")
        if self.samples % 2 != 0:
            raise SpecInvalid("sample count must be even (Simpson quadrature)")
        if self.kind == "circle":
            if self.radius is None or self.radius <= 0:
                raise SpecInvalid("circle needs a positive radius")
            if self.model is SurfaceModel.SPHERE and self.radius >= np.pi:
                raise SpecInvalid("spherical circle radius must be below pi")
        else:
            if self.rho0 is None:
                raise SpecInvalid("polar_fourier needs rho0")
            rho = self.radius_function(np.linspace(0, 2 * np.pi, 8 * self.samples, endpoint=False))
            if np.min(rho) <= 0:
                raise SpecInvalid("radius function must stay positive")
            if self.model is SurfaceModel.SPHERE and np.max(rho) >= np.pi:
                raise SpecInvalid("radius function must stay below pi on the sphere")

    def radius_function(self, u, order=0):
        """rho(u) or its derivative of the given order."""
        u = np.asarray(u, dtype=float)
        if self.kind == "circle":
            base = float(self.radius)
            out = np.full(u.shape, base if order == 0 else 0.0)
            return out
        out = np.full(u.shape, float(self.rho0) if order == 0 else 0.0)
        for n, a in enumerate(self.fourier_cos, start=1):
            phase = n * u + order * np.pi / 2.0
            out += a * (n**order) * np.cos(phase)
        for n, b in enumerate(self.fourier_sin, start=1):
            phase = n * u + order * np.pi / 2.0
            out += b * (n**order) * np.sin(phase)
        return out

    def to_dict(self):
        d = {"model": self.model.value, "kind": self.kind, "samples": self.samples}
        if self.kind == "circle":
            d["radius"] = self.radius
        else:
            d["rho0"] = self.rho0
            d["cos"] = list(self.fourier_cos)
            d["sin"] = list(self.fourier_sin)
        return d


class _PolarEvaluator:
    """Analytic field evaluator for polar-graph curves."""

    def __init__(self, spec: CurveSpec):
        self.spec = spec
        self.model = spec.model
        self.p0 = project_to_surface(np.asarray(spec.base_point, dtype=float), spec.model)
        self.e1, self.e2 = tangent_frame_at(self.p0, spec.model)

    def __call__(self, u):
        m = self.model
        k = m.curvature
        u = np.asarray(u, dtype=float)
        rho = self.spec.radius_function(u)
        rho1 = self.spec.radius_function(u, order=1)
        rho2 = self.spec.radius_function(u, order=2)
        c, s = m.c(rho), m.s(rho)
        e = np.outer(np.cos(u), self.e1) + np.outer(np.sin(u), self.e2)
        de = np.outer(-np.sin(u), self.e1) + np.outer(np.cos(u), self.e2)

        pos = c[:, None] * self.p0 + s[:, None] * e
        d1 = (-k * s * rho1)[:, None] * self.p0 + (c * rho1)[:, None] * e + s[:, None] * de
        d2 = (
            (-k * (c * rho1**2 + s * rho2))[:, None] * self.p0
            + (-k * s * rho1**2 + c * rho2 - s)[:, None] * e
            + (2.0 * c * rho1)[:, None] * de
        )
        sigma = np.sqrt(rho1**2 + s**2)
        nu_raw = cross(pos, d1, m)
        kappa_j = inner(d2, nu_raw, m) / sigma**3
        nu = nu_raw / sigma[:, None]
        epsilon = d1 / sigma[:, None]
        return {
            "positions": pos,
            "d1": d1,
            "d2": d2,
            "epsilon": epsilon,
            "coorient": nu,
            "w": sigma.copy(),
            "omega": kappa_j * sigma,
            "sigma": sigma,
            "kappa_j": kappa_j,
        }


class _TransportEvaluator:
    """Evaluator for a front moved distance d along its co-orientation."""

    def __init__(self, base, d):
        self.base = base
        self.model = base.model
        self.d = float(d)

    def __call__(self, u):
        m = self.model
        k = m.curvature
        f = self.base(u)
        c, s = m.c(self.d), m.s(self.d)
        pos = c * f["positions"] + s * f["coorient"]
        w = c * f["w"] - s * f["omega"]
        omega = c * f["omega"] + k * s * f["w"]
        nu = c * f["coorient"] - k * s * f["positions"]
        d1 = w[:, None] * f["epsilon"]
        sigma = np.abs(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            kappa_j = np.where(sigma > 0, omega / np.where(sigma > 0, sigma, 1.0), np.inf)
        return {
            "positions": pos,
            "d1": d1,
            "d2": None,
            "epsilon": f["epsilon"],
            "coorient": nu,
            "w": w,
            "omega": omega,
            "sigma": sigma,
            "kappa_j": kappa_j,
        }


# ---------------------------------------------------------------------------
# wave fronts


@dataclass(frozen=True)
class WaveFront:
    """Uniformly sampled closed co-oriented wave front."""

    model: SurfaceModel
    positions: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    epsilon: np.ndarray
    coorient: np.ndarray
    w: np.ndarray
    omega: np.ndarray
    period: float = 2.0 * np.pi
    closed: bool = True
    evaluator: object | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        n = self.positions.shape[0]
        for name in ("d1", "d2", "epsilon", "coorient"):
            if getattr(self, name).shape != (n, 3):
                raise ValueError(f"{name} must have shape ({n}, 3)")
        if self.w.shape != (n,) or self.omega.shape != (n,):
            raise ValueError("w and omega must be per-sample scalars")

    @property
    def n_samples(self):
        return self.positions.shape[0]

    @cached_property
    def u(self):
        """Uniform parameter grid (wrap sample omitted)."""
        n = self.n_samples
        return np.arange(n) * (self.period / n)

    @property
    def speed(self):
        return np.abs(self.w)

    @property
    def sign(self):
        """Signed-arclength indicator: +1/-1, flips at cusps."""
        return np.where(self.w >= 0.0, 1.0, -1.0)

    @cached_property
    def kappa(self):
        """Geodesic curvature relative to the co-orientation (omega / w)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.w != 0.0, self.omega / np.where(self.w != 0.0, self.w, 1.0), np.inf)

    @cached_property
    def cusps(self):
        return cusp_scan(self)

    @property
    def cusp_indices(self):
        return self.cusps.indices

    def fine_fields(self, steps_per_sample):
        """Speed and traversal curvature on the RK4 grid.

        Returns (sigma, kappa) arrays of length 2 * N * steps_per_sample + 1
        holding values at the step nodes and midpoints, wrap included.
        Uses the analytic evaluator when available, trigonometric
        resampling of the stored fields otherwise.
        """
        n_steps = self.n_samples * steps_per_sample
        m = 2 * n_steps
        if self.evaluator is not None:
            us = np.arange(m + 1) * (self.period / m)
            f = self.evaluator(us)
            return f["sigma"], f["kappa_j"]
        w_fine = resample_periodic(self.w, m)
        omega_fine = resample_periodic(self.omega, m)
        w_fine = np.concatenate([w_fine, w_fine[:1]])
        omega_fine = np.concatenate([omega_fine, omega_fine[:1]])
        sigma = np.abs(w_fine)
        if np.min(sigma) <= 0:
            raise DegenerateCurve("front speed vanishes; cannot refine fields")
        return sigma, omega_fine / sigma

    def flip_coorientation(self):
        """Reverse the co-orientation field (flips signed length)."""
        return replace(
            self,
            epsilon=-self.epsilon,
            coorient=-self.coorient,
            w=-self.w,
            omega=self.omega.copy(),
            evaluator=None,
        )

    def reverse(self):
        """Reverse the traversal direction (flips signed length and ACC)."""
        idx = (-np.arange(self.n_samples)) % self.n_samples
        return replace(
            self,
            positions=self.positions[idx],
            d1=-self.d1[idx],
            d2=self.d2[idx],
            epsilon=self.epsilon[idx],
            coorient=self.coorient[idx],
            w=-self.w[idx],
            omega=-self.omega[idx],
            evaluator=None,
        )


def _frozen(arr):
    out = np.ascontiguousarray(arr, dtype=float)
    out.flags.writeable = False
    return out


def _front_from_fields(model, fields, period=2.0 * np.pi, evaluator=None):
    d2 = fields["d2"]
    if d2 is None:
        d2 = np.stack(
            [spectral_derivative(fields["d1"][:, i], period) for i in range(3)], axis=1
        )
    return WaveFront(
        model=model,
        positions=_frozen(fields["positions"]),
        d1=_frozen(fields["d1"]),
        d2=_frozen(d2),
        epsilon=_frozen(fields["epsilon"]),
        coorient=_frozen(fields["coorient"]),
        w=_frozen(fields["w"]),
        omega=_frozen(fields["omega"]),
        period=period,
        evaluator=evaluator,
    )


def build(spec: CurveSpec) -> WaveFront:
    """Sample a wave front from its curve specification.

    Positions and derivatives are evaluated from closed forms (chain
    rule on the polar representation), so the curvature field carries no
    finite-difference noise.
    """
    evaluator = _PolarEvaluator(spec)
    n = spec.samples
    us = np.arange(n) * (2.0 * np.pi / n)
    return _front_from_fields(spec.model, evaluator(us), evaluator=evaluator)


def wavefront_from_samples(model, positions, epsilon, coorient, w, omega, period=2.0 * np.pi):
    """Rebuild a front from sampled frame data (e.g. a re-ingested CSV)."""
    d1 = w[:, None] * epsilon
    return _front_from_fields(
        model,
        {
            "positions": positions,
            "d1": d1,
            "d2": None,
            "epsilon": epsilon,
            "coorient": coorient,
            "w": w,
            "omega": omega,
        },
        period=period,
    )


# ---------------------------------------------------------------------------
# integrals


def algebraic_length(front: WaveFront) -> float:
    """Signed length: integral of the signed arclength element."""
    return periodic_simpson(front.w, front.period)


def _curvature_integral(front: WaveFront) -> float:
    # integrand kappa * sign * |d1| == omega, smooth through cusps
    return periodic_simpson(front.omega, front.period)


def acc(front: WaveFront) -> float:
    """Signed curvature integral of a spherical front.

    For a front bounding a polar region this equals the area of its
    characteristic 2-chain by the Gauss-Bonnet identity.
    """
    if front.model is not SurfaceModel.SPHERE:
        raise WrongModel("acc is defined for spherical fronts; use total_curvature")
    return _curvature_integral(front)


def total_curvature(front: WaveFront) -> float:
    """Signed curvature integral of a hyperbolic front (= area + 2 pi when simple)."""
    if front.model is not SurfaceModel.HYPERBOLIC:
        raise WrongModel("total_curvature is defined for hyperbolic fronts; use acc")
    return _curvature_integral(front)


def area_convex(front: WaveFront) -> float:
    """Enclosed area of a convex, simple, properly oriented spherical curve."""
    if front.model is not SurfaceModel.SPHERE:
        raise WrongModel("area_convex needs a spherical curve")
    if front.cusps.indices:
        raise NotConvex("area_convex needs a smooth curve")
    if np.min(front.kappa) < -1e-9:
        raise NotConvex("sampled curvature dips below zero")
    total = acc(front)
    if total < -1e-9:
        raise NotProper("curvature integral is negative; flip the orientation")
    return 2.0 * np.pi - total


# ---------------------------------------------------------------------------
# cusp and inflection detection


@dataclass(frozen=True)
class CuspScan:
    """Cusp locations and the arc sign field of a front."""

    indices: list
    params: list
    sign: np.ndarray


def cusp_scan(front: WaveFront) -> CuspScan:
    """Locate cusps as sign changes of the signed speed.

    The cusp parameter is linearly interpolated between samples.  Raises
    DegenerateCurve when the speed vanishes identically (point track).
    """
    w = front.w
    scale = max(np.max(np.abs(front.omega)), 1.0)
    if np.max(np.abs(w)) < _DEGENERATE_SPEED * scale:
        raise DegenerateCurve("speed vanishes along the whole curve")
    sign = np.where(w >= 0.0, 1.0, -1.0)
    nxt = np.roll(sign, -1)
    flips = np.nonzero(sign != nxt)[0]
    h = front.period / front.n_samples
    params = []
    for i in flips:
        w0 = w[i]
        w1 = w[(i + 1) % front.n_samples]
        frac = w0 / (w0 - w1) if w0 != w1 else 0.5
        params.append((i + frac) * h)
    return CuspScan(indices=list(flips), params=params, sign=sign)


def inflection_scan(front: WaveFront) -> list:
    """Indices where the geodesic curvature changes sign.

    Works on the curvature numerator omega = kappa * w, which crosses
    zero exactly at inflections and ignores the spurious kappa sign
    flips through cusps (where kappa passes through infinity, not zero).
    """
    omega = front.omega
    n = front.n_samples
    tol = 1e-12 * max(np.max(np.abs(omega)), 1.0)
    sign = np.where(omega > tol, 1, np.where(omega < -tol, -1, 0))
    nonzero = np.nonzero(sign)[0]
    if nonzero.size == 0:
        return []
    out = []
    prev = nonzero[-1]  # wrap: compare the last nonzero sample with the first
    for i in nonzero:
        if sign[i] != sign[prev]:
            out.append(int(i))
        prev = i
    return out


# ---------------------------------------------------------------------------
# duals and equidistants


def equidistant(front: WaveFront, d: float) -> WaveFront:
    """Front moved geodesic distance d along its co-orientation.

    Positive d moves toward the co-orientation (inward for convex fronts
    built by `build`); pass negative d for outward evolution.  The frame
    data transports exactly: w -> c(d) w - s(d) omega and
    omega -> c(d) omega + K s(d) w with K the curvature sign.
    """
    if front.evaluator is not None:
        evaluator = _TransportEvaluator(front.evaluator, d)
        n = front.n_samples
        us = np.arange(n) * (front.period / n)
        return _front_from_fields(front.model, evaluator(us), front.period, evaluator)
    m = front.model
    k = m.curvature
    c, s = m.c(d), m.s(d)
    fields = {
        "positions": c * front.positions + s * front.coorient,
        "d1": (c * front.w - s * front.omega)[:, None] * front.epsilon,
        "d2": None,
        "epsilon": front.epsilon,
        "coorient": c * front.coorient - k * s * front.positions,
        "w": c * front.w - s * front.omega,
        "omega": c * front.omega + k * s * front.w,
    }
    return _front_from_fields(m, fields, front.period)


def dual(front: WaveFront) -> WaveFront:
    """Spherical dual: every point moved pi/2 along the co-orientation."""
    if front.model is not SurfaceModel.SPHERE:
        raise WrongModel("dual curves live on the sphere")
    return equidistant(front, np.pi / 2.0)


# ---------------------------------------------------------------------------
# hyperbolic support functions


@dataclass(frozen=True)
class SupportFunction:
    """Periodic support function with analytic derivatives (Fourier form)."""

    h0: float
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()
    offset: float = 0.0

    def value(self, phi, order=0):
        phi = np.asarray(phi, dtype=float)
        out = np.full(phi.shape, (self.h0 + self.offset) if order == 0 else 0.0)
        for n, a in enumerate(self.cos_coeffs, start=1):
            out += a * (n**order) * np.cos(n * phi + order * np.pi / 2.0)
        for n, b in enumerate(self.sin_coeffs, start=1):
            out += b * (n**order) * np.sin(n * phi + order * np.pi / 2.0)
        return out

    def with_offset(self, c):
        return replace(self, offset=self.offset + c)


def support_curvature(h: SupportFunction, phi, cusp_tol=1e-12):
    """Geodesic curvature of the hyperbolic front with support function h.

    Returns (k, cusp) where k is the signed ratio

        (H'' sinh H + (1 + H'^2) cosh H) / (H'' cosh H + (1 + H'^2) sinh H)

    evaluated at phi, and cusp flags points where the denominator is
    within cusp_tol of zero (the front has a cusp there and |k| -> inf).
    """
    phi = np.asarray(phi, dtype=float)
    H = h.value(phi)
    H1 = h.value(phi, order=1)
    H2 = h.value(phi, order=2)
    num = H2 * np.sinh(H) + (1.0 + H1**2) * np.cosh(H)
    den = H2 * np.cosh(H) + (1.0 + H1**2) * np.sinh(H)
    cusp = np.abs(den) < cusp_tol
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(cusp, np.inf, num / np.where(cusp, 1.0, den))
    if k.ndim == 0:
        return float(k), bool(cusp)
    return k, cusp


def horocyclic_margin(front: WaveFront) -> float:
    """min(|kappa|) - 1 evaluated cusp-robustly as min(|omega| - |w|)."""
    return float(np.min(np.abs(front.omega) - np.abs(front.w)))
