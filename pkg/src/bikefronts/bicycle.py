"""Steering-angle ODE and rear/front track reconstruction.

The bicycle frame is a geodesic segment of length l whose rear endpoint
traces a curve tangent to the frame.  Given the front track Gamma with
arclength s and geodesic curvature kappa, the steering angle alpha
between the front velocity and the frame direction obeys

    d(alpha)/ds + kappa(s) = c0 * sin(alpha),   c0 = cot(l) or coth(l).

A single implementation covers both surfaces: every formula uses the
model trig of SurfaceModel, which maps sin/cos/tan/cot to their
hyperbolic counterparts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCurve, SpecInvalid, StepUnstable
from .geometry import SurfaceModel, cross, project_to_surface, norm
from .kernels import steering_rk4
from .numerics import circle_distance, spectral_derivative, unwrap_angle
from .wavefront import WaveFront, _front_from_fields

_HALF_PI = 0.5 * np.pi


@dataclass(frozen=True)
class BicycleParams:
    """Bicycle length, surface model, and RK4 substep count."""

    l: float
    model: SurfaceModel
    steps_per_sample: int = 4

    def __post_init__(self):
        if not self.l > 0:
            raise SpecInvalid("bicycle length must be positive")
        if self.model is SurfaceModel.SPHERE and self.l > _HALF_PI:
            # l = pi/2 exactly is allowed: it is the derivative-curve case
            raise SpecInvalid("spherical bicycle length must not exceed pi/2")
        if self.steps_per_sample < 1:
            raise SpecInvalid("steps_per_sample must be at least 1")

    @property
    def c0(self):
        """Steering coefficient cot(l) / coth(l)."""
        return float(self.model.cot(self.l))


@dataclass(frozen=True)
class SteeringSolution:
    """Steering angle along the front, one sample per front sample."""

    alpha: np.ndarray
    alpha_end: float
    params: BicycleParams
    front: WaveFront

    @property
    def periodicity_residual(self):
        """Circle distance between alpha at the start and end of the loop."""
        return float(circle_distance(self.alpha_end, self.alpha[0]))


@dataclass(frozen=True)
class RearTrack:
    """Rear-wheel curve with its steering data.

    ``sigma`` is the wheel orientation to feed back into
    ``front_from_rear`` for an exact round trip: the stored tangent
    frame of the track points away from the front wheel, so the front
    sits at sigma = -1.
    """

    track: WaveFront
    alpha_source: SteeringSolution
    sigma: int = -1


def steering_rhs(alpha, kappa, params: BicycleParams):
    """Right-hand side c0 * sin(alpha) - kappa of the steering ODE."""
    return params.c0 * np.sin(alpha) - kappa


def integrate_steering(front: WaveFront, params: BicycleParams, alpha0: float) -> SteeringSolution:
    """Integrate the steering ODE once around a smooth closed front.

    Classical RK4 in the curve parameter with exact (or spectrally
    resampled) speed and curvature at every stage node.  Raises
    StepUnstable when alpha leaves a +/-20 pi window.
    """
    if front.cusps.indices:
        raise SpecInvalid("steering integration requires a smooth front (no cusps)")
    sps = params.steps_per_sample
    n_steps = front.n_samples * sps
    sigma, kappa = front.fine_fields(sps)
    h = front.period / n_steps
    alpha, status = steering_rk4(sigma, kappa, params.c0, h, n_steps, sps, alpha0)
    if status != 0:
        raise StepUnstable("steering angle blew up; check curvature and bicycle length")
    return SteeringSolution(alpha=alpha[:-1], alpha_end=float(alpha[-1]), params=params, front=front)


def rear_track(front: WaveFront, sol: SteeringSolution) -> RearTrack:
    """Reconstruct the rear-wheel wave front from a steering solution.

    The rear point sits at geodesic distance l from the front along
    v = cos(alpha) T + sin(alpha) n, where n is the 90-degree rotation
    of the front tangent T.  Signed speed is cos(alpha) * |Gamma'| and
    the curvature numerator is sin(alpha) * |Gamma'| / s(l), so cusps
    fall where cos(alpha) crosses zero.
    """
    if sol.front is not front:
        raise SpecInvalid("steering solution belongs to a different front")
    m = front.model
    p = sol.params
    k = m.curvature
    cl, sl = m.c(p.l), m.s(p.l)
    sigma_f = front.speed
    t = front.d1 / sigma_f[:, None]
    n = cross(front.positions, t, m)
    ca, sa = np.cos(sol.alpha), np.sin(sol.alpha)
    v = ca[:, None] * t + sa[:, None] * n
    gamma = project_to_surface(cl * front.positions + sl * v, m)
    # frame direction continued past the rear wheel (unit, smooth through cusps)
    eps = cl * v - k * sl * front.positions
    nu = cross(gamma, eps, m)
    nu = nu / norm(nu, m)[:, None]
    w = ca * sigma_f
    omega = sa * sigma_f / sl
    if np.max(np.abs(w)) < 1e-9 * max(np.max(np.abs(omega)), 1.0):
        raise DegenerateCurve("rear track collapses to a point (cos(alpha) == 0)")
    track = _front_from_fields(
        m,
        {
            "positions": gamma,
            "d1": w[:, None] * eps,
            "d2": None,
            "epsilon": eps,
            "coorient": nu,
            "w": w,
            "omega": omega,
        },
        period=front.period,
    )
    return RearTrack(track=track, alpha_source=sol)


def front_from_rear(rear: WaveFront, l: float, sigma: int = 1) -> WaveFront:
    """Front track of a bicycle whose rear wheel rides the given curve.

    Positions are c(l) * gamma + sigma * s(l) * epsilon with epsilon the
    stored unit tangent frame; at l = pi/2 on the sphere this is the
    derivative curve.  The rotation rate of the new front is
    c(l) * omega + d/du atan2(s(l) * omega, w), evaluated spectrally.
    """
    if sigma not in (1, -1):
        raise SpecInvalid("sigma must be +1 or -1")
    m = rear.model
    k = m.curvature
    cl, sl = m.c(l), m.s(l)
    # sigma = -1 is the same construction on the flipped frame
    eps = sigma * rear.epsilon
    nu = sigma * rear.coorient
    w = sigma * rear.w
    omega = rear.omega
    pos = project_to_surface(cl * rear.positions + sl * eps, m)
    d1 = (-k * sl * w)[:, None] * rear.positions + (cl * w)[:, None] * eps + (sl * omega)[:, None] * nu
    speed = np.sqrt(w**2 + (sl * omega) ** 2)
    if np.min(speed) <= 0:
        raise DegenerateCurve("reconstructed front has vanishing speed")
    phi = unwrap_angle(np.arctan2(sl * omega, w))
    omega_front = cl * omega + _periodic_angle_rate(phi, rear.period)
    nu_front = (w[:, None] * nu - (cl * sl * omega)[:, None] * eps + (k * sl**2 * omega)[:, None] * rear.positions) / speed[:, None]
    return _front_from_fields(
        m,
        {
            "positions": pos,
            "d1": d1,
            "d2": None,
            "epsilon": d1 / speed[:, None],
            "coorient": nu_front,
            "w": speed,
            "omega": omega_front,
        },
        period=rear.period,
    )


def _periodic_angle_rate(phi, period):
    """d(phi)/du for an unwrapped angle with a possible integer winding.

    The linear winding trend is removed before the FFT derivative and
    added back, so the spectral differentiation sees periodic data.
    """
    n = phi.shape[0]
    u = np.arange(n) * (period / n)
    step = (phi[0] - phi[-1] + np.pi) % (2.0 * np.pi) - np.pi  # wrapped closing step
    winding = np.round((phi[-1] + step - phi[0]) / (2.0 * np.pi))
    trend = winding * 2.0 * np.pi / period
    return spectral_derivative(phi - trend * u, period) + trend


@dataclass(frozen=True)
class SpeedRatioReport:
    """Residuals of the arclength identities of a rear track."""

    max_speed_residual: float
    max_ratio_residual: float

    @property
    def max_residual(self):
        return max(self.max_speed_residual, self.max_ratio_residual)


def speed_ratio_check(rear: RearTrack, mask_floor: float = 1e-3) -> SpeedRatioReport:
    """Check |dt/ds| = |cos alpha| and (ds/dt)^2 = s(l)^2 k^2 + 1.

    The rear speed is measured independently by spectral differentiation
    of the rear positions, so the check does not reuse the transported
    frame fields.  The ratio identity is evaluated away from cusps
    (samples with |cos alpha| above mask_floor).
    """
    sol = rear.alpha_source
    front = sol.front
    m = front.model
    track = rear.track
    d_pos = np.stack(
        [spectral_derivative(track.positions[:, i], track.period) for i in range(3)], axis=1
    )
    speed_num = norm(d_pos, m)
    sigma_f = front.speed
    ca = np.cos(sol.alpha)
    speed_residual = np.max(np.abs(speed_num - np.abs(ca) * sigma_f))
    sl = m.s(sol.params.l)
    kk = np.tan(sol.alpha) / sl
    mask = np.abs(ca) > mask_floor
    ratio = (sigma_f[mask] / (speed_num[mask] * np.sign(ca[mask]))) ** 2
    ratio_residual = np.max(np.abs(ratio - (sl**2 * kk[mask] ** 2 + 1.0)))
    return SpeedRatioReport(float(speed_residual), float(ratio_residual))
