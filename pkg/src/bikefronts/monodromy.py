"""Mobius monodromy of a closed front: computation, classification, fixed points.

In the projective coordinate y = tan(alpha / 2) the steering ODE becomes
the Riccati equation y' = -(kappa/2) y^2 + c0 y - kappa/2, whose linear
lift is U' = A(s) U with the trace-free matrix

    A = [[c0/2, -kappa/2], [kappa/2, -c0/2]].

The monodromy map of the front is the Mobius action of U over one
period.  Classification follows |trace| against 2: elliptic below,
parabolic within tolerance, hyperbolic above (identity when the whole
matrix is within tolerance of +/-I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bicycle import BicycleParams, integrate_steering, rear_track, front_from_rear
from .errors import NotHyperbolic, SpecInvalid
from .geometry import SurfaceModel
from .kernels import sl2_rk4
from .wavefront import WaveFront, algebraic_length


class MobiusClass(Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    IDENTITY = "identity"


DEFAULT_TOL_PARABOLIC = 1e-8


@dataclass(frozen=True)
class FixedPointData:
    """A fixed point of the circle action with its multiplier."""

    y: float
    theta: float
    derivative: float

    @property
    def attracting(self):
        return self.derivative < 1.0


@dataclass(frozen=True)
class MobiusMap:
    """PSL(2, R) representative of a monodromy map.

    ``mat`` has determinant 1 and trace >= 0 whenever the propagator is
    representable in doubles.  For violently hyperbolic maps (tiny
    bicycle length) the matrix is kept rescaled: ``log_scale`` > 0 and
    ``log_abs_trace`` stays finite while ``mat`` holds the direction
    information only.
    """

    mat: np.ndarray
    tol_parabolic: float = DEFAULT_TOL_PARABOLIC
    det_drift: float = 0.0
    log_scale: float = 0.0
    log_abs_trace: float = float("nan")

    @classmethod
    def from_matrix(cls, mat, tol_parabolic=DEFAULT_TOL_PARABOLIC, det_drift=0.0):
        mat = np.asarray(mat, dtype=float)
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        if det <= 0:
            raise ValueError("Mobius matrix needs positive determinant")
        return cls._canonical(mat / math.sqrt(det), tol_parabolic, det_drift, 0.0)

    @classmethod
    def from_propagator(cls, u_hat, log_scale, tol_parabolic, det_drift):
        """Build from the SL(2) kernel output, overflow-safely.

        For moderate entries the matrix is normalized by sqrt(det).
        Once entries pass ~1e6 (or the kernel rescaled on the fly) the
        float64 determinant is cancellation noise while the true
        determinant is 1 by construction, so the map is kept in scaled
        form and the trace log comes straight from the entries.
        """
        u_hat = np.asarray(u_hat, dtype=float)
        big = float(np.max(np.abs(u_hat)))
        if log_scale == 0.0 and big < 1e6:
            det_hat = u_hat[0, 0] * u_hat[1, 1] - u_hat[0, 1] * u_hat[1, 0]
            return cls._canonical(u_hat / math.sqrt(det_hat), tol_parabolic, det_drift, 0.0)
        tr_hat = u_hat[0, 0] + u_hat[1, 1]
        return cls(
            mat=u_hat / big,
            tol_parabolic=tol_parabolic,
            det_drift=det_drift,
            log_scale=log_scale + math.log(big),
            log_abs_trace=math.log(abs(tr_hat)) + log_scale,
        )

    @classmethod
    def _canonical(cls, mat, tol_parabolic, det_drift, log_scale):
        tr = mat[0, 0] + mat[1, 1]
        if tr < 0:
            mat = -mat
            tr = -tr
        mat = mat.copy()
        mat.flags.writeable = False
        return cls(
            mat=mat,
            tol_parabolic=tol_parabolic,
            det_drift=det_drift,
            log_scale=log_scale,
            log_abs_trace=math.log(tr) if tr > 0 else float("-inf"),
        )

    @property
    def a(self):
        return float(self.mat[0, 0])

    @property
    def b(self):
        return float(self.mat[0, 1])

    @property
    def c(self):
        return float(self.mat[1, 0])

    @property
    def d(self):
        return float(self.mat[1, 1])

    @property
    def rescaled(self):
        return self.log_scale != 0.0

    @property
    def trace(self):
        return self.a + self.d

    @property
    def abs_trace(self):
        if self.rescaled:
            return math.exp(self.log_abs_trace) if self.log_abs_trace < 700 else math.inf
        return abs(self.trace)

    @property
    def classification(self):
        tol = self.tol_parabolic
        excess = self.abs_trace - 2.0
        if excess > tol:
            return MobiusClass.HYPERBOLIC
        if excess < -tol:
            return MobiusClass.ELLIPTIC
        if not self.rescaled and np.max(np.abs(self.mat - np.eye(2))) < tol:
            return MobiusClass.IDENTITY
        return MobiusClass.PARABOLIC

    def act(self, theta):
        return act(self, theta)

    def fixed_points(self):
        return fixed_points(self)


def sl2_coefficients(kappa, params: BicycleParams):
    """Trace-free lift matrix A(kappa) of the Riccati steering flow."""
    c0 = params.c0
    return np.array([[0.5 * c0, -0.5 * kappa], [0.5 * kappa, -0.5 * c0]])


def compute_monodromy(
    front: WaveFront,
    params: BicycleParams,
    tol_parabolic: float = DEFAULT_TOL_PARABOLIC,
) -> MobiusMap:
    """Integrate the SL(2) lift once around the front and classify it."""
    if not front.closed:
        raise SpecInvalid("monodromy needs a closed front")
    if front.cusps.indices:
        raise SpecInvalid("monodromy integration requires a smooth front")
    sps = params.steps_per_sample
    n_steps = front.n_samples * sps
    sigma, kappa = front.fine_fields(sps)
    h = front.period / n_steps
    u_hat, log_scale, det_drift = sl2_rk4(sigma, kappa, params.c0, h, n_steps)
    return MobiusMap.from_propagator(u_hat, log_scale, tol_parabolic, det_drift)


def _theta_from_homogeneous(p, q):
    """Canonical angle in (-pi, pi] of the projective point (p : q)."""
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    if q == 0:
        return math.pi
    return 2.0 * math.atan2(p, q)


def act(m: MobiusMap, theta):
    """Mobius action on circle angles via y = tan(theta / 2).

    Computed in homogeneous coordinates, so theta = pi (y = infinity)
    and zeros of c y + d need no special casing.
    """
    theta = np.asarray(theta, dtype=float)
    p = np.sin(theta / 2.0)
    q = np.cos(theta / 2.0)
    p2 = m.a * p + m.b * q
    q2 = m.c * p + m.d * q
    if theta.ndim == 0:
        return _theta_from_homogeneous(float(p2), float(q2))
    flip = (q2 < 0) | ((q2 == 0) & (p2 < 0))
    p2 = np.where(flip, -p2, p2)
    q2 = np.where(flip, -q2, q2)
    out = 2.0 * np.arctan2(p2, q2)
    return np.where(q2 == 0, np.pi, out)


def _fixed_point_from_vector(v1, v2, derivative):
    theta = _theta_from_homogeneous(v1, v2)
    y = math.inf if v2 == 0 else v1 / v2
    return FixedPointData(y=y, theta=theta, derivative=derivative)


def fixed_points(m: MobiusMap):
    """Fixed points on the circle: [] (elliptic/identity), one (parabolic),
    or [attracting, repelling] (hyperbolic).

    Eigenvectors give the projective fixed points; the multiplier at an
    eigenvector with eigenvalue mu is 1 / mu^2.  For rescaled giant maps
    the repelling direction comes from the adjugate, which stays well
    conditioned in the rank-one limit.
    """
    cls = m.classification
    if cls in (MobiusClass.ELLIPTIC, MobiusClass.IDENTITY):
        return []
    a, b, c, d = m.a, m.b, m.c, m.d
    if cls is MobiusClass.PARABOLIC:
        # double root: null vector of (M - I), picked from the larger row
        v_row1 = (b, 1.0 - a)
        v_row2 = (1.0 - d, c)
        v = max((v_row1, v_row2), key=lambda t: t[0] ** 2 + t[1] ** 2)
        return [_fixed_point_from_vector(v[0], v[1], 1.0)]
    if m.rescaled:
        mat = m.mat
        adj = np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]])
        v_att = _dominant_eigenvector(mat)
        v_rep = _dominant_eigenvector(adj)
        # true multipliers underflow/overflow; report the limits
        return [
            _fixed_point_from_vector(v_att[0], v_att[1], 0.0),
            _fixed_point_from_vector(v_rep[0], v_rep[1], math.inf),
        ]
    tr = a + d
    disc = math.sqrt(max(tr * tr - 4.0, 0.0))
    mu_big = 0.5 * (tr + disc)
    mu_small = 0.5 * (tr - disc)
    out = []
    for mu in (mu_big, mu_small):
        v_row1 = (b, mu - a)
        v_row2 = (mu - d, c)
        v = max((v_row1, v_row2), key=lambda t: t[0] ** 2 + t[1] ** 2)
        out.append(_fixed_point_from_vector(v[0], v[1], 1.0 / (mu * mu)))
    return out


def _dominant_eigenvector(mat):
    vals, vecs = np.linalg.eig(mat)
    i = int(np.argmax(np.abs(vals)))
    v = np.real(vecs[:, i])
    return v / np.max(np.abs(v))


@dataclass(frozen=True)
class LengthDerivativeReport:
    """Fixed-point multiplier against the rear-track signed length.

    ``residual`` and ``trace_residual`` test the plain identities
    M'(theta0) = exp(-L) and |tr| = 2 cosh(L / 2).  The curved-surface
    flow actually linearizes with an extra factor c0 = cot(l) (coth(l)),
    so the ``scaled_*`` residuals test M'(theta0) = exp(c0 * L) and
    |tr| = 2 cosh(c0 * L / 2); see the acceptance notes in the README.
    """

    derivative: float
    rear_length: float
    c0: float
    abs_trace: float
    residual: float
    scaled_residual: float
    trace_residual: float
    scaled_trace_residual: float


def length_derivative_check(front: WaveFront, params: BicycleParams) -> LengthDerivativeReport:
    """Compare the attracting fixed-point multiplier with the rear length."""
    m = compute_monodromy(front, params)
    if m.classification is not MobiusClass.HYPERBOLIC or m.rescaled:
        raise NotHyperbolic("length/derivative check needs a (representable) hyperbolic map")
    fps = fixed_points(m)
    att = fps[0] if fps[0].attracting else fps[1]
    sol = integrate_steering(front, params, att.theta)
    rear = rear_track(front, sol)
    length = algebraic_length(rear.track)
    deriv = att.derivative
    stated = math.exp(-length)
    scaled = math.exp(params.c0 * length)
    tr = m.abs_trace
    return LengthDerivativeReport(
        derivative=deriv,
        rear_length=length,
        c0=params.c0,
        abs_trace=tr,
        residual=abs(deriv - stated) / stated,
        scaled_residual=abs(deriv - scaled) / scaled,
        trace_residual=abs(tr - 2.0 * math.cosh(length / 2.0)),
        scaled_trace_residual=abs(tr - 2.0 * math.cosh(params.c0 * length / 2.0)),
    )


@dataclass(frozen=True)
class SmallLProbe:
    """Classification and fixed points at a tiny bicycle length."""

    classification: MobiusClass
    thetas: tuple
    attracting_theta: float
    log_abs_trace: float


def small_l_probe(
    front: WaveFront, model: SurfaceModel, l: float = 1e-3, steps_per_sample: int = 4
) -> SmallLProbe:
    """Probe the monodromy at a tiny bicycle length.

    The propagator grows like exp(c0 * length), far beyond double range,
    so the kernel rescales on the fly and the fixed points are read off
    the rescaled matrix (attracting) and its adjugate (repelling).  The
    attracting direction sits near theta = pi: the rear wheel trails the
    front one.
    """
    params = BicycleParams(l=l, model=model, steps_per_sample=steps_per_sample)
    m = compute_monodromy(front, params)
    fps = fixed_points(m)
    att = None
    thetas = tuple(fp.theta for fp in fps)
    for fp in fps:
        if fp.attracting:
            att = fp.theta
            break
    return SmallLProbe(
        classification=m.classification,
        thetas=thetas,
        attracting_theta=att if att is not None else float("nan"),
        log_abs_trace=m.log_abs_trace,
    )


def derivative_curve_identity(rear: WaveFront) -> float:
    """Deviation of the l = pi/2 front's monodromy from +/-identity.

    Builds the derivative curve of the rear track (front at l = pi/2 on
    the sphere, where cot(l) = 0) and returns min over the sign of the
    max-norm distance of the monodromy matrix from +/-I.
    """
    if rear.model is not SurfaceModel.SPHERE:
        raise SpecInvalid("derivative curves live on the sphere")
    front = front_from_rear(rear, np.pi / 2.0, sigma=1)
    params = BicycleParams(l=np.pi / 2.0, model=SurfaceModel.SPHERE)
    m = compute_monodromy(front, params)
    eye = np.eye(2)
    return float(min(np.max(np.abs(m.mat - eye)), np.max(np.abs(m.mat + eye))))
