"""Ambient linear algebra for the unit sphere and the hyperboloid model.

Both surfaces are embedded in R^3.  The sphere carries the Euclidean
bilinear form diag(+1, +1, +1); the hyperbolic plane is the upper sheet
of the hyperboloid <v, v> = -1, z > 0, with the Lorentz form
diag(+1, +1, -1).  Restricted to tangent spaces the Lorentz form is
positive definite, so unit tangent vectors make sense on both surfaces.

All functions are pure and accept numpy arrays with shape (..., 3); they
broadcast over leading axes.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import NullVector, WrongSheet

SURFACE_TOL = 1e-12
TANGENT_TOL = 1e-10


class SurfaceModel(Enum):
    """Constant-curvature surface selector: sphere (+1) or hyperbolic (-1)."""

    SPHERE = "sphere"
    HYPERBOLIC = "hyperbolic"

    @property
    def curvature(self):
        """Sign of the Gauss curvature: +1 or -1."""
        return 1.0 if self is SurfaceModel.SPHERE else -1.0

    def c(self, x):
        """Model cosine: cos on the sphere, cosh on the hyperboloid."""
        return np.cos(x) if self is SurfaceModel.SPHERE else np.cosh(x)

    def s(self, x):
        """Model sine: sin on the sphere, sinh on the hyperboloid."""
        return np.sin(x) if self is SurfaceModel.SPHERE else np.sinh(x)

    def cot(self, x):
        """Model cotangent: cot(x) or coth(x); the steering coefficient."""
        return self.c(x) / self.s(x)

    @classmethod
    def from_name(cls, name):
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown surface model {name!r}") from None


def inner(u, w, model):
    """Model bilinear form of two ambient vectors.

    Euclidean dot product on the sphere; on the hyperboloid the
    z-component enters with a minus sign (Lorentz form).
    """
    u = np.asarray(u, dtype=float)
    w = np.asarray(w, dtype=float)
    s = u[..., 0] * w[..., 0] + u[..., 1] * w[..., 1]
    if model is SurfaceModel.SPHERE:
        return s + u[..., 2] * w[..., 2]
    return s - u[..., 2] * w[..., 2]


def cross(u, w, model):
    """Model cross product.

    Sphere: the usual cross product.  Hyperboloid: the Lorentz cross
    product (determinant expansion with the third unit vector negated),
    which is model-orthogonal to both arguments.
    """
    c = np.cross(np.asarray(u, dtype=float), np.asarray(w, dtype=float))
    if model is SurfaceModel.HYPERBOLIC:
        c = c * np.array([1.0, 1.0, -1.0])
    return c


def norm(u, model):
    """sqrt(|<u, u>|) under the model form."""
    return np.sqrt(np.abs(inner(u, u, model)))


def project_to_surface(v, model):
    """Rescale an ambient vector onto the surface (|<v,v>| = 1).

    Raises NullVector when the form is too close to zero to normalize
    and WrongSheet for hyperboloid points with z <= 0.
    """
    v = np.asarray(v, dtype=float)
    q = inner(v, v, model)
    if np.any(np.abs(q) < 1e-14):
        raise NullVector("cannot project a (near-)null vector to the surface")
    if model is SurfaceModel.HYPERBOLIC:
        if np.any(q >= 0):
            raise NullVector("hyperboloid points need <v,v> < 0")
        if np.any(v[..., 2] <= 0):
            raise WrongSheet("hyperboloid point must have z > 0")
    return v / np.sqrt(np.abs(q))[..., None]


def geodesic_point(p, t, d, model):
    """Point at geodesic distance d from p along the unit tangent t.

    Implements c(d) * p + s(d) * t with the model trig, renormalized to
    kill floating point drift off the surface.
    """
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    d = np.asarray(d, dtype=float)
    out = model.c(d)[..., None] * p + model.s(d)[..., None] * t
    return project_to_surface(out, model)


def is_on_surface(v, model, tol=SURFACE_TOL):
    """True where <v,v> = +/-1 within tol (and z > 0 on the hyperboloid)."""
    q = inner(v, v, model)
    ok = np.abs(q - model.curvature) <= tol
    if model is SurfaceModel.HYPERBOLIC:
        ok = ok & (np.asarray(v)[..., 2] > 0)
    return ok


def is_unit_tangent(base, v, model, tol=TANGENT_TOL):
    """True where v is tangent to the surface at base and has unit norm."""
    tangent = np.abs(inner(base, v, model)) <= tol
    unit = np.abs(inner(v, v, model) - 1.0) <= tol
    return tangent & unit


def tangent_frame_at(p, model):
    """Orthonormal tangent basis (e1, e2) at a surface point p.

    Deterministic: e1 is the normalized tangent projection of the x-axis
    (or y-axis when degenerate), e2 completes the frame via the model
    cross product.
    """
    p = np.asarray(p, dtype=float)
    for seed in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
        # model Gram-Schmidt: subtract the component along p
        e1 = seed - (inner(seed, p, model) / inner(p, p, model)) * p
        n = norm(e1, model)
        if n > 1e-8:
            e1 = e1 / n
            break
    e2 = cross(p, e1, model)
    e2 = e2 / norm(e2, model)
    return e1, e2
