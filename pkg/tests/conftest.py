"""Shared fixtures and random curve generators for the test suite."""

import numpy as np
import pytest

from bikefronts import CurveSpec, SurfaceModel, build, horocyclic_margin, menzin_threshold
from bikefronts.wavefront import area_convex, total_curvature


def random_polar_spec(rng, model, rho_range=(0.6, 1.1), n_harmonics=4, amp=0.05, samples=1024):
    """Random polar-Fourier spec with harmonics damped by 1/n^2."""
    rho0 = rng.uniform(*rho_range)
    scale = amp / (1.0 + np.arange(n_harmonics)) ** 2
    cos = rng.uniform(-1.0, 1.0, n_harmonics) * scale
    sin = rng.uniform(-1.0, 1.0, n_harmonics) * scale
    return CurveSpec(
        model=model,
        kind="polar_fourier",
        rho0=float(rho0),
        fourier_cos=tuple(float(c) for c in cos),
        fourier_sin=tuple(float(s) for s in sin),
        samples=samples,
    )


def random_convex_spec(rng, model, samples=1024, min_margin=1e-3, **kwargs):
    """Random convex spec: min kappa > min_margin (sphere) or |kappa| > 1 + margin (hyperbolic)."""
    for _ in range(200):
        spec = random_polar_spec(rng, model, samples=samples, **kwargs)
        front = build(spec)
        if model is SurfaceModel.SPHERE:
            if np.min(front.kappa) > min_margin:
                return spec
        else:
            if horocyclic_margin(front) > min_margin * np.max(np.abs(front.w)):
                return spec
    raise RuntimeError("could not generate a convex spec; widen the parameters")


def random_above_threshold_spec(rng, model, l, samples=1024, rel_margin=0.05, **kwargs):
    """Random convex spec whose area clears the circle-of-radius-l threshold."""
    threshold = menzin_threshold(model, l)
    for _ in range(200):
        spec = random_convex_spec(rng, model, samples=samples, **kwargs)
        front = build(spec)
        if model is SurfaceModel.SPHERE:
            area = area_convex(front)
        else:
            area = total_curvature(front) - 2.0 * np.pi
        if area > threshold * (1.0 + rel_margin):
            return spec
    raise RuntimeError("could not generate an above-threshold spec")


@pytest.fixture()
def rng():
    # function scope: every test sees the same stream regardless of which
    # subset of the suite runs, keeping failures reproducible in isolation
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def sphere_circle():
    return build(CurveSpec(model=SurfaceModel.SPHERE, kind="circle", radius=1.0, samples=1024))


@pytest.fixture(scope="session")
def hyp_circle():
    return build(CurveSpec(model=SurfaceModel.HYPERBOLIC, kind="circle", radius=1.0, samples=1024))
