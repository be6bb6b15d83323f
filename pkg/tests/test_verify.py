import numpy as np
import pytest

from bikefronts import (
    BicycleParams,
    CurveSpec,
    MobiusClass,
    NoFixedPoint,
    SurfaceModel,
    algebraic_length,
    build,
    check_curvature_relation,
    check_hyperbolic_isoperimetric,
    check_spherical_isoperimetric,
    compute_monodromy,
    equidistant,
    find_parabolic_length,
    menzin_sweep,
    menzin_threshold,
)
from conftest import random_above_threshold_spec, random_convex_spec

S = SurfaceModel.SPHERE
H = SurfaceModel.HYPERBOLIC


def circle_spec(model, r, n=1024):
    return CurveSpec(model=model, kind="circle", radius=r, samples=n)


# --- curvature relation -----------------------------------------------------------


@pytest.mark.parametrize("model", [S, H])
def test_curvature_relation_circle(model):
    front = build(circle_spec(model, 1.0, n=2048))
    rep = check_curvature_relation(front, BicycleParams(l=0.5, model=model))
    assert rep.passed
    assert rep.residual < 1e-7
    # closed forms: front integral c(l)-times the rear one via Pythagoras
    c_front = 2 * np.pi * model.c(1.0)
    assert rep.lhs == pytest.approx(c_front, abs=1e-8)


def test_curvature_relation_small_l_limit():
    front = build(circle_spec(S, 1.0, n=2048))
    rep = check_curvature_relation(front, BicycleParams(l=1e-3, model=S, steps_per_sample=8))
    assert abs(rep.lhs - rep.rhs / np.cos(1e-3)) < 1e-4  # front and rear coincide
    assert rep.residual < 1e-4


def test_curvature_relation_no_fixed_point():
    front = build(circle_spec(S, 0.4))
    with pytest.raises(NoFixedPoint):
        check_curvature_relation(front, BicycleParams(l=0.5, model=S))


def test_curvature_relation_random(rng):
    for model in (S, H):
        spec = random_above_threshold_spec(rng, model, l=0.4)
        rep = check_curvature_relation(build(spec), BicycleParams(l=0.4, model=model))
        assert rep.residual < 1e-6


# --- isoperimetric checks -----------------------------------------------------------


def test_spherical_iso_circle_equality():
    rep = check_spherical_isoperimetric(build(circle_spec(S, 0.8)))
    assert rep.passed and rep.hypothesis_ok
    assert abs(rep.inputs["margin"]) < 1e-6


def test_spherical_iso_hypothesis_gating():
    dimpled = build(CurveSpec(model=S, kind="polar_fourier", rho0=0.8, fourier_cos=(0, 0, 0.25), samples=512))
    rep = check_spherical_isoperimetric(dimpled)
    assert not rep.hypothesis_ok
    assert rep.passed  # not asserted under a violated hypothesis


def test_spherical_iso_convex_margin(rng):
    for _ in range(5):
        front = build(random_convex_spec(rng, S))
        rep = check_spherical_isoperimetric(front)
        assert rep.inputs["margin"] >= -1e-9


def test_hyperbolic_iso_circle_and_equidistants():
    front = build(circle_spec(H, 0.9))
    rep = check_hyperbolic_isoperimetric(front)
    assert abs(rep.inputs["margin"]) < 1e-6
    for t in (0.5, 1.5):
        rep_t = check_hyperbolic_isoperimetric(equidistant(front, -t))
        assert abs(rep_t.inputs["margin"]) < 1e-5


def test_hyperbolic_iso_random(rng):
    for _ in range(5):
        front = build(random_convex_spec(rng, H))
        rep = check_hyperbolic_isoperimetric(front)
        assert rep.passed
        assert rep.inputs["margin"] >= -1e-9


# --- parabolic length ----------------------------------------------------------------


def test_parabolic_length_circle():
    front = build(circle_spec(S, 0.8, n=2048))
    l_par = find_parabolic_length(front, np.pi / 2 - 0.01, S)
    assert l_par == pytest.approx(0.8, abs=1e-6)
    m = compute_monodromy(front, BicycleParams(l=l_par, model=S))
    assert abs(m.abs_trace - 2.0) <= 1e-9


def test_parabolic_length_none_above_threshold(rng):
    spec = random_above_threshold_spec(rng, S, l=1.0, rho_range=(1.1, 1.3))
    front = build(spec)
    assert find_parabolic_length(front, 1.0, S) is None


def test_parabolic_length_none_for_great_circle():
    front = build(circle_spec(S, np.pi / 2, n=512))
    assert find_parabolic_length(front, np.pi / 2 - 0.05, S) is None


def test_parabolic_rear_satisfies_isoperimetric_bound(rng):
    # zero algebraic length forces a curvature integral of at least 2 pi
    from bikefronts import cusp_scan, fixed_points, integrate_steering, rear_track
    from bikefronts.wavefront import _curvature_integral

    spec = random_convex_spec(rng, S, rho_range=(0.6, 0.9), samples=2048)
    front = build(spec)
    l_par = find_parabolic_length(front, np.pi / 2 - 0.01, S)
    assert l_par is not None
    params = BicycleParams(l=l_par, model=S)
    fps = fixed_points(compute_monodromy(front, params))
    sol = integrate_steering(front, params, fps[0].theta)
    rear = rear_track(front, sol).track
    assert cusp_scan(rear).indices
    rear_acc = _curvature_integral(rear)
    assert rear_acc >= 2 * np.pi - 1e-4
    iso = rear_acc**2 + algebraic_length(rear) ** 2
    assert iso >= 4 * np.pi**2 - 1e-6


def test_trace_decreases_in_l_on_circles():
    front = build(circle_spec(S, 0.9, n=1024))
    traces = []
    for l in (0.2, 0.4, 0.6, 0.8):
        m = compute_monodromy(front, BicycleParams(l=l, model=S))
        traces.append(m.abs_trace)
    assert all(traces[i] > traces[i + 1] for i in range(3))


# --- Menzin sweep -----------------------------------------------------------------------


def test_menzin_sweep_circle_family_sphere():
    specs = [circle_spec(S, r) for r in (0.3, 0.45, 0.55, 0.8, 1.2)]
    rep = menzin_sweep(specs, [0.5], find_parabolic=False)
    for row, r in zip(rep.rows, (0.3, 0.45, 0.55, 0.8, 1.2)):
        assert row.above_threshold == (r > 0.5)
        expected = MobiusClass.HYPERBOLIC if r > 0.5 else MobiusClass.ELLIPTIC
        assert row.classification == expected.value
    assert rep.counterexamples == []


def test_menzin_sweep_circle_family_hyperbolic():
    radii = (0.3, 0.45, 0.55, 0.8, 1.2)
    specs = [circle_spec(H, r) for r in radii]
    rep = menzin_sweep(specs, [0.5], find_parabolic=False)
    for row, r in zip(rep.rows, radii):
        # oracle: sin(alpha*) = tanh(l) coth(r) has a solution iff r >= l
        assert row.above_threshold == (r > 0.5)
        expected = MobiusClass.HYPERBOLIC if r > 0.5 else MobiusClass.ELLIPTIC
        assert row.classification == expected.value
    assert rep.counterexamples == []


def test_menzin_sweep_random_above_threshold(rng):
    specs = [random_above_threshold_spec(rng, S, l=0.5) for _ in range(8)]
    rep = menzin_sweep(specs, [0.2, 0.5], find_parabolic=False)
    assert all(row.above_threshold for row in rep.rows)
    assert rep.counterexamples == []


def test_menzin_sweep_parabolic_signatures(rng):
    # at the bisected length: |trace| = 2, rear length 0, even cusps, no inflections
    specs = [random_convex_spec(rng, S, rho_range=(0.55, 0.85)) for _ in range(3)]
    rep = menzin_sweep(specs, [1.2])
    for row in rep.rows:
        assert row.l_parabolic is not None
        assert row.error == ""
        assert abs(row.rear_algebraic_length) <= 1e-4
        assert row.rear_cusp_count >= 2
        assert row.rear_cusp_count % 2 == 0
        assert row.rear_inflection_count == 0


def test_menzin_sweep_determinism(rng):
    specs = [random_convex_spec(rng, S, rho_range=(0.55, 0.85)) for _ in range(2)]
    a = menzin_sweep(specs, [0.4, 0.8]).to_csv()
    b = menzin_sweep(specs, [0.4, 0.8]).to_csv()
    assert a == b


def test_menzin_sweep_row_error_capture():
    # a dimpled (non-convex) curve cannot report an area; the row records the error
    bad = CurveSpec(model=S, kind="polar_fourier", rho0=0.8, fourier_cos=(0, 0, 0.25), samples=512)
    good = circle_spec(S, 0.8)
    rep = menzin_sweep([bad, good], [0.5], find_parabolic=False)
    assert rep.rows[0].classification == "error"
    assert "convex" in rep.rows[0].error or "curvature" in rep.rows[0].error
    assert rep.rows[1].classification == "hyperbolic"


def test_menzin_threshold_values():
    assert menzin_threshold(S, 0.5) == pytest.approx(2 * np.pi * (1 - np.cos(0.5)))
    assert menzin_threshold(H, 0.5) == pytest.approx(2 * np.pi * (np.cosh(0.5) - 1))
