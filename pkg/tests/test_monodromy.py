import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bikefronts import (
    BicycleParams,
    CurveSpec,
    MobiusClass,
    MobiusMap,
    NotHyperbolic,
    SurfaceModel,
    act,
    algebraic_length,
    build,
    compute_monodromy,
    derivative_curve_identity,
    find_parabolic_length,
    fixed_points,
    integrate_steering,
    length_derivative_check,
    rear_track,
    sl2_coefficients,
    small_l_probe,
)
from bikefronts.kernels import sl2_rk4
from bikefronts.numerics import circle_distance
from conftest import random_convex_spec

S = SurfaceModel.SPHERE
H = SurfaceModel.HYPERBOLIC


def circle_front(model, r, n=1024):
    return build(CurveSpec(model=model, kind="circle", radius=r, samples=n))


def circle_trace_oracle(model, r, l):
    """|trace| of the circle monodromy from the constant-coefficient lift."""
    c0 = model.cot(l)
    k = model.cot(r)
    length = 2 * np.pi * model.s(r)
    disc = c0**2 - k**2
    lam = np.sqrt(np.abs(disc)) / 2
    if disc >= 0:
        return 2 * np.cosh(length * lam)
    return np.abs(2 * np.cos(length * lam))


# --- sl2 coefficients ----------------------------------------------------------


def test_sl2_coefficients_example():
    p = BicycleParams(l=np.pi / 4, model=S)
    a = sl2_coefficients(0.0, p)
    assert np.allclose(a, [[0.5, 0], [0, -0.5]])


@given(st.floats(-5, 5), st.floats(0.05, 1.5))
@settings(max_examples=100, deadline=None)
def test_sl2_trace_free(kappa, l):
    p = BicycleParams(l=l, model=S)
    a = sl2_coefficients(kappa, p)
    assert a[0, 0] + a[1, 1] == 0.0


@given(st.floats(-5, 5), st.floats(0.05, 1.5), st.floats(-3, 3))
@settings(max_examples=200, deadline=None)
def test_riccati_residual(kappa, l, y):
    # d/ds (u1/u2) for U' = A U equals the Riccati right-hand side
    p = BicycleParams(l=l, model=S)
    a = sl2_coefficients(kappa, p)
    lift = (a[0, 0] * y + a[0, 1]) - y * (a[1, 0] * y + a[1, 1])
    riccati = -kappa / 2 * y**2 + p.c0 * y - kappa / 2
    assert lift == pytest.approx(riccati, abs=1e-12 * (1 + abs(riccati)))


# --- classification --------------------------------------------------------------


@pytest.mark.parametrize(
    "r,expected",
    [(0.4, MobiusClass.ELLIPTIC), (0.5, MobiusClass.PARABOLIC), (0.6, MobiusClass.HYPERBOLIC)],
)
def test_circle_classification(r, expected):
    front = circle_front(S, r, n=4096)
    m = compute_monodromy(front, BicycleParams(l=0.5, model=S))
    assert m.classification is expected


@pytest.mark.parametrize("model,r,l", [(S, 0.6, 0.5), (S, 1.2, 0.4), (H, 0.9, 0.5), (H, 0.4, 0.7)])
def test_trace_against_circle_oracle(model, r, l):
    front = circle_front(model, r, n=2048)
    m = compute_monodromy(front, BicycleParams(l=l, model=model))
    assert m.abs_trace == pytest.approx(circle_trace_oracle(model, r, l), rel=1e-9, abs=1e-9)


def test_det_preserved_along_integration(sphere_circle):
    p = BicycleParams(l=0.5, model=S)
    m = compute_monodromy(sphere_circle, p)
    assert m.det_drift <= 1e-8


def test_trace_canonicalized_nonnegative():
    # elliptic rotation past a quarter turn has raw trace < 0
    front = circle_front(S, 0.35, n=1024)
    m = compute_monodromy(front, BicycleParams(l=1.2, model=S))
    assert m.trace >= 0.0


def test_conjugation_invariance_of_trace(rng):
    from dataclasses import replace

    spec = random_convex_spec(rng, S)
    front = build(spec)
    m0 = compute_monodromy(front, BicycleParams(l=0.4, model=S))
    # re-base the start point: roll every sampled field, drop the evaluator
    k = front.n_samples // 3
    rolled = replace(
        front,
        positions=np.roll(front.positions, -k, axis=0),
        d1=np.roll(front.d1, -k, axis=0),
        d2=np.roll(front.d2, -k, axis=0),
        epsilon=np.roll(front.epsilon, -k, axis=0),
        coorient=np.roll(front.coorient, -k, axis=0),
        w=np.roll(front.w, -k),
        omega=np.roll(front.omega, -k),
        evaluator=None,
    )
    m1 = compute_monodromy(rolled, BicycleParams(l=0.4, model=S))
    assert m1.abs_trace == pytest.approx(m0.abs_trace, abs=1e-9)


# --- circle action ----------------------------------------------------------------


def test_act_identity_and_fixed_points():
    eye = MobiusMap.from_matrix(np.eye(2))
    for theta in np.linspace(-3, 3, 13):
        assert act(eye, theta) == pytest.approx(theta, abs=1e-15)
    front = circle_front(S, 0.8, n=2048)
    m = compute_monodromy(front, BicycleParams(l=0.5, model=S))
    for fp in fixed_points(m):
        assert circle_distance(act(m, fp.theta), fp.theta) < 1e-9


@given(
    st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
    st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
    st.floats(-3.1, 3.1),
)
@settings(max_examples=200, deadline=None)
def test_act_composition(a1, b1, c1, d1, a2, b2, c2, d2, theta):
    if abs(a1 * d1 - b1 * c1) < 1e-3 or abs(a2 * d2 - b2 * c2) < 1e-3:
        return
    if a1 * d1 - b1 * c1 < 0 or a2 * d2 - b2 * c2 < 0:
        return
    m1 = MobiusMap.from_matrix([[a1, b1], [c1, d1]])
    m2 = MobiusMap.from_matrix([[a2, b2], [c2, d2]])
    composed = MobiusMap.from_matrix(m2.mat @ m1.mat)
    lhs = act(m2, act(m1, theta))
    rhs = act(composed, theta)
    assert circle_distance(lhs, rhs) < 1e-10


def test_fixed_points_of_circle_monodromy():
    r, l = 1.0, 0.5
    front = circle_front(S, r, n=2048)
    m = compute_monodromy(front, BicycleParams(l=l, model=S))
    fps = fixed_points(m)
    assert len(fps) == 2
    a_star = np.arcsin(np.tan(l) / np.tan(r))
    thetas = sorted(fp.theta for fp in fps)
    assert thetas[0] == pytest.approx(a_star, abs=1e-8)
    assert thetas[1] == pytest.approx(np.pi - a_star, abs=1e-8)
    # multipliers are reciprocal; the attracting point is the trailing one
    assert fps[0].derivative * fps[1].derivative == pytest.approx(1.0, abs=1e-10)
    att = fps[0] if fps[0].attracting else fps[1]
    assert att.theta == pytest.approx(np.pi - a_star, abs=1e-8)


def test_parabolic_single_fixed_point():
    front = circle_front(S, 0.5, n=4096)
    m = compute_monodromy(front, BicycleParams(l=0.5, model=S))
    fps = fixed_points(m)
    assert len(fps) == 1
    assert fps[0].derivative == pytest.approx(1.0, abs=1e-6)
    assert fps[0].theta == pytest.approx(np.pi / 2, abs=1e-5)


def test_elliptic_no_fixed_points():
    front = circle_front(S, 0.4, n=1024)
    m = compute_monodromy(front, BicycleParams(l=0.5, model=S))
    assert fixed_points(m) == []


def test_classification_matches_iteration_oracle():
    # brute force: iterate the circle map from 64 seeds
    for r, l in ((0.9, 0.5), (0.4, 0.5)):
        front = circle_front(S, r, n=1024)
        m = compute_monodromy(front, BicycleParams(l=l, model=S))
        seeds = np.linspace(-np.pi + 0.05, np.pi, 64)
        orbits = seeds.copy()
        for _ in range(300):
            orbits = np.array([act(m, t) for t in orbits])
        if m.classification is MobiusClass.HYPERBOLIC:
            att = next(fp for fp in fixed_points(m) if fp.attracting)
            dists = circle_distance(orbits, att.theta)
            assert np.mean(dists < 1e-6) > 0.9  # all but seeds near the repeller
        else:
            spread = np.max(orbits) - np.min(orbits)
            assert spread > 1.0  # rotation-like, no collapse


# --- derivative law ------------------------------------------------------------------


def test_multiplier_matches_flow_linearization():
    """The fixed-point multiplier equals exp(c0 * signed rear length).

    This is the factor-corrected form of the derivative/length law: the
    steering flow linearizes as beta' = c0 cos(alpha) beta, and
    c0 * integral(cos alpha ds) = c0 * L(rear).
    """
    for model, r, l in ((S, 1.0, 0.5), (H, 1.0, 0.5), (S, 0.9, 0.3)):
        front = circle_front(model, r, n=4096)
        rep = length_derivative_check(front, BicycleParams(l=l, model=model))
        assert rep.scaled_residual < 1e-6
        assert rep.scaled_trace_residual < 1e-6


def test_stated_derivative_law_mismatch_is_the_cot_factor():
    # the plain form exp(-L) differs from the multiplier by exp((c0-1)L);
    # document the factor explicitly on the circle
    front = circle_front(S, 1.0, n=4096)
    p = BicycleParams(l=0.5, model=S)
    rep = length_derivative_check(front, p)
    assert rep.residual > 0.5  # the stated form fails badly
    implied = np.log(rep.derivative) / rep.rear_length
    assert implied == pytest.approx(p.c0, rel=1e-6)


def test_multiplier_reciprocity_on_random_fronts(rng):
    spec = random_convex_spec(rng, S, rho_range=(0.9, 1.2))
    front = build(spec)
    p = BicycleParams(l=0.35, model=S)
    m = compute_monodromy(front, p)
    fps = fixed_points(m)
    assert len(fps) == 2
    assert fps[0].derivative * fps[1].derivative == pytest.approx(1.0, abs=1e-9)
    # rear tracks through the two fixed points have opposite signed lengths
    lengths = []
    for fp in fps:
        sol = integrate_steering(front, p, fp.theta)
        lengths.append(algebraic_length(rear_track(front, sol).track))
    assert lengths[0] == pytest.approx(-lengths[1], abs=1e-8)


def test_length_check_requires_hyperbolic():
    front = circle_front(S, 0.4, n=512)
    with pytest.raises(NotHyperbolic):
        length_derivative_check(front, BicycleParams(l=0.5, model=S))


# --- parabolic length and small-l -----------------------------------------------------


def test_parabolic_iff_zero_rear_length():
    front = build(
        CurveSpec(model=S, kind="polar_fourier", rho0=0.75, fourier_cos=(0.04,), fourier_sin=(0.0, 0.03), samples=2048)
    )
    l_par = find_parabolic_length(front, 1.4, S)
    assert l_par is not None
    p = BicycleParams(l=l_par, model=S)
    m = compute_monodromy(front, p)
    assert abs(m.abs_trace - 2.0) < 1e-9
    fps = fixed_points(m)
    sol = integrate_steering(front, p, fps[0].theta)
    rear = rear_track(front, sol).track
    assert abs(algebraic_length(rear)) < 1e-4


def test_small_l_probe_properties(rng):
    for model in (S, H):
        spec = random_convex_spec(rng, model)
        probe = small_l_probe(build(spec), model)
        assert probe.classification is MobiusClass.HYPERBOLIC
        near = sorted(circle_distance(np.array(probe.thetas), 0.0))
        assert min(near) < 0.05
        assert max(circle_distance(np.array(probe.thetas), np.pi)) > 0  # sanity
        assert any(circle_distance(t, np.pi) < 0.05 for t in probe.thetas)
        # the trailing configuration attracts
        assert circle_distance(probe.attracting_theta, np.pi) < 0.05


def test_small_l_attracting_agrees_with_flow():
    # integrate the steering flow from a generic seed: it must land near pi
    front = circle_front(S, 0.8, n=2048)
    p = BicycleParams(l=1e-3, model=S, steps_per_sample=8)
    sol = integrate_steering(front, p, 1.0)
    assert circle_distance(sol.alpha_end % (2 * np.pi), np.pi) < 0.05


# --- derivative curves ------------------------------------------------------------------


@pytest.mark.parametrize("r", [0.7, np.pi / 2])
def test_derivative_curve_identity_circles(r):
    rear = circle_front(S, r, n=4096)
    assert derivative_curve_identity(rear) < 1e-5


def test_derivative_curve_identity_random(rng):
    spec = random_convex_spec(rng, S, samples=4096)
    assert derivative_curve_identity(build(spec)) < 1e-4


# --- giant hyperbolic maps ---------------------------------------------------------------


def test_rescaled_map_classification_and_fps():
    front = circle_front(S, 0.8, n=2048)
    m = compute_monodromy(front, BicycleParams(l=1e-3, model=S, steps_per_sample=8))
    assert m.rescaled
    assert m.classification is MobiusClass.HYPERBOLIC
    assert m.log_abs_trace > 100
    fps = fixed_points(m)
    assert len(fps) == 2
    assert fps[0].derivative == 0.0 and fps[1].derivative == np.inf


def test_sl2_kernel_matches_expm_constant_coefficients():
    # constant A: the kernel must reproduce the matrix exponential
    from scipy.linalg import expm

    c0, kappa, sigma_val, period = 1.2, 0.7, 0.9, 2 * np.pi
    n = 4096
    sigma = np.full(2 * n + 1, sigma_val)
    kap = np.full(2 * n + 1, kappa)
    u, log_scale, drift = sl2_rk4(sigma, kap, c0, period / n, n)
    a = sigma_val * np.array([[c0 / 2, -kappa / 2], [kappa / 2, -c0 / 2]])
    assert log_scale == 0.0
    assert np.max(np.abs(u - expm(period * a))) < 1e-10
    assert drift < 1e-10
