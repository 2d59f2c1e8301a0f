import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypaffine import functionals as F
from hypaffine import lorentz
from hypaffine.bodies.hyper import HyperBody, geodesic_ball, hyperbolic_affine_transform, hyperbolic_ball
from hypaffine.bodies.support import AffineImage, TrigPerturbedBall, make_ball, make_ellipsoid
from hypaffine.errors import ConsistencyError, GeometryError
from hypaffine.quad import ball_volume, make_grid, sphere_measure


def ball_asa(rho, n, p):
    return n * ball_volume(n) * rho ** (n * (n - p) / (n + p))


def test_functional_value_contract():
    v = F.FunctionalValue(2.0, "256", 1e-3)
    assert float(v) == 2.0
    assert v.relative_error == pytest.approx(5e-4)
    with pytest.raises(ValueError):
        F.FunctionalValue(1.0, "256", -1.0)
    with pytest.raises(ValueError):
        F.FunctionalValue(1.0, "256", float("nan"))


def test_error_estimate_is_grid_doubling_change():
    body = make_ellipsoid(np.diag([9.0, 1 / 9.0]))
    g = make_grid(2, 16)
    v = F.volume(body, g)
    fine = F.volume(body, g.refine()).value
    assert v.error == pytest.approx(abs(fine - v.value), abs=1e-15)
    assert v.error > 0 and v.grid == "16"


@pytest.mark.parametrize("p", [-1.0, 0.5, 1.0, 2.0, 4.0, -3.0])
def test_ellipse_lp_affine_surface_area(p):
    a, b = 3.0, 0.4
    v = F.lp_affine_surface_area(make_ellipsoid(np.diag([a * a, b * b])), p)
    assert v.value == pytest.approx(2 * np.pi * (a * b) ** ((2 - p) / (2 + p)), rel=1e-12)


def test_as_zero_is_n_times_volume():
    body = make_ellipsoid(np.diag([2.0, 1.0, 0.5]))
    assert F.lp_affine_surface_area(body, 0.0).value == pytest.approx(3 * F.volume(body).value, rel=1e-13)


def test_affine_surface_area_and_infinity():
    body = make_ellipsoid(np.diag([4.0, 0.25]))
    assert F.affine_surface_area(body).value == pytest.approx(2 * np.pi, rel=1e-13)
    # integral of h^{-n} is n Vol(K°); the polar ellipse has the same area
    assert F.lp_asa_infinity(body).value == pytest.approx(2 * np.pi, rel=1e-13)


def test_affine_support_of_ball():
    R, n = 1.7, 3
    lam = F.affine_support(make_ball(R, n), [[0.0, 0.0, 1.0]])
    assert lam[0] == pytest.approx(R * R ** ((n - 1) / (n + 1)))


def test_lp_preconditions():
    ball = make_ball(1.0)
    with pytest.raises(GeometryError):
        F.lp_affine_surface_area(ball, -2.0)
    with pytest.raises(GeometryError):
        F.lp_affine_surface_area(ball, float("inf"))
    outside = make_ellipsoid(np.eye(2), [1.5, 0.0])
    with pytest.raises(GeometryError):
        F.lp_affine_surface_area(outside, 2.0)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_centered_geodesic_ball_closed_forms(n, r):
    K = hyperbolic_ball(r, n)
    S, B = sphere_measure(n), ball_volume(n)
    W = B * np.sinh(r) ** n
    assert F.weighted_volume(K).value == pytest.approx(W, rel=1e-12)
    assert F.weighted_volume_radial(K).value == pytest.approx(W, rel=1e-12)
    assert F.minkowski_flux(K).value == pytest.approx(n * W, rel=1e-12)
    for k in range(n):
        expected = np.cosh(r) / np.tanh(r) ** k * S * np.sinh(r) ** (n - 1)
        for direct in (False, True):
            assert F.weighted_curvature_integral(K, k, direct=direct).value == pytest.approx(expected, rel=1e-11)
    assert F.shifted_mean_curvature_integral(K).value == pytest.approx(S * np.sinh(r) ** (n - 2), rel=1e-11)
    for p in (-1.0, 1.0, 2.0):
        assert F.hyperbolic_lp_asa(K, p).value == pytest.approx(ball_asa(np.sinh(r), n, p), rel=1e-11)
    assert F.volume_product(K).value == pytest.approx(B * B, rel=1e-11)


def test_curvature_index_range():
    with pytest.raises(GeometryError):
        F.weighted_curvature_integral(hyperbolic_ball(1.0), 2)


def test_flux_is_n_times_weighted_volume(corpus, grids):
    for K in corpus[2][:5] + corpus[3][:3]:
        g = grids[K.n]
        assert F.minkowski_flux(K, g).value == pytest.approx(K.n * F.weighted_volume(K, g).value, rel=1e-11)


def test_radial_weighted_volume_agrees(corpus, grids):
    for K in corpus[2][:5]:
        a = F.weighted_volume(K, grids[2])
        b = F.weighted_volume_radial(K, grids[2])
        assert abs(a.value - b.value) <= a.error + b.error + 1e-9 * a.value


def test_direct_and_reduced_lp_routes(corpus, grids):
    for K in corpus[3][:3]:
        for p in (-1.0, 1.0, 2.0):
            direct = F.hyperbolic_lp_asa_direct(K, p, grids[3])
            reduced = F.lp_affine_surface_area(K.hat, p, grids[3])
            assert direct.value == pytest.approx(reduced.value, rel=1e-10)


def test_cross_check_raises_on_disagreement():
    a = F.FunctionalValue(1.0, "g", 1e-12)
    b = F.FunctionalValue(1.001, "g", 1e-12)
    with pytest.raises(ConsistencyError):
        F.cross_check(a, b, "demo")
    assert F.cross_check(a, F.FunctionalValue(1.0 + 1e-10, "g", 0.0), "demo") < 1e-9


def test_hyperbolic_affine_support_and_polar_pairs(centered_corpus):
    K = centered_corpus[2][0]
    z = make_grid(2, 32).nodes
    assert np.all(F.hyperbolic_affine_support(K, z) > 0)
    assert np.allclose(F.polar_affine_support_product(K, z), 1.0, atol=1e-9)
    assert np.max(F.polar_radial_identity_check(K, z)) < 1e-9


def test_asa_duality(centered_corpus):
    K = centered_corpus[3][0]
    for p in (1.0, 2.0, 3.0):
        assert F.asa_duality_check(K, p) < 1e-8
    with pytest.raises(GeometryError):
        F.asa_duality_check(K, 0.0)


def test_weighted_volume_changes_with_base_point_but_not_under_isometry():
    center = lorentz.lift([0.8, 0.0])
    at_center = geodesic_ball(0.6, center, center)
    far = geodesic_ball(0.6, center)
    assert F.weighted_volume(far).value > F.weighted_volume(at_center).value


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.8, 0.8), st.floats(0, np.pi), st.sampled_from([-1.0, 0.5, 1.0, 2.0]))
def test_lp_asa_is_sl_invariant(log_s, angle, p):
    Q = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    L = Q @ np.diag([np.exp(log_s), np.exp(-log_s)]) @ Q.T
    K = HyperBody(lorentz.origin(2), AffineImage(TrigPerturbedBall(0.9, 0.03, [(3, 1.0, 0.5)]), np.eye(2), [0.05, 0.0]))
    base = F.hyperbolic_lp_asa(K, p).value
    moved = F.hyperbolic_lp_asa(hyperbolic_affine_transform(K, L), p).value
    assert moved == pytest.approx(base, rel=1e-9)
