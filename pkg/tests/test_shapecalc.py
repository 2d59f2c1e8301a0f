from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from hypaffine import lorentz
from hypaffine import shapecalc as sc
from hypaffine.bodies.hyper import geodesic_ball, hyperbolic_ball
from hypaffine.errors import GeometryError
from hypaffine.quad import make_grid, sphere_measure

GRIDS = {2: make_grid(2, 64), 3: make_grid(3, (16, 32))}
CENTERS = {2: [0.6, -0.8], 3: [0.5, 0.2, -0.7]}


def jets(K, direct):
    z = GRIDS[K.n].nodes
    ejet = sc.euclidean_jet(K.hat, z)
    return ejet, (sc.lift_jet_direct(K.hat, z) if direct else sc.lift_jet(ejet))


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("direct", [False, True])
def test_centered_geodesic_sphere(n, direct):
    r = 0.8
    ejet, jet = jets(hyperbolic_ball(r, n), direct)
    assert np.allclose(jet.curvatures, 1.0 / np.tanh(r))
    assert np.allclose(jet.V, np.cosh(r))
    assert np.allclose(jet.V_nu, np.sinh(r))
    assert np.allclose(jet.support, np.sinh(r))
    assert np.allclose(jet.shifted, 1.0 / np.sinh(r))
    z = GRIDS[n].nodes
    expected_normal = np.concatenate([np.full((len(z), 1), np.sinh(r)), np.cosh(r) * z], axis=1)
    assert np.allclose(jet.normal, expected_normal)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("direct", [False, True])
def test_off_center_geodesic_sphere_is_umbilic(n, direct):
    r = 0.7
    K = geodesic_ball(r, lorentz.lift(CENTERS[n]))
    ejet, jet = jets(K, direct)
    assert np.allclose(jet.curvatures, 1.0 / np.tanh(r), atol=1e-11)
    area = GRIDS[n].integrate(jet.area_ratio * ejet.area_element)
    assert area == pytest.approx(sphere_measure(n) * np.sinh(r) ** (n - 1), rel=1e-12)
    assert np.max(sc.normal_residual(jet)) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_two_lifting_routes_agree(n, corpus):
    for K in corpus[n][:4]:
        ejet, a = jets(K, False)
        _, b = jets(K, True)
        for name in ("X", "normal", "support", "V", "V_nu", "area_ratio", "curvatures", "shifted"):
            assert np.allclose(getattr(a, name), getattr(b, name), rtol=1e-10, atol=1e-10), name
        assert np.allclose(a.metric, b.metric, atol=1e-12)
        assert np.allclose(a.sff, b.sff, atol=1e-10)
        assert np.max(sc.shifted_sff_check(b, ejet)) < 1e-10
        assert np.max(sc.gauss_relation_residual(b, ejet)) < 1e-10
        assert np.max(sc.metric_determinant_residual(b, ejet)) < 1e-12
        assert np.max(sc.normal_residual(b)) < 1e-12


def test_weingarten_is_metric_inverse_times_sff(corpus):
    ejet, jet = jets(corpus[3][0], True)
    W = np.linalg.solve(jet.metric, jet.sff)
    assert np.allclose(np.sort(np.linalg.eigvals(W).real, axis=1), jet.curvatures, atol=1e-10)


def test_euclidean_jet_of_ellipse():
    from hypaffine.bodies.support import make_ellipsoid

    a, b = 2.0, 0.5
    ejet = sc.euclidean_jet(make_ellipsoid(np.diag([a * a, b * b])), [[1.0, 0.0], [0.0, 1.0]])
    # curvature of an ellipse at the vertices: a / b^2 and b / a^2
    assert np.allclose(ejet.curvatures[:, 0], [a / b**2, b / a**2])
    assert np.allclose(ejet.gauss_curvature * ejet.area_element, 1.0)


def test_frame_data_returns_absolute_coordinates():
    p0 = lorentz.lift([0.2, 0.1])
    center = lorentz.lift([-0.3, 0.4])
    K = geodesic_ball(0.5, center, p0)
    _, jet = jets(K, True)
    X, nu = sc.minkowski_frame_data(jet, lorentz.inverse_isometry(K.frame))
    assert np.allclose(lorentz.geodesic_distance(X, center), 0.5)
    assert np.allclose(lorentz.mink_inner(nu, X), 0.0, atol=1e-12)


def test_pencil_eigenvalues():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(5, 3, 3))
    A = A + np.swapaxes(A, 1, 2)
    C = rng.normal(size=(5, 3, 3))
    B = np.einsum("kij,klj->kil", C, C) + np.eye(3)
    expected = np.sort(np.linalg.eigvals(np.linalg.solve(B, A)).real, axis=1)
    assert np.allclose(sc.pencil_eigenvalues(A, B), expected)


def brute_elementary(values, k):
    return np.array([sum(np.prod(c) for c in combinations(row, k)) for row in values])


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (4, 3), elements=st.floats(-5, 5)), st.integers(0, 3))
def test_elementary_symmetric_matches_brute_force(values, k):
    assert np.allclose(sc.elementary_symmetric(values, k), brute_elementary(values, k), atol=1e-9)


def test_mean_curvatures_normalization():
    kappa = np.array([[2.0, 2.0]])
    for k in range(3):
        assert sc.mean_curvatures(kappa, k)[0] == pytest.approx(2.0**k)
    assert sc.mean_curvatures(np.array([[1.0, 3.0]]), 1)[0] == pytest.approx(2.0)
    with pytest.raises(GeometryError):
        sc.mean_curvatures(kappa, 3)
