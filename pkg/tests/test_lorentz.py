import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypaffine import lorentz
from hypaffine.errors import GeometryError


def poincare_distance(X, Y):
    """Distance through the Poincare ball model, an independent formula."""
    u = X[1:] / (1.0 + X[0])
    v = Y[1:] / (1.0 + Y[0])
    num = 2.0 * np.sum((u - v) ** 2)
    den = (1.0 - u @ u) * (1.0 - v @ v)
    return np.arccosh(1.0 + num / den)


coords = st.floats(-3.0, 3.0, allow_nan=False)


def test_inner_product_values():
    assert lorentz.mink_inner([1, 0, 0], [1, 0, 0]) == -1.0
    assert lorentz.mink_inner([2, 1, 3], [1, 4, -1]) == -2 + 4 - 3
    assert np.allclose(lorentz.metric(3), np.diag([-1, 1, 1, 1]))


def test_lift_lands_on_hyperboloid():
    x = np.array([[0.3, -2.0], [0.0, 0.0], [5.0, 1.0]])
    X = lorentz.lift(x)
    assert np.allclose(lorentz.mink_inner(X, X), -1.0)
    assert np.all(X[:, 0] > 0)
    assert np.array_equal(lorentz.project(X), x)


def test_as_hyperpoint_rejects_bad_points():
    with pytest.raises(GeometryError):
        lorentz.as_hyperpoint([1.0, 0.5, 0.0])
    with pytest.raises(GeometryError):
        lorentz.as_hyperpoint([-1.0, 0.0, 0.0])
    with pytest.raises(GeometryError):
        lorentz.as_hyperpoint([1.0, 0.0])
    with pytest.raises(GeometryError):
        lorentz.check_dim(4)


def test_boost_moves_origin_by_rho():
    B = lorentz.boost([3.0, 4.0], 1.5)
    X = lorentz.apply(B, lorentz.origin(2))
    assert np.allclose(X, [np.cosh(1.5), 0.6 * np.sinh(1.5), 0.8 * np.sinh(1.5)])
    assert lorentz.is_isometry(B)
    assert lorentz.geodesic_distance(X, lorentz.origin(2)) == pytest.approx(1.5, abs=1e-13)


def test_boost_to_origin_of_origin_is_identity():
    assert np.array_equal(lorentz.boost_to_origin(lorentz.origin(3)), np.eye(4))


def test_potential_is_cosh_distance():
    X = lorentz.lift([0.4, -0.2])
    p0 = lorentz.lift([-1.0, 0.3])
    assert lorentz.potential_V(X, p0) == pytest.approx(np.cosh(poincare_distance(X, p0)), rel=1e-13)


def test_project_from_sends_base_point_to_zero():
    p0 = lorentz.lift([1.2, -0.7, 0.1])
    assert np.allclose(lorentz.project_from(p0, p0), 0.0, atol=1e-14)


def test_rotation_fixes_origin():
    Q = np.array([[0.0, -1.0], [1.0, 0.0]])
    M = lorentz.rotation(Q)
    assert lorentz.is_isometry(M)
    assert np.array_equal(lorentz.apply(M, lorentz.origin(2)), lorentz.origin(2))


def test_not_isometry():
    assert not lorentz.is_isometry(np.diag([1.0, 2.0, 1.0]))
    assert not lorentz.is_isometry(-np.eye(3))


@settings(max_examples=60, deadline=None)
@given(st.lists(coords, min_size=2, max_size=2), st.lists(coords, min_size=2, max_size=2))
def test_distance_matches_poincare_model(x, y):
    X, Y = lorentz.lift(x), lorentz.lift(y)
    d = lorentz.geodesic_distance(X, Y)
    assert d == pytest.approx(poincare_distance(X, Y), rel=1e-8, abs=1e-7)


@settings(max_examples=60, deadline=None)
@given(st.lists(coords, min_size=3, max_size=3))
def test_boost_to_origin_is_isometry_sending_p0_to_N(x):
    p0 = lorentz.lift(x)
    T = lorentz.boost_to_origin(p0)
    assert lorentz.is_isometry(T, tol=1e-9)
    assert np.allclose(lorentz.apply(T, p0), lorentz.origin(3), atol=1e-12 * p0[0] ** 2)
    assert np.allclose(T, T.T)
    assert np.allclose(lorentz.inverse_isometry(T) @ T, np.eye(4), atol=1e-10 * p0[0] ** 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3]))
def test_random_isometry_preserves_distances(seed, n):
    rng = np.random.default_rng(seed)
    A = lorentz.random_isometry(n, rng, max_distance=2.0)
    assert lorentz.is_isometry(A, tol=1e-9)
    X = lorentz.lift(rng.normal(size=(5, n)))
    Y = lorentz.lift(rng.normal(size=(5, n)))
    before = lorentz.geodesic_distance(X, Y)
    after = lorentz.geodesic_distance(lorentz.apply(A, X), lorentz.apply(A, Y))
    assert np.allclose(before, after, rtol=1e-9, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.lists(coords, min_size=2, max_size=2), st.lists(coords, min_size=2, max_size=2),
       st.lists(coords, min_size=2, max_size=2))
def test_triangle_inequality(x, y, z):
    X, Y, Z = (lorentz.lift(v) for v in (x, y, z))
    d = lorentz.geodesic_distance
    assert d(X, Z) <= d(X, Y) + d(Y, Z) + 1e-9
