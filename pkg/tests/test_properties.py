"""Cross-module invariants as hypothesis properties."""

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from hypaffine import functionals as F
from hypaffine import harness as Hn
from hypaffine import lorentz
from hypaffine.bodies.hyper import (
    HyperBody,
    apply_isometry,
    geodesic_ball,
    hyperbolic_centroid,
    static_convexity_margin,
)
from hypaffine.bodies.support import AffineImage, TrigPerturbedBall, polar_body_euclidean
from hypaffine.quad import make_grid

seeds = st.integers(0, 2**32 - 1)
small = settings(max_examples=15, deadline=None)


def point(rng, n, dist):
    u = rng.normal(size=n)
    return lorentz.lift(np.sinh(dist) * u / np.linalg.norm(u))


@small
@given(seeds, st.sampled_from([2, 3]), st.floats(0.2, 2.0), st.floats(0.0, 1.5), st.floats(0.0, 1.5))
def test_geodesic_balls_are_static_convex_and_extremal(seed, n, r, c_dist, p_dist):
    rng = np.random.default_rng(seed)
    K = geodesic_ball(r, point(rng, n, c_dist), point(rng, n, p_dist))
    assert static_convexity_margin(K) > 0
    assert Hn.check_minkowski(K).gap < 1e-8
    assert Hn.check_affine_isoperimetric(K).gap < 1e-8


@small
@given(seeds, st.sampled_from([2, 3]))
def test_centroid_is_isometry_equivariant(seed, n):
    rng = np.random.default_rng(seed)
    K = Hn.random_body(n, rng)
    A = lorentz.random_isometry(n, rng, 1.5)
    lhs = hyperbolic_centroid(apply_isometry(K, A))
    rhs = lorentz.apply(A, hyperbolic_centroid(K))
    assert np.allclose(lhs, rhs, atol=1e-10)


def trig_body(a, b, k, log_s, bx):
    base = TrigPerturbedBall(1.0, 0.03, [(k, a, b)])
    return AffineImage(base, np.diag([np.exp(log_s), np.exp(-log_s)]), [bx, 0.0])


bodies = st.builds(trig_body, st.floats(-1, 1), st.floats(-1, 1), st.integers(2, 5),
                   st.floats(-0.5, 0.5), st.floats(-0.2, 0.2))


@small
@given(bodies)
def test_polar_is_an_involution(body):
    assume(body.convexity_margin() > 1e-3)
    back = polar_body_euclidean(polar_body_euclidean(body))
    z = make_grid(2, 32).nodes
    assert np.allclose(back.support(z), body.support(z), atol=1e-11)


@small
@given(bodies)
def test_pointwise_duality_identities(body):
    assume(body.convexity_margin() > 1e-3)
    K = HyperBody(lorentz.origin(2), body)
    z = make_grid(2, 24).nodes
    assert np.allclose(F.polar_affine_support_product(K, z), 1.0, atol=1e-9)
    assert np.max(F.polar_radial_identity_check(K, z)) < 1e-9


@small
@given(bodies, st.sampled_from([0.5, 1.0, 2.0]))
def test_lp_duality(body, p):
    assume(body.convexity_margin() > 1e-3)
    K = HyperBody(lorentz.origin(2), body)
    assert F.asa_duality_check(K, p) < 1e-9


@small
@given(bodies, st.floats(0.0, 2 * np.pi))
def test_rotations_about_base_point_change_nothing(body, angle):
    assume(body.convexity_margin() > 1e-3)
    K = HyperBody(lorentz.origin(2), body)
    Q = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    KR = apply_isometry(K, lorentz.rotation(Q))
    for check in (Hn.check_minkowski, Hn.check_affine_isoperimetric):
        assert check(KR).ratio == pytest.approx(check(K).ratio, rel=1e-10)


values = st.floats(0.1, 10.0)
errors = st.floats(0.0, 0.1)


@settings(max_examples=200, deadline=None)
@given(values, values, errors, errors, st.sampled_from(["<=", ">="]))
def test_satisfied_means_direction_holds_within_error_bars(lhs, rhs, le, re, direction):
    rep = Hn.InequalityReport("p", F.FunctionalValue(lhs, "g", le), F.FunctionalValue(rhs, "g", re), direction)
    slack = le + re + Hn.REL_FLOOR * rhs
    expected = lhs <= rhs + slack if direction == "<=" else lhs >= rhs - slack
    assert rep.satisfied == expected
    assert not rep.strict or rep.satisfied
    assert rep.gap == pytest.approx(abs(lhs / rhs - 1))
