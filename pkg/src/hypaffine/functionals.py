"""Scalar functionals of projected and hyperbolic bodies.

Every public functional returns a :class:`FunctionalValue` holding the
value on the requested grid and ``|value(refined) - value(base)|`` for one
grid doubling as its error estimate.

Hyperbolic functionals that reduce to a Euclidean one are evaluated both
through the reduction and directly on the lifted boundary, and the two must
agree.
"""

import weakref
from dataclasses import dataclass

import numpy as np

from .bodies.hyper import polar_body_hyperbolic
from .bodies.support import radial_function
from .errors import ConsistencyError, GeometryError
from .quad import make_grid
from .shapecalc import euclidean_jet_of, lift_jet, lift_jet_direct, lift_jet_direct_of, mean_curvatures

H_FLOOR = 1e-6
DET_FLOOR = 1e-9
CROSS_CHECK_RTOL = 1e-8


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    grid: str
    error: float

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError("error estimate must be non-negative")

    def __float__(self):
        return self.value

    @property
    def relative_error(self):
        return self.error / abs(self.value) if self.value else self.error


def _estimate(fn, grid):
    base = fn(grid)
    fine = fn(grid.refine())
    return FunctionalValue(float(base), grid.describe(), float(abs(fine - base)))


def _estimate_geometric(fn, grid):
    """Like :func:`_estimate`, but bounds the error by a geometric tail.

    With d1, d2 the changes over two doublings and q = d2 / d1 < 1, the
    base error is at most d1 / (1 - q) under geometric convergence. Used for
    routes that converge too slowly for one doubling to bound the error.
    """
    fine = grid.refine()
    base, f2, f4 = fn(grid), fn(fine), fn(fine.refine())
    d1, d2 = abs(f2 - base), abs(f4 - f2)
    err = d1 / (1.0 - d2 / d1) if d1 > 0 and d2 < d1 else d1 + d2
    return FunctionalValue(float(base), grid.describe(), float(err))


def _grid(n, grid):
    return grid if grid is not None else make_grid(n)


def _product(a, b):
    return FunctionalValue(
        a.value * b.value, a.grid, abs(a.value) * b.error + abs(b.value) * a.error + a.error * b.error
    )


# --- Euclidean ------------------------------------------------------------


def volume(body, grid=None):
    """Vol(K) = (1/n) integral of h det R."""

    def f(g):
        rule = body.boundary_rule(g)
        jet = rule.jet
        return rule.integrate(jet.h * jet.det_radius) / body.n

    return _estimate(f, _grid(body.n, grid))


def _check_positive(jet, need_h, need_det):
    if need_h and np.min(jet.h) <= H_FLOOR:
        raise GeometryError(f"support function must exceed {H_FLOOR:g} (origin not interior)")
    if need_det and np.min(jet.det_radius) <= DET_FLOOR:
        raise GeometryError("curvature-radius determinant too small for a negative power")


def _check_p(p, n):
    p = float(p)
    if not np.isfinite(p) or p == -n:
        raise GeometryError(f"p must be finite and differ from -n = {-n}")
    return p


def lp_exponents(p, n):
    """Exponents (a, b) of the integrand h^a (det R)^b of as_p."""
    return n * (1.0 - p) / (n + p), n / (n + p)


def lp_affine_surface_area(body, p, grid=None):
    """as_p(K) = integral over the sphere of h^{n(1-p)/(n+p)} (det R)^{n/(n+p)}."""
    n = body.n
    p = _check_p(p, n)
    a, b = lp_exponents(p, n)

    def f(g):
        rule = body.boundary_rule(g)
        jet = rule.jet
        _check_positive(jet, a != 0, b < 0)
        return rule.integrate(jet.h**a * jet.det_radius**b)

    return _estimate(f, _grid(n, grid))


def affine_surface_area(body, grid=None):
    """as(K) = integral of (det R)^{n/(n+1)}."""
    n = body.n

    def f(g):
        rule = body.boundary_rule(g)
        return rule.integrate(rule.jet.det_radius ** (n / (n + 1)))

    return _estimate(f, _grid(n, grid))


def lp_asa_infinity(body, grid=None):
    """as_{+-inf}(K) = integral of h^{-n}."""

    def f(g):
        rule = body.boundary_rule(g)
        _check_positive(rule.jet, True, False)
        return rule.integrate(rule.jet.h ** (-body.n))

    return _estimate(f, _grid(body.n, grid))


def affine_support(body, z):
    """Lambda(K, z) = h (det R)^{1/(n+1)}."""
    jet = body.evaluate(z)
    return jet.h * jet.det_radius ** (1.0 / (body.n + 1))


# --- hyperbolic ----------------------------------------------------------


def _area_density(jet, ejet):
    """dA / dz = (s / V) det R."""
    return jet.area_ratio * ejet.area_element


_JETS = weakref.WeakKeyDictionary()


def _lifted(K, g, direct=True):
    """Boundary rule of the projection with its Euclidean and lifted jets."""
    rule = K.hat.boundary_rule(g)
    cache = _JETS.setdefault(rule, {})
    if "euclidean" not in cache:
        cache["euclidean"] = euclidean_jet_of(rule.jet)
    ejet = cache["euclidean"]
    if direct not in cache:
        cache[direct] = lift_jet_direct_of(rule.jet) if direct else lift_jet(ejet)
    return rule, ejet, cache[direct]


def weighted_volume(K, grid=None):
    """Integral of V over K, which equals Vol(pi_{p0}(K))."""
    return volume(K.hat, grid)


def weighted_volume_radial(K, grid=None):
    """Same quantity in geodesic polar coordinates about p0.

    With hyperbolic radial function r(theta) = arsinh(rho(theta)), the
    integral of cosh t sinh^{n-1} t dt is sinh^n r / n. The radial function
    is less smooth in theta than the boundary chart, so the error uses two
    grid doublings.
    """
    n = K.n

    def f(g):
        r = np.arcsinh(radial_function(K.hat, g.nodes))
        return g.integrate(np.sinh(r) ** n) / n

    return _estimate_geometric(f, _grid(n, grid))


def minkowski_flux(K, grid=None):
    """Integral of V_nu over the boundary; n times the weighted volume."""

    def f(g):
        rule, ejet, jet = _lifted(K, g)
        return rule.integrate(jet.V_nu * _area_density(jet, ejet))

    return _estimate(f, _grid(K.n, grid))


def weighted_curvature_integral(K, k, grid=None, direct=False):
    """Integral of V H_k over the boundary, with H_k the normalized mean curvature."""
    if not 0 <= k <= K.n - 1:
        raise GeometryError(f"k must lie in 0..{K.n - 1}")

    def f(g):
        rule, ejet, jet = _lifted(K, g, direct)
        return rule.integrate(jet.V * mean_curvatures(jet.curvatures, k) * _area_density(jet, ejet))

    return _estimate(f, _grid(K.n, grid))


def shifted_mean_curvature_integral(K, grid=None):
    """Integral of H_1(shifted curvatures) over the boundary."""

    def f(g):
        rule, ejet, jet = _lifted(K, g, direct=False)
        return rule.integrate(mean_curvatures(jet.shifted, 1) * _area_density(jet, ejet))

    return _estimate(f, _grid(K.n, grid))


def hyperbolic_lp_asa_direct(K, p, grid=None):
    """The lifted integral of u^{n(1-p)/(n+p)} H_{n-1}(shifted)^{p/(n+p)} dA."""
    n = K.n
    p = _check_p(p, n)
    a = n * (1.0 - p) / (n + p)
    b = p / (n + p)

    def f(g):
        rule, ejet, jet = _lifted(K, g)
        Hs = jet.shifted_gauss
        if a != 0 and np.min(jet.support) <= 0:
            raise GeometryError("base point not interior")
        if b != 0 and np.min(Hs) <= 0:
            raise GeometryError("shifted Gauss curvature not positive")
        return rule.integrate(jet.support**a * Hs**b * _area_density(jet, ejet))

    return _estimate(f, _grid(n, grid))


def cross_check(a, b, what, rtol=CROSS_CHECK_RTOL):
    """Raise unless two routes agree within their errors plus ``rtol``."""
    gap = abs(a.value - b.value)
    if gap > a.error + b.error + rtol * max(abs(a.value), abs(b.value), 1.0):
        raise ConsistencyError(f"{what}: routes disagree by {gap:.3e}")
    return gap


def hyperbolic_lp_asa(K, p, grid=None):
    """as_p^H(K), through the projection, cross-checked against the lifted integral."""
    reduced = lp_affine_surface_area(K.hat, p, grid)
    direct = hyperbolic_lp_asa_direct(K, p, grid)
    gap = cross_check(direct, reduced, f"hyperbolic as_{p:g}")
    return FunctionalValue(reduced.value, reduced.grid, reduced.error + gap)


def hyperbolic_affine_support(K, z, rtol=1e-10):
    """Lambda^H = u H_{n-1}(shifted)^{-1/(n+1)} at Gauss-map directions of the projection.

    Equals the Euclidean Lambda of the projection; both are evaluated and
    compared.
    """
    n = K.n
    jet = lift_jet_direct(K.hat, z)
    Hs = jet.shifted_gauss
    if np.min(Hs) <= 0:
        raise GeometryError("shifted Gauss curvature not positive")
    lam = jet.support * Hs ** (-1.0 / (n + 1))
    ref = affine_support(K.hat, z)
    if np.max(np.abs(lam - ref) / np.abs(ref)) > rtol:
        raise ConsistencyError("hyperbolic affine support differs from the projected one")
    return lam


def polar_affine_support_product(K, z):
    """Lambda^H(K, z) Lambda^H(K°, theta) at the dual pairs theta = x(z)/|x(z)|."""
    x = K.hat.evaluate(z).point
    theta = x / np.linalg.norm(x, axis=1, keepdims=True)
    return hyperbolic_affine_support(K, z) * hyperbolic_affine_support(polar_body_hyperbolic(K), theta)


def polar_radial_identity_check(K, theta):
    """|cosh r°(theta) - cosh r / u| where the right side sits at the normal theta."""
    polar = polar_body_hyperbolic(K)
    rho = radial_function(polar.hat, theta)
    lhs = np.sqrt(1.0 + rho**2)
    jet = lift_jet_direct(K.hat, theta)
    return np.abs(lhs - jet.V / jet.support)


def volume_product(K, grid=None):
    """Integral of V over K times the same over K°."""
    return _product(weighted_volume(K, grid), weighted_volume(polar_body_hyperbolic(K), grid))


def asa_duality_check(K, p, grid=None):
    """Relative gap between as_p^H(K) and as_{n^2/p}^H(K°)."""
    n = K.n
    p = _check_p(p, n)
    if p == 0:
        raise GeometryError("duality needs p != 0")
    lhs = hyperbolic_lp_asa(K, p, grid)
    rhs = hyperbolic_lp_asa(polar_body_hyperbolic(K), n * n / p, grid)
    return abs(lhs.value - rhs.value) / abs(lhs.value)
