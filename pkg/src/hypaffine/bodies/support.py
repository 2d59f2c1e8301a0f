"""Smooth Euclidean convex bodies given by their support functions.

A body is an evaluator ``z -> (h(z), grad h(z), hess h(z))`` on unit
directions. Sphere derivatives are stored as ambient arrays: ``grad`` is a
tangent vector in R^n and ``hess`` an n x n matrix supported on the tangent
plane z^perp. The boundary point with outward normal z is
``x(z) = h z + grad`` and the curvature-radius tensor is ``R = hess + h P``
with ``P = I - z z^T``. Equivalently ``x`` and ``R`` are the gradient and
Hessian of the 1-homogeneous extension of h, which is how most bodies
below compute them.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ConvergenceError, GeometryError
from ..lorentz import check_dim
from ..quad import make_grid

CONVEXITY_FLOOR = 1e-9
NEWTON_MAX_ITER = 50


def as_directions(z, n):
    z = np.asarray(z, dtype=float)
    if z.ndim == 1:
        z = z[None, :]
    if z.shape[-1] != n:
        raise GeometryError(f"direction array has dimension {z.shape[-1]}, expected {n}")
    return z


def normalize(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def tangent_frame(z):
    """Orthonormal basis of z^perp, shape (k, n, n-1).

    Gram-Schmidt seeded with the coordinate axis of smallest |z_i| (lowest
    index on ties); for n = 3 the second vector is z x t1.
    """
    z = np.asarray(z, dtype=float)
    k, n = z.shape
    axis = np.argmin(np.abs(z), axis=1)
    e = np.zeros_like(z)
    e[np.arange(k), axis] = 1.0
    t1 = normalize(e - np.sum(e * z, axis=1, keepdims=True) * z)
    if n == 2:
        return t1[:, :, None]
    t2 = np.cross(z, t1)
    return np.stack([t1, t2], axis=2)


def tangent_projector(z):
    n = z.shape[-1]
    return np.eye(n) - z[..., :, None] * z[..., None, :]


def symmetrize(A):
    return 0.5 * (A + np.swapaxes(A, -1, -2))


@dataclass(frozen=True, eq=False)
class SupportJet:
    """Support data at a stack of directions ``z`` of shape (k, n)."""

    z: np.ndarray
    h: np.ndarray
    point: np.ndarray
    radius: np.ndarray

    @property
    def grad(self):
        return self.point - self.h[:, None] * self.z

    @property
    def hess(self):
        return self.radius - self.h[:, None, None] * tangent_projector(self.z)

    @cached_property
    def frame(self):
        return tangent_frame(self.z)

    @cached_property
    def radius_tangent(self):
        """R(z) in the tangent frame, shape (k, n-1, n-1)."""
        E = self.frame
        return symmetrize(np.einsum("kia,kij,kjb->kab", E, self.radius, E, optimize=True))

    @cached_property
    def det_radius(self):
        return np.linalg.det(self.radius_tangent)


@dataclass(frozen=True, eq=False)
class BoundaryRule:
    """A support jet at quadrature points together with matching weights.

    For bodies known through a chart the points are images of the grid
    nodes and the weights include the Jacobian of the normal map, so that
    integrands stay smooth in the chart variable.
    """

    jet: SupportJet
    weights: np.ndarray

    def integrate(self, values):
        values = np.asarray(values, dtype=float)
        if not np.all(np.isfinite(values)):
            raise FloatingPointError("non-finite integrand value on boundary rule")
        return np.tensordot(self.weights, values, axes=(0, 0))


class SupportBody:
    """Base class: subclasses implement ``_evaluate(z) -> (h, x, R)``.

    ``sample(zeta)`` describes the boundary through a parameter on the
    sphere; for plain bodies the parameter is the outward normal itself.
    """

    analytic = True
    is_chart = False

    def __init__(self, n):
        self.n = check_dim(n)

    def _evaluate(self, z):
        raise NotImplementedError

    def evaluate(self, z):
        z = as_directions(z, self.n)
        h, x, R = self._evaluate(z)
        return SupportJet(z, h, x, R)

    def support(self, z):
        return self.evaluate(z).h

    def sample(self, zeta):
        jet = self.evaluate(zeta)
        E = jet.frame
        return ChartSample(jet.z, jet.point, E, np.einsum("kij,kja->kia", jet.radius, E), E)

    def boundary_rule(self, grid):
        """Cached per grid resolution; bodies are immutable once built."""
        cache = self.__dict__.setdefault("_rule_cache", {})
        key = (grid.n, grid.resolution)
        if key not in cache:
            if len(cache) >= 4:
                cache.pop(next(iter(cache)))
            cache[key] = self._boundary_rule(grid)
        return cache[key]

    def _boundary_rule(self, grid):
        if not self.is_chart:
            return BoundaryRule(self.evaluate(grid.nodes), grid.weights)
        sample = self.sample(grid.nodes)
        Jn = sample.d_normal
        jac = np.sqrt(np.linalg.det(np.einsum("kia,kib->kab", Jn, Jn)))
        return BoundaryRule(jet_from_sample(sample), grid.weights * jac)

    def as_ellipsoid(self):
        """``(M, center)`` when the body is known in closed form to be an ellipsoid."""
        return None

    def convexity_margin(self, grid=None):
        """Smallest eigenvalue of R over the grid nodes."""
        grid = grid or make_grid(self.n)
        jet = self.boundary_rule(grid).jet
        return float(np.min(np.linalg.eigvalsh(jet.radius_tangent)))

    def origin_margin(self, grid=None):
        """Smallest support value over the grid; positive iff the origin is interior."""
        grid = grid or make_grid(self.n)
        return float(np.min(self.boundary_rule(grid).jet.h))

    def validate(self, grid=None, what="body"):
        margin = self.convexity_margin(grid)
        if not margin > CONVEXITY_FLOOR:
            raise GeometryError(f"{what} not convex: curvature-radius margin {margin:.3e}")
        return self


class EllipsoidBody(SupportBody):
    """{x : (x-c)^T M^{-1} (x-c) <= 1}, support h(z) = sqrt(z^T M z) + c.z."""

    def __init__(self, M, center=None):
        M = np.asarray(M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise GeometryError("ellipsoid matrix must be square")
        super().__init__(M.shape[0])
        if not np.allclose(M, M.T, rtol=0, atol=1e-14 * np.abs(M).max()):
            raise GeometryError("ellipsoid matrix must be symmetric")
        if np.linalg.eigvalsh(M).min() <= 0:
            raise GeometryError("ellipsoid matrix must be positive definite")
        self.M = 0.5 * (M + M.T)
        self.center = np.zeros(self.n) if center is None else np.asarray(center, dtype=float)

    def _evaluate(self, z):
        Mz = z @ self.M
        s = np.sqrt(np.sum(z * Mz, axis=1))
        h = s + z @ self.center
        x = Mz / s[:, None] + self.center
        R = self.M[None] / s[:, None, None] - Mz[:, :, None] * Mz[:, None, :] / s[:, None, None] ** 3
        return h, x, R

    def as_ellipsoid(self):
        return self.M, self.center


def make_ball(R, n=2):
    if not R > 0:
        raise GeometryError(f"ball radius must be positive, got {R}")
    return EllipsoidBody(R * R * np.eye(check_dim(n)))


def make_ellipsoid(M, center=None):
    return EllipsoidBody(M, center)


class Polynomial:
    """A polynomial in the coordinates of R^n, as ``[(coef, powers), ...]``."""

    def __init__(self, terms, n):
        self.n = n
        self.terms = []
        for coef, powers in terms:
            powers = tuple(int(p) for p in powers)
            if len(powers) != n or min(powers) < 0:
                raise GeometryError(f"bad monomial powers {powers} for n={n}")
            self.terms.append((float(coef), powers))

    def derivatives(self, z):
        """Value (k,), gradient (k, n) and Hessian (k, n, n) at points z."""
        k, n = z.shape
        val = np.zeros(k)
        grad = np.zeros((k, n))
        hess = np.zeros((k, n, n))

        def mono(p):
            return np.prod([z[:, i] ** p[i] for i in range(n)], axis=0)

        for coef, p in self.terms:
            val += coef * mono(p)
            for i in range(n):
                if p[i] == 0:
                    continue
                pi = list(p)
                pi[i] -= 1
                grad[:, i] += coef * p[i] * mono(pi)
                for j in range(n):
                    if pi[j] == 0:
                        continue
                    pij = list(pi)
                    pij[j] -= 1
                    hess[:, i, j] += coef * p[i] * pi[j] * mono(pij)
        return val, grad, hess

    def to_list(self):
        return [[c, list(p)] for c, p in self.terms]


class PolyPerturbedBall(SupportBody):
    """h = R + eps * f(z) with f a polynomial restricted to the sphere."""

    def __init__(self, R, eps, poly):
        super().__init__(poly.n)
        self.R = float(R)
        self.eps = float(eps)
        self.poly = poly

    def _evaluate(self, z):
        f, df, d2f = self.poly.derivatives(z)
        P = tangent_projector(z)
        radial = np.sum(z * df, axis=1)
        h = self.R + self.eps * f
        grad = self.eps * np.einsum("kij,kj->ki", P, df)
        # sphere Hessian of a restricted function: P D^2f P - (z . Df) P
        hess = self.eps * (
            np.einsum("kij,kjl,klm->kim", P, d2f, P, optimize=True) - radial[:, None, None] * P
        )
        return h, h[:, None] * z + grad, symmetrize(hess + h[:, None, None] * P)


class TrigPerturbedBall(SupportBody):
    """Planar h(phi) = R + eps * sum_k (a_k cos k phi + b_k sin k phi)."""

    def __init__(self, R, eps, modes):
        super().__init__(2)
        self.R = float(R)
        self.eps = float(eps)
        self.modes = [(int(k), float(a), float(b)) for k, a, b in modes]

    def _evaluate(self, z):
        phi = np.arctan2(z[:, 1], z[:, 0])
        f = np.zeros_like(phi)
        f1 = np.zeros_like(phi)
        f2 = np.zeros_like(phi)
        for k, a, b in self.modes:
            c, s = np.cos(k * phi), np.sin(k * phi)
            f += a * c + b * s
            f1 += k * (-a * s + b * c)
            f2 -= k * k * (a * c + b * s)
        h = self.R + self.eps * f
        t = np.stack([-z[:, 1], z[:, 0]], axis=1)
        x = h[:, None] * z + self.eps * f1[:, None] * t
        R = (h + self.eps * f2)[:, None, None] * t[:, :, None] * t[:, None, :]
        return h, x, R


def make_perturbed_ball(R, eps, perturbation, n=None, grid=None):
    """Ball of radius R with support perturbed by ``eps * f``.

    ``perturbation`` is a :class:`Polynomial` or, in the plane, a list of
    ``(k, a_k, b_k)`` Fourier modes. Raises if the result is not strictly
    convex on the validation grid.
    """
    if isinstance(perturbation, Polynomial):
        body = PolyPerturbedBall(R, eps, perturbation)
    else:
        if n not in (None, 2):
            raise GeometryError("Fourier-mode perturbations are planar (n=2)")
        body = TrigPerturbedBall(R, eps, perturbation)
    margin = body.convexity_margin(grid)
    if not margin > CONVEXITY_FLOOR:
        raise GeometryError(f"not convex at eps={eps}: curvature-radius margin {margin:.3e}")
    return body


class AffineImage(SupportBody):
    """The body L K + b: h(z) = |L^T z| h_K(L^T z / |L^T z|) + b.z."""

    def __init__(self, body, L, b=None):
        super().__init__(body.n)
        L = np.asarray(L, dtype=float)
        if L.shape != (self.n, self.n):
            raise GeometryError(f"linear map must be {self.n}x{self.n}")
        if abs(np.linalg.det(L)) < 1e-12:
            raise GeometryError("linear map is singular")
        self.body = body
        self.L = L
        self.b = np.zeros(self.n) if b is None else np.asarray(b, dtype=float)
        self.analytic = body.analytic

    def _evaluate(self, z):
        w = z @ self.L
        s = np.linalg.norm(w, axis=1)
        jet = self.body.evaluate(w / s[:, None])
        h = s * jet.h + z @ self.b
        x = jet.point @ self.L.T + self.b
        R = np.einsum("ij,kjl,ml->kim", self.L, jet.radius, self.L, optimize=True) / s[:, None, None]
        return h, x, symmetrize(R)

    # integrate over the parameter of the undeformed body, where the
    # integrands stay smooth however eccentric L is
    is_chart = True

    def sample(self, zeta):
        s = self.body.sample(zeta)
        w = np.linalg.solve(self.L.T, s.normal.T).T
        r = np.linalg.norm(w, axis=1)
        nu = w / r[:, None]
        dw = np.einsum("ji,kja->kia", np.linalg.inv(self.L), s.d_normal)
        d_nu = np.einsum("kij,kja->kia", tangent_projector(nu), dw) / r[:, None, None]
        point = s.point @ self.L.T + self.b
        d_point = np.einsum("ij,kja->kia", self.L, s.d_point)
        return ChartSample(nu, point, d_nu, d_point, s.frame)

    def as_ellipsoid(self):
        inner = self.body.as_ellipsoid()
        if inner is None:
            return None
        M, c = inner
        return self.L @ M @ self.L.T, self.L @ c + self.b


def linear_transform(body, L):
    return AffineImage(body, L)


def translate_body(body, b):
    return AffineImage(body, np.eye(body.n), b)


class MinkowskiCombination(SupportBody):
    """Sum of c_i K_i for c_i >= 0, i.e. h = sum c_i h_i."""

    def __init__(self, bodies, coeffs):
        super().__init__(bodies[0].n)
        if any(c < 0 for c in coeffs):
            raise GeometryError("Minkowski combination needs nonnegative coefficients")
        self.bodies = list(bodies)
        self.coeffs = [float(c) for c in coeffs]
        self.analytic = all(b.analytic for b in self.bodies)

    def _evaluate(self, z):
        jets = [b.evaluate(z) for b in self.bodies]
        h = sum(c * j.h for c, j in zip(self.coeffs, jets))
        x = sum(c * j.point for c, j in zip(self.coeffs, jets))
        R = sum(c * j.radius for c, j in zip(self.coeffs, jets))
        return h, x, R


def interpolate(body0, body1, t):
    """h_t = (1 - t) h_0 + t h_1."""
    return MinkowskiCombination([body0, body1], [1.0 - t, t])


@dataclass(frozen=True, eq=False)
class ChartSample:
    """A boundary parametrized by an auxiliary sphere variable zeta.

    ``d_normal`` and ``d_point`` are the derivatives of the outward normal
    and of the boundary point along the columns of ``frame`` (a tangent
    frame at zeta), each of shape (k, n, n-1).
    """

    normal: np.ndarray
    point: np.ndarray
    d_normal: np.ndarray
    d_point: np.ndarray
    frame: np.ndarray


class ChartBody(SupportBody):
    """A body whose boundary is known through a chart ``zeta -> ChartSample``.

    Evaluating at a direction z solves normal(zeta) = z by Newton's method
    on the sphere, seeded by the best-aligned node of a coarse table
    (lowest index wins ties). The curvature-radius tensor is
    d_point . d_normal^{-1}, so no numerical differentiation is involved.
    """

    is_chart = True

    def __init__(self, n, chart, analytic=True, seed_resolution=None, tol=1e-13):
        super().__init__(n)
        self.chart = chart
        self.analytic = analytic
        self.tol = tol
        if seed_resolution is None:
            seed_resolution = (256,) if n == 2 else (24, 48)
        self._seed_grid = make_grid(n, seed_resolution)
        self._seed_normals = None

    def _seed(self, z):
        if self._seed_normals is None:
            self._seed_normals = self.chart(self._seed_grid.nodes).normal
        idx = np.empty(z.shape[0], dtype=int)
        chunk = 4096
        for start in range(0, z.shape[0], chunk):
            block = z[start : start + chunk] @ self._seed_normals.T
            idx[start : start + chunk] = np.argmax(block, axis=1)
        return self._seed_grid.nodes[idx].copy()

    def invert(self, z):
        """Return (zeta, sample) with sample.normal = z."""
        z = as_directions(z, self.n)
        zeta = self._seed(z)
        sample = self.chart(zeta)
        err = np.linalg.norm(z - sample.normal, axis=1)
        stalled = np.zeros(z.shape[0], dtype=bool)
        for _ in range(NEWTON_MAX_ITER):
            idx = np.nonzero((err > self.tol) & ~stalled)[0]
            if idx.size == 0:
                break
            Jn = sample.d_normal[idx]
            r = z[idx] - sample.normal[idx]
            JtJ = np.einsum("kia,kib->kab", Jn, Jn)
            delta = np.linalg.solve(JtJ, np.einsum("kia,ki->ka", Jn, r)[..., None])[..., 0]
            step = np.einsum("kia,ka->ki", sample.frame[idx], delta)
            length = np.linalg.norm(step, axis=1)
            step *= np.minimum(1.0, 0.5 / np.maximum(length, 1e-300))[:, None]
            todo = np.ones(idx.size, dtype=bool)
            for _halving in range(12):
                sub = idx[todo]
                cand = normalize(zeta[sub] + step[todo])
                cs = self.chart(cand)
                cerr = np.linalg.norm(z[sub] - cs.normal, axis=1)
                ok = cerr < err[sub]
                _assign(sample, sub[ok], cs, ok)
                zeta[sub[ok]] = cand[ok]
                err[sub[ok]] = cerr[ok]
                todo[np.nonzero(todo)[0][ok]] = False
                if not np.any(todo):
                    break
                step[todo] *= 0.5
            # no decrease along the Newton direction: roundoff floor reached
            stalled[idx[todo]] = True
        if np.max(err) > 1e-10:
            worst = int(np.argmax(err))
            raise ConvergenceError(
                f"Gauss-map inversion failed: residual {err[worst]:.3e} at direction {z[worst]}"
            )
        return zeta, sample

    def _evaluate(self, z):
        _, sample = self.invert(z)
        jet = jet_from_sample(sample)
        return jet.h, jet.point, jet.radius

    def sample(self, zeta):
        return self.chart(as_directions(zeta, self.n))


def jet_from_sample(sample):
    """Support jet at the normals of a chart sample; R = d_point d_normal^+."""
    z = sample.normal
    Jn, Jp = sample.d_normal, sample.d_point
    JtJ = np.einsum("kia,kib->kab", Jn, Jn)
    pinv = np.linalg.solve(JtJ, np.swapaxes(Jn, 1, 2))
    R = np.einsum("kia,kaj->kij", Jp, pinv)
    P = tangent_projector(z)
    R = symmetrize(np.einsum("kij,kjl,klm->kim", P, R, P, optimize=True))
    return SupportJet(z, np.sum(sample.point * z, axis=1), sample.point, R)


def _assign(sample, sel, cand, mask):
    for name in ("normal", "point", "d_normal", "d_point", "frame"):
        getattr(sample, name)[sel] = getattr(cand, name)[mask]


def polar_chart(body):
    """Chart of the polar body K° over the boundary parameter of K.

    The support hyperplane of K with normal zeta is dual to the point
    zeta / h(zeta) of K°, whose outward normal is x(zeta)/|x(zeta)|.
    """

    def chart(param):
        s = body.sample(param)
        zeta, x = s.normal, s.point
        h = np.sum(x * zeta, axis=1)
        if np.any(~(h > 0)):
            raise GeometryError("origin not interior")
        r = np.linalg.norm(x, axis=1)
        nu = x / r[:, None]
        d_nu = np.einsum("kij,kja->kia", tangent_projector(nu), s.d_point) / r[:, None, None]
        # dh = x . d zeta, since zeta . dx = 0
        dh = np.einsum("ki,kia->ka", x, s.d_normal)
        d_y = s.d_normal / h[:, None, None] - zeta[:, :, None] * dh[:, None, :] / (h**2)[:, None, None]
        return ChartSample(nu, zeta / h[:, None], d_nu, d_y, s.frame)

    return chart


def radial_function(body, theta, check=True):
    """Distance from the origin to the boundary along each unit ``theta``.

    Solves x(zeta) parallel to theta by Newton's method on the Gauss-map
    parametrization; the residual angle is below 1e-10.
    """
    theta = as_directions(theta, body.n)
    if check and body.origin_margin() <= 0:
        raise GeometryError("origin not interior")
    inverter = ChartBody(body.n, polar_chart(body))
    param, _ = inverter.invert(normalize(theta))
    x = body.sample(param).point
    return np.linalg.norm(x, axis=1)


def polar_body_euclidean(body):
    """K° = {y : y.x <= 1 for x in K}; closed form for centered ellipsoids."""
    if body.origin_margin() <= 0:
        raise GeometryError("origin not interior")
    ell = body.as_ellipsoid()
    if ell is not None and np.allclose(ell[1], 0.0, atol=0):
        return EllipsoidBody(np.linalg.inv(ell[0]))
    return ChartBody(body.n, polar_chart(body), analytic=body.analytic)


def volume(body, grid):
    """Vol(K) = (1/n) * integral of h det R over the sphere."""
    rule = body.boundary_rule(grid)
    jet = rule.jet
    return float(rule.integrate(jet.h * jet.det_radius)) / body.n


def first_moment(body, grid):
    """Integral of x over K, via (1/(n+1)) * integral of x h det R."""
    rule = body.boundary_rule(grid)
    jet = rule.jet
    return rule.integrate(jet.point * (jet.h * jet.det_radius)[:, None]) / (body.n + 1)


def euclidean_centroid(body, grid=None):
    grid = grid or make_grid(body.n)
    return first_moment(body, grid) / volume(body, grid)
