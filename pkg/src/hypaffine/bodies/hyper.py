"""Static convex domains in H^n represented through a projection.

A :class:`HyperBody` is a base point p0 together with the support function
of the projected body pi_{p0}(K) in R^n. Static convexity of K with
respect to p0 is the same thing as convexity of that projection, so every
valid support body gives a valid domain.
"""

from dataclasses import dataclass

import numpy as np

from .. import lorentz
from ..errors import ConsistencyError, GeometryError
from ..quad import make_grid, make_radial_rule, integrate_solid_radial
from .support import (
    AffineImage,
    ChartBody,
    ChartSample,
    EllipsoidBody,
    polar_body_euclidean,
    radial_function,
    euclidean_centroid,
    symmetrize,
)

CENTERING_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class HyperBody:
    p0: np.ndarray
    hat: object

    def __post_init__(self):
        p0 = lorentz.as_hyperpoint(self.p0, tol=1e-10)
        if p0.shape[0] - 1 != self.hat.n:
            raise GeometryError("base point and projected body have different dimensions")
        object.__setattr__(self, "p0", p0)

    @property
    def n(self):
        return self.hat.n

    @property
    def frame(self):
        """T_{p0}: absolute Minkowski coordinates -> base-point frame."""
        return lorentz.boost_to_origin(self.p0)


def _base_point(p0, n):
    return lorentz.origin(n) if p0 is None else lorentz.as_hyperpoint(p0, tol=1e-10)


def hyperbolic_ball(radius, n=2, p0=None):
    """Geodesic ball of the given radius centred at the base point."""
    if not radius > 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    p0 = _base_point(p0, n)
    s = np.sinh(radius)
    return HyperBody(p0, EllipsoidBody(s * s * np.eye(n)))


def geodesic_ball(radius, center, p0=None):
    """Geodesic ball B(center, radius) seen from base point ``p0``.

    With C = T_{p0} center = (c0, c), the ball {-<X, C> <= cosh r} projects
    to the ellipsoid centred at cosh(r) c with matrix sinh^2(r) (I + c c^T),
    i.e. h(z) = cosh(r) c.z + sinh(r) sqrt(1 + (c.z)^2).
    """
    if not radius > 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    center = lorentz.as_hyperpoint(center, tol=1e-10)
    n = center.shape[0] - 1
    p0 = _base_point(p0, n)
    c = lorentz.apply(lorentz.boost_to_origin(p0), center)[1:]
    M = np.sinh(radius) ** 2 * (np.eye(n) + np.outer(c, c))
    return HyperBody(p0, EllipsoidBody(M, np.cosh(radius) * c))


def frame_mass(K, grid=None):
    """The Minkowski vector of integral of X over T_{p0}(K), boundary route.

    Uses V dvol = d(vol-hat) and x / V = grad V, so that the spatial part is
    the integral of V(x(z)) z det R(z) over the sphere.
    """
    grid = grid or make_grid(K.n)
    rule = K.hat.boundary_rule(grid)
    jet = rule.jet
    det = jet.det_radius
    V = np.sqrt(1.0 + np.sum(jet.point**2, axis=1))
    vol = float(rule.integrate(jet.h * det)) / K.n
    spatial = rule.integrate(jet.z * (V * det)[:, None])
    return np.concatenate([[vol], spatial])


def frame_mass_radial(K, grid=None, rule=None):
    """Same vector as :func:`frame_mass`, by nested radial quadrature of (1, x/V)."""
    grid = grid or make_grid(K.n)
    rule = rule or make_radial_rule(32)
    rho = radial_function(K.hat, grid.nodes)

    def integrand(x):
        V = np.sqrt(1.0 + np.sum(x * x, axis=-1))
        return np.concatenate([np.ones(x.shape[:-1] + (1,)), x / V[..., None]], axis=-1)

    return integrate_solid_radial(grid, rule, rho, integrand)


def minkowski_mass(K, grid=None, method="boundary", rule=None):
    """Integral of the position vector X over K, in absolute coordinates."""
    if method == "boundary":
        m = frame_mass(K, grid)
    elif method == "radial":
        m = frame_mass_radial(K, grid, rule)
    else:
        raise GeometryError(f"unknown centroid method {method!r}")
    return lorentz.apply(lorentz.inverse_isometry(K.frame), m)


def hyperbolic_centroid(K, grid=None, method="boundary", rule=None):
    I = minkowski_mass(K, grid, method, rule)
    norm2 = -lorentz.mink_inner(I, I)
    if not (norm2 > 0 and I[0] > 0):
        raise ConsistencyError("mass vector is not future timelike; grid too coarse for this body")
    return I / np.sqrt(norm2)


def centroid_cross_check(K, grid=None, rule=None, tol=CENTERING_TOL):
    """Boundary and radial centroids; raise unless they agree.

    The allowance is ``tol`` plus the boundary route's doubling change and
    a geometric-tail bound d1 / (1 - d2/d1) for the radial route, which
    converges more slowly on eccentric bodies.
    """
    grid = grid or make_grid(K.n)
    fine = grid.refine()
    a = hyperbolic_centroid(K, grid)
    a_err = np.linalg.norm(hyperbolic_centroid(K, fine) - a)
    b = [hyperbolic_centroid(K, g, "radial", rule) for g in (grid, fine, fine.refine())]
    d1, d2 = np.linalg.norm(b[1] - b[0]), np.linalg.norm(b[2] - b[1])
    b_err = d1 / (1.0 - d2 / d1) if 0 < d1 and d2 < d1 else d1 + d2
    gap = float(np.linalg.norm(a - b[0]))
    allowed = tol + a_err + b_err
    if gap > allowed:
        raise ConsistencyError(f"centroid routes disagree by {gap:.3e} (allowed {allowed:.3e})")
    return gap


def centering_residual(K, grid=None):
    """|spatial part| / time part of the frame mass; zero iff cen(K) = p0."""
    m = frame_mass(K, grid)
    return float(np.linalg.norm(m[1:]) / m[0])


def is_centered(K, grid=None, tol=CENTERING_TOL):
    return centering_residual(K, grid) < tol


def projection_centroid_offset(K, grid=None):
    """Norm of the Euclidean centroid of pi_{p0}(K)."""
    return float(np.linalg.norm(euclidean_centroid(K.hat, grid)))


class ReprojectedBody(ChartBody):
    """pi(B lift(K-hat)) for a Lorentz matrix B, as a support body.

    The boundary keeps the parameter of the source body. With
    Phi(x) = pi(B lift(x)), the image point is Phi(x), its normal is
    DPhi^{-T} zeta normalized (zeta the source normal), and its second
    fundamental form in the parameter is
    c dzeta^T dx - (nu . B_s0) dx^T D^2V dx with c = 1/|DPhi^{-T} zeta|,
    which needs no third derivatives of h.
    """

    def __init__(self, source, B):
        self.source = source
        self.B = np.asarray(B, dtype=float)
        super().__init__(source.n, self._chart, analytic=source.analytic)

    def _chart(self, zeta):
        B = self.B
        b0, Bss = B[1:, 0], B[1:, 1:]
        src = self.source.sample(zeta)
        x, Jx = src.point, src.d_point
        V = np.sqrt(1.0 + np.sum(x * x, axis=1))
        xV = x / V[:, None]
        DPhi = b0[None, :, None] * xV[:, None, :] + Bss[None]
        y = V[:, None] * b0[None, :] + x @ Bss.T
        w = np.linalg.solve(np.swapaxes(DPhi, 1, 2), src.normal[..., None])[..., 0]
        c = 1.0 / np.linalg.norm(w, axis=1)
        nu = w * c[:, None]

        J_y = np.einsum("kij,kja->kia", DPhi, Jx)
        D2V = (np.eye(self.n)[None] - xV[:, :, None] * xV[:, None, :]) / V[:, None, None]
        curv = np.einsum("kia,kij,kjb->kab", Jx, D2V, Jx, optimize=True)
        base = np.einsum("kia,kib->kab", src.d_normal, Jx)
        sff = symmetrize(c[:, None, None] * base - (nu @ b0)[:, None, None] * curv)
        g = np.einsum("kia,kib->kab", J_y, J_y)
        J_nu = np.einsum("kia,kab->kib", J_y, np.linalg.solve(g, sff))
        return ChartSample(nu, y, J_nu, J_y, src.frame)


def reproject(K, q):
    """The same domain K described with base point ``q``."""
    q = lorentz.as_hyperpoint(q, tol=1e-10)
    B = lorentz.boost_to_origin(q) @ lorentz.inverse_isometry(K.frame)
    source = K.hat
    if isinstance(source, ReprojectedBody):
        B = B @ source.B
        source = source.source
    return HyperBody(q, ReprojectedBody(source, B))


def recenter(K, grid=None):
    """Move the base point to the hyperbolic centroid cen(K).

    One exact change of base point; the result is verified to be static
    convex and centred, meaning the spatial part of the frame mass vanishes.
    """
    grid = grid or make_grid(K.n)
    q = hyperbolic_centroid(K, grid)
    out = reproject(K, q)
    margin = out.hat.convexity_margin(grid)
    if not margin > 0:
        raise GeometryError(
            f"domain is not static convex with respect to its centroid (margin {margin:.3e})"
        )
    residual = centering_residual(out, grid)
    if residual > CENTERING_TOL:
        raise ConsistencyError(f"recentred body still off-centre: residual {residual:.3e}")
    return out


def hyperbolic_affine_transform(K, L, b=None):
    """phi_{L,b}(K) = pi_{p0}^{-1}(L pi_{p0}(K) + b) for L in SL(n)."""
    L = np.asarray(L, dtype=float)
    if L.shape != (K.n, K.n) or abs(np.linalg.det(L) - 1.0) > 1e-10:
        raise GeometryError("hyperbolic affine transformations need det L = 1")
    return HyperBody(K.p0, AffineImage(K.hat, L, b))


def apply_isometry(K, A):
    """The domain A(K), based at A(p0)."""
    A = np.asarray(A, dtype=float)
    if not lorentz.is_isometry(A):
        raise GeometryError("matrix is not an orthochronous Lorentz transformation")
    p1 = lorentz.apply(A, K.p0)
    p1 = lorentz.lift(p1[1:])
    Q = (lorentz.boost_to_origin(p1) @ A @ lorentz.inverse_isometry(K.frame))[1:, 1:]
    return HyperBody(p1, AffineImage(K.hat, Q))


def polar_body_hyperbolic(K):
    """K° with respect to p0, whose projection is the Euclidean polar of the projection."""
    return HyperBody(K.p0, polar_body_euclidean(K.hat))


def static_convexity_margin(K, grid=None):
    """Smallest curvature-radius eigenvalue of the projection.

    The lifted route (smallest V kappa_i - V_nu, from the directly
    differentiated hypersurface) must agree in sign.
    """
    from ..shapecalc import lift_jet_direct_of

    grid = grid or make_grid(K.n)
    jet = K.hat.boundary_rule(grid).jet
    projected = float(np.min(np.linalg.eigvalsh(jet.radius_tangent)))
    lifted = float(np.min(lift_jet_direct_of(jet).shifted))
    tol = 1e-9
    if (projected > tol and lifted < -tol) or (projected < -tol and lifted > tol):
        raise ConsistencyError(
            f"static convexity margins disagree: projection {projected:.3e}, lifted {lifted:.3e}"
        )
    return projected
