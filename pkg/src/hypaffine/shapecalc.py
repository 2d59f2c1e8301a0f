"""Boundary geometry of a static convex domain from its projection.

Everything here is evaluated in the base-point frame, i.e. for the domain
T_{p0}(K) with base point N = (1, 0), where the projection is simply
(x0, x) -> x. Quantities are vectorized over grid nodes: a jet holds arrays
whose first axis runs over the Gauss-map directions z of the projected body.

Two routes produce a :class:`LiftedJet`:

* :func:`lift_jet` evaluates the closed-form transfer formulas for the
  metric, normal, support function, second fundamental form and Weingarten
  matrix of the lifted hypersurface;
* :func:`lift_jet_direct` differentiates the lifted embedding
  X = (sqrt(1+|x|^2), x) in Minkowski space and gets the normal as the
  Minkowski-orthogonal complement of the tangent space.

Comparing the two is the main internal consistency check of the package.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .bodies.support import as_directions, symmetrize
from .errors import GeometryError
from .lorentz import mink_inner


@dataclass(frozen=True, eq=False)
class EuclideanJet:
    """Boundary data of the projected body at Gauss-map directions ``z``.

    The tangent frame ``frame`` is orthonormal in R^n; ``tangential`` holds
    the components x . e_i of the boundary point along it.
    """

    z: np.ndarray
    point: np.ndarray
    frame: np.ndarray
    support: np.ndarray
    radius: np.ndarray
    sff: np.ndarray
    curvatures: np.ndarray
    area_element: np.ndarray

    @property
    def tangential(self):
        return np.einsum("ki,kia->ka", self.point, self.frame)

    @property
    def gauss_curvature(self):
        return np.prod(self.curvatures, axis=1)


@dataclass(frozen=True, eq=False)
class LiftedJet:
    """Boundary data of the hyperbolic hypersurface over the same nodes.

    ``tangents`` are the Minkowski vectors d X along the Euclidean frame of
    the matching :class:`EuclideanJet`; ``metric`` and ``sff`` are expressed
    in that frame. ``weingarten`` is h_i^j with row index i.
    """

    X: np.ndarray
    tangents: np.ndarray
    metric: np.ndarray
    normal: np.ndarray
    support: np.ndarray
    sff: np.ndarray
    weingarten: np.ndarray
    curvatures: np.ndarray
    shifted: np.ndarray
    V: np.ndarray
    V_nu: np.ndarray
    area_ratio: np.ndarray

    @property
    def shifted_gauss(self):
        """H_{n-1} of the shifted curvatures V kappa_i - V_nu."""
        return np.prod(self.shifted, axis=1)


def euclidean_jet(body, z):
    return euclidean_jet_of(body.evaluate(as_directions(z, body.n)))


def euclidean_jet_of(jet):
    Rt = jet.radius_tangent
    det = np.linalg.det(Rt)
    if np.any(~(np.abs(det) > 0)):
        raise GeometryError("curvature-radius tensor is singular")
    sff = symmetrize(np.linalg.inv(Rt))
    return EuclideanJet(
        z=jet.z,
        point=jet.point,
        frame=jet.frame,
        support=jet.h,
        radius=Rt,
        sff=sff,
        curvatures=np.linalg.eigvalsh(sff),
        area_element=det,
    )


def pencil_eigenvalues(A, B):
    """Eigenvalues of the symmetric pencil (A, B) with B positive definite."""
    L = np.linalg.cholesky(B)
    Linv = np.linalg.inv(L)
    S = np.einsum("kab,kbc,kdc->kad", Linv, A, Linv, optimize=True)
    return np.linalg.eigvalsh(symmetrize(S))


def _assemble(ejet, X, tangents, g, nu, h, W):
    V = X[:, 0]
    uhat = ejet.support
    s = np.sqrt(1.0 + uhat**2)
    u = V * uhat / s
    kappa = pencil_eigenvalues(h, g)
    V_nu = -mink_inner(nu, _origin_like(X))
    return LiftedJet(
        X=X,
        tangents=tangents,
        metric=g,
        normal=nu,
        support=u,
        sff=h,
        weingarten=W,
        curvatures=kappa,
        shifted=V[:, None] * kappa - V_nu[:, None],
        V=V,
        V_nu=V_nu,
        area_ratio=s / V,
    )


def _origin_like(X):
    N = np.zeros_like(X)
    N[:, 0] = 1.0
    return N


def lift_jet(ejet):
    """Lifted boundary data from the closed-form transfer formulas."""
    x, uhat, a = ejet.point, ejet.support, ejet.tangential
    d = a.shape[1]
    I = np.eye(d)
    V2 = 1.0 + np.sum(x * x, axis=1)
    V = np.sqrt(V2)
    s = np.sqrt(1.0 + uhat**2)
    aa = a[:, :, None] * a[:, None, :]

    g = I - aa / V2[:, None, None]
    nu = np.concatenate([(V * uhat)[:, None], uhat[:, None] * x + ejet.z], axis=1) / s[:, None]
    h = (ejet.sff + uhat[:, None, None] * I - uhat[:, None, None] * aa / V2[:, None, None]) / s[:, None, None]
    W = (ejet.sff + uhat[:, None, None] * I) / s[:, None, None] + np.einsum(
        "kib,kb,kj->kij", ejet.sff, a, a
    ) / (s**3)[:, None, None]

    X = np.concatenate([V[:, None], x], axis=1)
    tangents = np.concatenate([(a / V[:, None])[:, None, :], ejet.frame], axis=1)
    return _assemble(ejet, X, tangents, g, nu, symmetrize(h), W)


def minkowski_normal(X, tangents, z):
    """Unit spacelike vector Minkowski-orthogonal to X and the tangents, outward."""
    rows = np.concatenate([X[:, None, :], np.swapaxes(tangents, 1, 2)], axis=1)
    rows[:, :, 0] *= -1.0  # rows . eta
    _, _, vt = np.linalg.svd(rows)
    nu = vt[:, -1, :]
    nu = nu / np.sqrt(mink_inner(nu, nu))[:, None]
    sign = np.sign(np.sum(nu[:, 1:] * z, axis=1))
    return nu * sign[:, None]


def lift_jet_direct(body, z):
    return lift_jet_direct_of(body.evaluate(as_directions(z, body.n)))


def lift_jet_direct_of(jet):
    """Lifted boundary data by differentiating the embedding in R^{n,1}.

    Uses the Gauss map of the projection as parameter; the metric and the
    second fundamental form are the Minkowski products <dX, dX> and
    <dX, d nu>. Only first derivatives of the boundary map enter.
    """
    ejet = euclidean_jet_of(jet)
    z = ejet.z
    x, uhat, E = ejet.point, ejet.support, ejet.frame
    V = np.sqrt(1.0 + np.sum(x * x, axis=1))
    s = np.sqrt(1.0 + uhat**2)

    # derivatives along the Gauss-map frame e_a
    dx = np.einsum("kij,kja->kia", jet.radius, E)
    du = np.einsum("ki,kia->ka", x, E)
    dV = np.einsum("ki,kia->ka", x, dx) / V[:, None]
    dX = np.concatenate([dV[:, None, :], dx], axis=1)

    X = np.concatenate([V[:, None], x], axis=1)
    nu = minkowski_normal(X, dX, z)
    spatial = uhat[:, None] * x + z
    num = np.concatenate([(V * uhat)[:, None], spatial], axis=1)
    d_num = np.concatenate(
        [
            (dV * uhat[:, None] + V[:, None] * du)[:, None, :],
            x[:, :, None] * du[:, None, :] + uhat[:, None, None] * dx + E,
        ],
        axis=1,
    )
    ds = uhat[:, None] * du / s[:, None]
    d_nu = d_num / s[:, None, None] - num[:, :, None] * ds[:, None, :] / (s**2)[:, None, None]

    eta_dX = dX.copy()
    eta_dX[:, 0, :] *= -1.0
    g_param = np.einsum("kia,kib->kab", eta_dX, dX)
    h_param = symmetrize(np.einsum("kia,kib->kab", eta_dX, d_nu))

    # change of basis: the orthonormal frame vector e_i is dx(R^{-1} e_i)
    C = np.linalg.inv(ejet.radius)
    g = symmetrize(np.einsum("kai,kab,kbj->kij", C, g_param, C, optimize=True))
    h = symmetrize(np.einsum("kai,kab,kbj->kij", C, h_param, C, optimize=True))
    tangents = np.einsum("kia,kab->kib", dX, C)
    # h_i^j = h_ik g^kj
    W = np.swapaxes(np.linalg.solve(g, h), 1, 2)
    return _assemble(ejet, X, tangents, g, nu, h, W)


def shifted_sff_check(jet, ejet):
    """Per-node max-norm of V h - V_nu g - sqrt((1+|x|^2)/(1+uhat^2)) hhat."""
    V = jet.V
    factor = V / np.sqrt(1.0 + ejet.support**2)
    lhs = V[:, None, None] * jet.sff - jet.V_nu[:, None, None] * jet.metric
    diff = lhs - factor[:, None, None] * ejet.sff
    return np.max(np.abs(diff), axis=(1, 2))


def gauss_relation_residual(jet, ejet):
    """Per-node relative residual of H_{n-1}(shifted) against the projected Gauss curvature."""
    n = ejet.z.shape[1]
    ratio = jet.V**2 / (1.0 + ejet.support**2)
    rhs = ratio ** ((n + 1) / 2) * ejet.gauss_curvature
    return np.abs(jet.shifted_gauss - rhs) / np.abs(rhs)


def metric_determinant_residual(jet, ejet):
    """|det g - (1+uhat^2)/(1+|x|^2)| per node."""
    return np.abs(np.linalg.det(jet.metric) - (1.0 + ejet.support**2) / jet.V**2)


def normal_residual(jet):
    """Worst violation per node of <nu,nu>=1, <nu,X>=0, <nu,dX>=0."""
    nn = np.abs(mink_inner(jet.normal, jet.normal) - 1.0)
    nx = np.abs(mink_inner(jet.normal, jet.X))
    nt = np.abs(mink_inner(jet.normal[:, None, :], np.swapaxes(jet.tangents, 1, 2)))
    return np.maximum(np.maximum(nn, nx), np.max(nt, axis=1))


def elementary_symmetric(values, k):
    """e_k of each row of ``values``."""
    values = np.asarray(values, dtype=float)
    e = [np.ones(values.shape[0])] + [np.zeros(values.shape[0])] * values.shape[1]
    for j in range(values.shape[1]):
        for i in range(j + 1, 0, -1):
            e[i] = e[i] + e[i - 1] * values[:, j]
    return e[k]


def mean_curvatures(curvatures, k):
    """Normalized k-th mean curvature e_k / C(n-1, k) of each row."""
    m = curvatures.shape[1]
    if not 0 <= k <= m:
        raise GeometryError(f"k must lie in 0..{m}, got {k}")
    return elementary_symmetric(curvatures, k) / comb(m, k)


def minkowski_frame_data(jet, T_inv):
    """Point and normal mapped back to absolute Minkowski coordinates."""
    return jet.X @ T_inv.T, jet.normal @ T_inv.T

