"""Minkowski-space algebra and the hyperboloid model of H^n.

Points of H^n are stored as plain ``(n+1,)`` arrays ``(x0, x1, ..., xn)``
on the upper sheet ``<X, X> = -1, x0 > 0``. Arrays with extra leading axes
are treated as stacks of vectors. Isometries are ``(n+1, n+1)`` matrices
acting on column vectors.
"""

import numpy as np

from .errors import GeometryError

SUPPORTED_DIMS = (2, 3)
HYPERPOINT_TOL = 1e-12
ISOMETRY_TOL = 1e-10


def check_dim(n):
    if n not in SUPPORTED_DIMS:
        raise GeometryError(f"dimension n={n} not supported (choose 2 or 3)")
    return n


def metric(n):
    """The Minkowski metric diag(-1, 1, ..., 1) on R^{n,1}."""
    eta = np.eye(n + 1)
    eta[0, 0] = -1.0
    return eta


def mink_inner(X, Y):
    """Minkowski inner product -x0*y0 + x.y, broadcast over leading axes."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    return -X[..., 0] * Y[..., 0] + np.sum(X[..., 1:] * Y[..., 1:], axis=-1)


def lift(x):
    """Map x in R^n to the hyperboloid point (sqrt(1+|x|^2), x)."""
    x = np.asarray(x, dtype=float)
    x0 = np.sqrt(1.0 + np.sum(x * x, axis=-1))
    return np.concatenate([x0[..., None], x], axis=-1)


def project(X):
    """Orthogonal projection H^n -> R^n with respect to N = (1, 0)."""
    return np.asarray(X, dtype=float)[..., 1:]


def origin(n):
    """The point N = (1, 0, ..., 0)."""
    N = np.zeros(n + 1)
    N[0] = 1.0
    return N


def as_hyperpoint(X, tol=HYPERPOINT_TOL):
    """Validate ``X`` as a point of H^n and return it as a float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 1 or not np.all(np.isfinite(X)):
        raise GeometryError("hyperpoint must be a finite 1-d vector")
    check_dim(X.shape[0] - 1)
    if X[0] <= 0:
        raise GeometryError("hyperpoint must lie on the upper sheet (x0 > 0)")
    norm = mink_inner(X, X)
    if abs(norm + 1.0) > tol * max(1.0, X[0] ** 2):
        raise GeometryError(f"<X,X> = {norm!r}, expected -1")
    return X


def geodesic_distance(X, Y):
    """Hyperbolic distance arccosh(-<X,Y>), clamped against roundoff."""
    c = -mink_inner(X, Y)
    return np.arccosh(np.maximum(c, 1.0))


def potential_V(X, p0):
    """The static potential cosh d(X, p0) = -<X, p0>."""
    return -mink_inner(X, p0)


def is_isometry(M, tol=ISOMETRY_TOL):
    M = np.asarray(M, dtype=float)
    eta = metric(M.shape[0] - 1)
    return bool(np.allclose(M.T @ eta @ M, eta, atol=tol, rtol=0) and M[0, 0] > 0)


def inverse_isometry(M):
    """Inverse of a Lorentz matrix, eta M^T eta."""
    eta = metric(M.shape[0] - 1)
    return eta @ M.T @ eta


def boost(direction, rho):
    """Pure boost moving N a distance ``rho`` along unit ``direction``.

    The result sends N to (cosh rho, sinh rho * direction).
    """
    theta = np.asarray(direction, dtype=float)
    theta = theta / np.linalg.norm(theta)
    n = theta.shape[0]
    c, s = np.cosh(rho), np.sinh(rho)
    B = np.eye(n + 1)
    B[0, 0] = c
    B[0, 1:] = s * theta
    B[1:, 0] = s * theta
    B[1:, 1:] += (c - 1.0) * np.outer(theta, theta)
    return B


def boost_to_origin(p0):
    """The hyperbolic translation T_{p0}: the symmetric boost with T p0 = N."""
    p0 = np.asarray(p0, dtype=float)
    n = p0.shape[0] - 1
    x = p0[1:]
    s = np.linalg.norm(x)
    T = np.eye(n + 1)
    if s == 0.0:
        return T
    theta = x / s
    c = np.sqrt(1.0 + s * s)
    T[0, 0] = c
    T[0, 1:] = -s * theta
    T[1:, 0] = -s * theta
    # c - 1 written as s^2/(c+1) to keep precision for small s
    T[1:, 1:] += (s * s / (c + 1.0)) * np.outer(theta, theta)
    return T


def rotation(Q):
    """Embed an orthogonal n x n matrix as an isometry fixing N."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    M = np.eye(n + 1)
    M[1:, 1:] = Q
    return M


def apply(M, X):
    """Apply a Lorentz matrix to a vector or a stack of vectors."""
    return np.asarray(X, dtype=float) @ np.asarray(M, dtype=float).T


def project_from(p0, X):
    """The projection pi_{p0} = pi o T_{p0}."""
    return project(apply(boost_to_origin(p0), X))


def random_isometry(n, rng, max_distance=1.0):
    """A random orientation-preserving isometry: rotation then boost."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    direction = rng.standard_normal(n)
    rho = rng.uniform(0.0, max_distance)
    return boost(direction, rho) @ rotation(Q)
