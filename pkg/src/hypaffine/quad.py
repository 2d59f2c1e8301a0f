"""Quadrature on S^1 and S^2 and along rays.

S^1 uses the trapezoid rule, which is spectrally accurate for smooth
periodic integrands. S^2 uses a product of Gauss-Legendre nodes in the
cosine of the polar angle with the trapezoid rule in azimuth; no node sits
on a pole.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import gamma, pi

import numpy as np

from .errors import GeometryError

DEFAULT_RESOLUTION = {2: (256,), 3: (48, 96)}


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Nodes and weights of a quadrature rule on S^{n-1}."""

    nodes: np.ndarray
    weights: np.ndarray
    resolution: tuple

    @property
    def n(self):
        return self.nodes.shape[1]

    @property
    def dim(self):
        return self.n - 1

    @property
    def size(self):
        return self.weights.shape[0]

    def describe(self):
        return "x".join(str(r) for r in self.resolution)

    def refine(self):
        """The grid with every resolution parameter doubled."""
        return make_grid(self.n, tuple(2 * r for r in self.resolution))

    def integrate(self, values):
        return integrate_sphere(self, values)


@dataclass(frozen=True, eq=False)
class RadialRule:
    """Gauss-Legendre rule on [0, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "size", self.nodes.shape[0])


def sphere_measure(n):
    """Surface measure of S^{n-1}."""
    return 2.0 * pi ** (n / 2) / gamma(n / 2)


def ball_volume(n):
    """Volume |B^n| of the unit ball."""
    return pi ** (n / 2) / gamma(n / 2 + 1)


def make_circle_grid(m):
    if m < 8:
        raise GeometryError(f"circle grid needs m >= 8, got {m}")
    phi = 2.0 * pi * np.arange(m) / m
    nodes = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    weights = np.full(m, 2.0 * pi / m)
    return SphereGrid(nodes, weights, (m,))


def make_sphere_grid(m_polar, m_azimuth):
    if m_polar < 8 or m_azimuth < 16:
        raise GeometryError(
            f"sphere grid needs m_polar >= 8 and m_azimuth >= 16, got {m_polar}x{m_azimuth}"
        )
    t, wt = np.polynomial.legendre.leggauss(m_polar)
    phi = 2.0 * pi * np.arange(m_azimuth) / m_azimuth
    st = np.sqrt(1.0 - t * t)
    nodes = np.stack(
        [
            np.outer(st, np.cos(phi)).ravel(),
            np.outer(st, np.sin(phi)).ravel(),
            np.repeat(t, m_azimuth),
        ],
        axis=1,
    )
    weights = np.repeat(wt, m_azimuth) * (2.0 * pi / m_azimuth)
    return SphereGrid(nodes, weights, (m_polar, m_azimuth))


def make_grid(n, resolution=None):
    """Grid on S^{n-1}; ``resolution`` is ``(m,)`` for n=2, ``(m_polar, m_azimuth)`` for n=3."""
    if resolution is None:
        resolution = DEFAULT_RESOLUTION.get(n)
    if isinstance(resolution, int):
        resolution = (resolution,)
    return _cached_grid(n, tuple(int(r) for r in resolution))


@lru_cache(maxsize=32)
def _cached_grid(n, resolution):
    if n == 2 and len(resolution) == 1:
        grid = make_circle_grid(*resolution)
    elif n == 3 and len(resolution) == 2:
        grid = make_sphere_grid(*resolution)
    else:
        raise GeometryError(f"resolution {resolution} does not fit n={n}")
    grid.nodes.setflags(write=False)
    grid.weights.setflags(write=False)
    return grid


def parse_resolution(text):
    """Parse ``"256"`` or ``"48x96"``."""
    try:
        return tuple(int(part) for part in str(text).lower().split("x"))
    except ValueError:
        raise GeometryError(f"bad grid resolution {text!r}") from None


def integrate_sphere(grid, f):
    """Sum of w_k f(z_k); ``f`` is a callable on the node array or precomputed values.

    Values may carry trailing axes (vector-valued integrands).
    """
    values = f(grid.nodes) if callable(f) else f
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite integrand value on sphere grid")
    return np.tensordot(grid.weights, values, axes=(0, 0))


def make_radial_rule(n_r):
    if n_r < 2:
        raise GeometryError(f"radial rule needs at least 2 nodes, got {n_r}")
    t, w = np.polynomial.legendre.leggauss(n_r)
    return RadialRule(0.5 * (t + 1.0), 0.5 * w)


def integrate_solid_radial(grid, rule, rho, f):
    """Integral of ``f`` over the star-shaped region {t theta : 0 <= t <= rho(theta)}.

    ``rho`` maps the (k, n) node array to radii; ``f`` maps an (..., n) array
    of points to values (scalar or with trailing axes).
    """
    radii = np.asarray(rho(grid.nodes) if callable(rho) else rho, dtype=float)
    if np.any(~(radii > 0)):
        raise GeometryError("body does not contain origin")
    n = grid.n
    t = radii[:, None] * rule.nodes[None, :]
    pts = t[..., None] * grid.nodes[:, None, :]
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand value in radial quadrature")
    jac = (t ** (n - 1)) * radii[:, None] * rule.weights[None, :]
    ray = np.einsum("kj,kj...->k...", jac, vals)
    return np.tensordot(grid.weights, ray, axes=(0, 0))
