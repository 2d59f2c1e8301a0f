"""Numerical checks of curvature and volume inequalities for convex domains of H^n.

Modules: ``lorentz`` (hyperboloid model), ``quad`` (sphere and radial
quadrature), ``bodies`` (support-function bodies and their hyperbolic
domains), ``shapecalc`` (lifted boundary geometry), ``functionals``,
``harness`` (inequality reports) and ``cli``.
"""

from .errors import ConsistencyError, ConvergenceError, GeometryError

__version__ = "0.1.0"
__all__ = ["ConsistencyError", "ConvergenceError", "GeometryError", "__version__"]
