"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Invalid geometric input: bad dimension, non-convex body, bad parameters."""


class ConvergenceError(RuntimeError):
    """An iterative solve (Newton inversion of a Gauss map) did not converge."""


class ConsistencyError(RuntimeError):
    """Two independent computational routes disagree beyond tolerance."""
