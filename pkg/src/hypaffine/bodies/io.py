"""JSON body specifications.

A spec is ``{"n", "kind", "params", "basepoint"}`` with ``basepoint``
optional (default: the origin of H^n). The projected body is described in
the frame of the base point. Kinds and their parameters:

``ball``            ``{"R"}``: projection is the Euclidean ball of radius R.
``ellipsoid``       ``{"M", "center"}``: ``center`` optional.
``perturbed_ball``  ``{"R", "eps", "modes"}`` (n = 2, Fourier modes
                    ``[k, a, b]``) or ``{"R", "eps", "terms"}`` (polynomial
                    ``[coef, [powers]]``).
``hyper``           ``{"radius", "center"}``: geodesic ball; ``center`` is a
                    point of H^n in absolute coordinates, default the base point.
"""

import json

import numpy as np

from .. import lorentz
from ..errors import GeometryError
from .hyper import HyperBody, geodesic_ball
from .support import Polynomial, make_ball, make_ellipsoid, make_perturbed_ball

TOP_KEYS = {"n", "kind", "params", "basepoint"}
PARAMS = {
    "ball": ({"R"}, set()),
    "ellipsoid": ({"M"}, {"center"}),
    "perturbed_ball": ({"R", "eps"}, {"modes", "terms"}),
    "hyper": ({"radius"}, {"center"}),
}


def _check_keys(given, required, optional, what):
    given = set(given)
    unknown = given - required - optional
    if unknown:
        raise GeometryError(f"unknown {what} field(s): {', '.join(sorted(unknown))}")
    missing = required - given
    if missing:
        raise GeometryError(f"missing {what} field(s): {', '.join(sorted(missing))}")


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise GeometryError(f"{name} must be a number")
    return float(value)


def _array(value, name, shape):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise GeometryError(f"{name} must be numeric") from None
    if arr.shape != shape:
        raise GeometryError(f"{name} must have shape {shape}, got {arr.shape}")
    return arr


def validate_spec(spec):
    if not isinstance(spec, dict):
        raise GeometryError("body spec must be a JSON object")
    _check_keys(spec, {"n", "kind", "params"}, {"basepoint"}, "spec")
    n = spec["n"]
    if n not in lorentz.SUPPORTED_DIMS or isinstance(n, bool):
        raise GeometryError(f"n must be 2 or 3, got {n!r}")
    kind = spec["kind"]
    if kind not in PARAMS:
        raise GeometryError(f"unknown body kind {kind!r}")
    params = spec["params"]
    if not isinstance(params, dict):
        raise GeometryError("params must be a JSON object")
    _check_keys(params, *PARAMS[kind], f"{kind} params")
    if kind == "perturbed_ball" and len({"modes", "terms"} & set(params)) != 1:
        raise GeometryError("perturbed_ball needs exactly one of modes or terms")
    return n, kind, params


def load_body(spec):
    """HyperBody from a spec dict, a JSON string or a path."""
    if isinstance(spec, str):
        text = spec
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GeometryError(f"malformed body spec: {exc}") from None
    n, kind, params = validate_spec(spec)
    p0 = lorentz.origin(n)
    if spec.get("basepoint") is not None:
        p0 = lorentz.as_hyperpoint(_array(spec["basepoint"], "basepoint", (n + 1,)), tol=1e-10)

    if kind == "hyper":
        center = p0 if params.get("center") is None else _array(params["center"], "center", (n + 1,))
        return geodesic_ball(_number(params["radius"], "radius"), center, p0)
    if kind == "ball":
        hat = make_ball(_number(params["R"], "R"), n)
    elif kind == "ellipsoid":
        center = params.get("center")
        hat = make_ellipsoid(
            _array(params["M"], "M", (n, n)),
            None if center is None else _array(center, "center", (n,)),
        )
    else:
        R, eps = _number(params["R"], "R"), _number(params["eps"], "eps")
        if "modes" in params:
            if n != 2:
                raise GeometryError("Fourier modes describe planar bodies only")
            modes = [tuple(_array(m, "mode", (3,))) for m in params["modes"]]
            hat = make_perturbed_ball(R, eps, [(int(k), a, b) for k, a, b in modes], n=n)
        else:
            terms = [(_number(c, "coefficient"), p) for c, p in params["terms"]]
            hat = make_perturbed_ball(R, eps, Polynomial(terms, n), n=n)
    return HyperBody(p0, hat)


def make_spec(kind, params, n=2, basepoint=None):
    """A validated spec dict; builds the body once to reject bad parameters."""
    spec = {"n": n, "kind": kind, "params": params}
    if basepoint is not None:
        spec["basepoint"] = [float(v) for v in basepoint]
    load_body(spec)
    return spec


def dump_spec(spec, path=None):
    text = json.dumps(spec, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
