"""Both sides of each inequality, with error bars, plus invariance sweeps.

Report ids:

``minkowski``
    (int V dA)^2 >= n/(n-1) int_K V dvol int V H dA, with H = (n-1) H_1.
``quermass-k``
    int V H_k dA >= n W^{(n-1-k)/n} (|B|^{2/n} + W^{2/n})^{(k+1)/2}.
``shifted-mean``
    int H_1(shifted) dA >= n |B|^{2/n} W^{(n-2)/n}.
``affine-isoperimetric``
    as_1^H(K) <= n |B|^{2/(n+1)} W^{(n-1)/(n+1)}.
``lp-affine``
    as_p^H(K) versus n |B|^{2p/(n+p)} W^{(n-p)/(n+p)}; needs cen(K) = p0.
``santalo``
    W(K) W(K°) <= |B|^2; needs cen(K) = p0.

Here W is the weighted volume, the integral of V over K.
"""

from dataclasses import dataclass

import numpy as np

from . import lorentz
from . import functionals as F
from .bodies.hyper import (
    HyperBody,
    apply_isometry,
    centering_residual,
    hyperbolic_affine_transform,
    hyperbolic_centroid,
    static_convexity_margin,
    CENTERING_TOL,
)
from .bodies.support import (
    AffineImage,
    Polynomial,
    interpolate,
    make_perturbed_ball,
)
from .errors import GeometryError
from .quad import ball_volume, make_grid

REL_FLOOR = 1e-9
CORPUS_MARGIN = 0.05
THEOREMS = ("minkowski", "quermass", "shifted-mean", "affine-isoperimetric", "lp-affine", "santalo")


@dataclass(frozen=True)
class InequalityReport:
    theorem: str
    lhs: F.FunctionalValue
    rhs: F.FunctionalValue
    direction: str
    body: str = ""
    grid: str = ""

    @property
    def ratio(self):
        return self.lhs.value / self.rhs.value

    @property
    def gap(self):
        return abs(self.ratio - 1.0)

    @property
    def slack(self):
        return self.lhs.error + self.rhs.error + REL_FLOOR * abs(self.rhs.value)

    @property
    def satisfied(self):
        if self.direction == "<=":
            return self.lhs.value <= self.rhs.value + self.slack
        if self.direction == ">=":
            return self.lhs.value >= self.rhs.value - self.slack
        return True

    @property
    def strict(self):
        """True when the inequality holds with room beyond the error bars."""
        if self.direction == "<=":
            return self.lhs.value < self.rhs.value - self.slack
        if self.direction == ">=":
            return self.lhs.value > self.rhs.value + self.slack
        return False

    def row(self):
        return {
            "theorem": self.theorem,
            "lhs": self.lhs.value,
            "rhs": self.rhs.value,
            "ratio": self.ratio,
            "gap": self.gap,
            "satisfied": self.satisfied,
            "lhs_err": self.lhs.error,
            "rhs_err": self.rhs.error,
        }


def _derived(fn, *values):
    """fn of several FunctionalValues with first-order error propagation."""
    base = [v.value for v in values]
    out = fn(*base)
    err = 0.0
    for i, v in enumerate(values):
        shifted = list(base)
        shifted[i] += v.error
        err += abs(fn(*shifted) - out)
    return F.FunctionalValue(float(out), values[0].grid, float(err))


def describe(K):
    return f"{type(K.hat).__name__}@{np.array2string(K.p0, precision=6, separator=',')}"


def _report(theorem, lhs, rhs, direction, K):
    return InequalityReport(theorem, lhs, rhs, direction, describe(K), lhs.grid)


def require_static_convex(K, grid=None, strict=False):
    margin = static_convexity_margin(K, grid)
    if margin < 0 or (strict and margin <= 0):
        raise GeometryError(f"body is not static convex (margin {margin:.3e})")
    return margin


def require_interior(K, grid=None):
    if not K.hat.origin_margin(grid) > 0:
        raise GeometryError("base point is not interior")


def require_centered(K, grid=None):
    residual = centering_residual(K, grid)
    if residual > CENTERING_TOL:
        raise GeometryError(
            f"recenter required: base point is not the hyperbolic centroid (residual {residual:.2e})"
        )


def check_minkowski(K, grid=None):
    """(int V dA)^2 against n W int V H_1 dA."""
    require_static_convex(K, grid)
    n = K.n
    area = F.weighted_curvature_integral(K, 0, grid)
    mean = F.weighted_curvature_integral(K, 1, grid)
    W = F.weighted_volume(K, grid)
    lhs = _derived(lambda a: a * a, area)
    rhs = _derived(lambda w, m: n * w * m, W, mean)
    return _report("minkowski", lhs, rhs, ">=", K)


def quermass_bound(W, n, k):
    B = ball_volume(n)
    return n * W ** ((n - 1 - k) / n) * (B ** (2 / n) + W ** (2 / n)) ** ((k + 1) / 2)


def check_quermass(K, k, grid=None):
    require_static_convex(K, grid)
    require_interior(K, grid)
    lhs = F.weighted_curvature_integral(K, k, grid)
    rhs = _derived(lambda w: quermass_bound(w, K.n, k), F.weighted_volume(K, grid))
    return _report(f"quermass-{k}", lhs, rhs, ">=", K)


def check_shifted_mean(K, grid=None):
    require_static_convex(K, grid)
    require_interior(K, grid)
    n = K.n
    B = ball_volume(n)
    lhs = F.shifted_mean_curvature_integral(K, grid)
    rhs = _derived(lambda w: n * B ** (2 / n) * w ** ((n - 2) / n), F.weighted_volume(K, grid))
    return _report("shifted-mean", lhs, rhs, ">=", K)


def lp_bound(W, n, p):
    return n * ball_volume(n) ** (2 * p / (n + p)) * W ** ((n - p) / (n + p))


def check_affine_isoperimetric(K, grid=None):
    require_static_convex(K, grid)
    lhs = F.hyperbolic_lp_asa(K, 1.0, grid)
    rhs = _derived(lambda w: lp_bound(w, K.n, 1.0), F.weighted_volume(K, grid))
    return _report("affine-isoperimetric", lhs, rhs, "<=", K)


def check_lp_affine(K, p, grid=None):
    """p >= 0: upper bound; -n < p < 0: lower bound; p < -n: ratio only."""
    n = K.n
    p = float(p)
    if p == -n:
        raise GeometryError(f"p = -n = {-n} is excluded")
    require_centered(K, grid)
    require_static_convex(K, grid, strict=p < -n)
    require_interior(K, grid)
    lhs = F.hyperbolic_lp_asa(K, p, grid)
    rhs = _derived(lambda w: lp_bound(w, n, p), F.weighted_volume(K, grid))
    direction = "<=" if p >= 0 else (">=" if p > -n else "info")
    return _report(f"lp-affine[p={p:g}]", lhs, rhs, direction, K)


def check_santalo(K, grid=None):
    require_centered(K, grid)
    require_interior(K, grid)
    require_static_convex(K, grid)
    lhs = F.volume_product(K, grid)
    B = ball_volume(K.n)
    rhs = F.FunctionalValue(B * B, lhs.grid, 0.0)
    return _report("santalo", lhs, rhs, "<=", K)


def check_all(K, grid=None, ps=(2.0, -1.0)):
    """Every applicable report; centring-dependent ones only when p0 = cen(K)."""
    reports = [check_minkowski(K, grid), check_affine_isoperimetric(K, grid)]
    if K.hat.origin_margin(grid) > 0:
        reports += [check_quermass(K, k, grid) for k in range(K.n)]
        reports.append(check_shifted_mean(K, grid))
        if centering_residual(K, grid) <= CENTERING_TOL:
            reports += [check_lp_affine(K, p, grid) for p in ps]
            reports.append(check_santalo(K, grid))
    return reports


# --- random bodies -------------------------------------------------------


def random_sl(n, rng, spread=1.5):
    """Random L with det 1 and singular values in [1/spread, spread]."""
    Q1 = np.linalg.qr(rng.normal(size=(n, n)))[0]
    Q2 = np.linalg.qr(rng.normal(size=(n, n)))[0]
    logs = rng.uniform(-np.log(spread), np.log(spread), size=n)
    logs -= logs.mean()
    L = Q1 @ np.diag(np.exp(logs)) @ Q2
    if np.linalg.det(L) < 0:
        L[:, 0] *= -1.0
    return L / np.linalg.det(L) ** (1.0 / n)


def _random_perturbation(n, rng):
    """Unit-size perturbation containing modes of degree 3 and higher."""
    if n == 2:
        coef = rng.normal(size=(4, 2))
        coef /= np.abs(coef).sum()
        return [(k, a, b) for k, (a, b) in zip(range(2, 6), coef)]
    terms = []
    for d in (2, 3):
        for i in range(d + 1):
            for j in range(d + 1 - i):
                terms.append((rng.normal(), (i, j, d - i - j)))
    scale = sum(abs(c) for c, _ in terms)
    return Polynomial([(c / scale, p) for c, p in terms], 3)


def random_body(n, rng, grid=None, margin=CORPUS_MARGIN, max_tries=50):
    """A random static convex body based at the origin of H^n.

    A perturbed ball of random radius with relative perturbation at least
    0.05, a random unimodular image and a small translation, rejected until
    the convexity margin exceeds ``margin``.
    """
    grid = grid or make_grid(n)
    for _ in range(max_tries):
        R = rng.uniform(0.4, 1.5)
        eps = R * rng.uniform(0.05, 0.2)
        try:
            base = make_perturbed_ball(R, eps, _random_perturbation(n, rng), n=n, grid=grid)
        except GeometryError:
            continue
        hat = AffineImage(base, random_sl(n, rng, 1.3), rng.uniform(-0.1, 0.1, size=n) * R)
        K = HyperBody(lorentz.origin(n), hat)
        if hat.origin_margin(grid) > 0 and static_convexity_margin(K, grid) > margin:
            return K
    raise GeometryError("could not draw a body with the requested convexity margin")


def random_corpus(n, count, seed, grid=None):
    rng = np.random.default_rng(seed)
    return [random_body(n, rng, grid) for _ in range(count)]


# --- sweeps --------------------------------------------------------------


def _raw_ratios(K, grid, ps):
    """Inequality ratios without hypothesis gates, for drift measurements."""
    n = K.n
    W = F.weighted_volume(K, grid).value
    out = {"affine-isoperimetric": F.lp_affine_surface_area(K.hat, 1.0, grid).value / lp_bound(W, n, 1.0)}
    for p in ps:
        out[f"lp-affine[p={p:g}]"] = F.lp_affine_surface_area(K.hat, p, grid).value / lp_bound(W, n, p)
    out["santalo"] = F.volume_product(K, grid).value / ball_volume(n) ** 2
    return out


def invariance_sweep(K, count=20, seed=0, grid=None, ps=(-1.0, 1.0, 2.0), max_distance=1.0):
    """Drift of functionals and ratios under random phi_{L,0} and isometries.

    Returns a list of rows ``{"family", "index", "quantity", "drift"}``;
    drifts are relative, except centroid equivariance which is the Euclidean
    norm of cen(A K) - A cen(K) in R^{n+1}.
    """
    grid = grid or make_grid(K.n)
    rng = np.random.default_rng(seed)
    base_asa = {p: F.hyperbolic_lp_asa(K, p, grid).value for p in ps}
    base_ratio = _raw_ratios(K, grid, ps)
    cen = hyperbolic_centroid(K, grid)
    rows = []

    def rel(a, b):
        return abs(a - b) / abs(b)

    for i in range(count):
        KL = hyperbolic_affine_transform(K, random_sl(K.n, rng))
        for p in ps:
            rows.append({"family": "sl", "index": i, "quantity": f"as_H[p={p:g}]",
                         "drift": rel(F.hyperbolic_lp_asa(KL, p, grid).value, base_asa[p])})
        for name, r in _raw_ratios(KL, grid, ps).items():
            rows.append({"family": "sl", "index": i, "quantity": name, "drift": rel(r, base_ratio[name])})
    for i in range(count):
        A = lorentz.random_isometry(K.n, rng, max_distance)
        KA = apply_isometry(K, A)
        residual = np.linalg.norm(hyperbolic_centroid(KA, grid) - lorentz.apply(A, cen))
        rows.append({"family": "isometry", "index": i, "quantity": "centroid", "drift": float(residual)})
        for p in ps:
            rows.append({"family": "isometry", "index": i, "quantity": f"as_H[p={p:g}]",
                         "drift": rel(F.hyperbolic_lp_asa(KA, p, grid).value, base_asa[p])})
    return rows


def interpolation_gaps(ellipsoid, perturbed, ts, p0=None, grid=None):
    """Affine-isoperimetric gap along h_t = (1 - t) h_ellipsoid + t h_perturbed."""
    n = ellipsoid.n
    p0 = lorentz.origin(n) if p0 is None else p0
    return [
        check_affine_isoperimetric(HyperBody(p0, interpolate(ellipsoid, perturbed, t)), grid).gap
        for t in ts
    ]


def parameter_sweep(K, theorem, values, grid=None):
    """Rows ``(parameter, ratio, gap, lhs_err, rhs_err)`` for one theorem.

    ``theorem`` selects the family: ``lp-affine`` sweeps p, ``quermass``
    sweeps k, and ``affine-isoperimetric`` sweeps lambda in the transform
    diag(lambda, 1/lambda, 1...).
    """
    rows = []
    for v in values:
        if theorem == "lp-affine":
            rep = check_lp_affine(K, v, grid)
        elif theorem == "quermass":
            rep = check_quermass(K, int(v), grid)
        elif theorem == "affine-isoperimetric":
            L = np.eye(K.n)
            L[0, 0], L[1, 1] = v, 1.0 / v
            rep = check_affine_isoperimetric(hyperbolic_affine_transform(K, L), grid)
        else:
            raise GeometryError(f"no sweep defined for {theorem!r}")
        rows.append({"parameter": float(v), "ratio": rep.ratio, "gap": rep.gap,
                     "lhs_err": rep.lhs.error, "rhs_err": rep.rhs.error})
    return rows
