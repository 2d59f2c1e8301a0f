"""Command-line front end.

Subcommands
-----------
``gen``    write a JSON body spec
``eval``   evaluate functionals of a body
``check``  inequality reports for a body or a random corpus
``sweep``  ratio of one inequality across a parameter range

Every table starts with the header ``# hypaffine-report v1`` (CSV) or carries
it as ``"version"`` (JSON). Exit codes: 0 pass, 1 inequality violated,
2 input or configuration error, 3 internal cross-check failure.
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import functionals as F
from . import harness
from .bodies import io as bodyio
from .bodies.hyper import centroid_cross_check, recenter
from .errors import ConsistencyError, ConvergenceError, GeometryError
from .quad import make_grid, make_radial_rule, parse_resolution

HEADER = "hypaffine-report v1"
EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    body: str = None
    n: int = None
    grid: tuple = None
    radial_nodes: int = 32
    ps: tuple = ()
    seed: int = 0
    fmt: str = "csv"
    out: str = None
    extra: dict = field(default_factory=dict)

    def resolve_n(self, n):
        if self.n is not None and self.n != n:
            raise GeometryError(f"--n {self.n} does not match the body dimension {n}")
        self.n = n
        for p in self.ps:
            if p == -n:
                raise GeometryError(f"p = -n = {-n} is excluded")
        return n

    def make_grid(self):
        grid = make_grid(self.n, self.grid)
        if self.radial_nodes < 1:
            raise GeometryError("--radial-nodes must be positive")
        return grid


# --- output --------------------------------------------------------------


def _cell(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return "" if value is None else str(value)


def render(rows, columns, fmt):
    if fmt == "json":
        clean = [{c: (None if row.get(c) is None else _jsonable(row[c])) for c in columns} for row in rows]
        return json.dumps({"version": HEADER, "columns": list(columns), "rows": clean}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# {HEADER}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    return v


def emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------


def _parse_param(text):
    if "=" not in text:
        raise GeometryError(f"parameter {text!r} is not key=value")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        raise GeometryError(f"parameter {key}: value {raw!r} is not valid JSON") from None
    return key.strip(), value


def cmd_gen(cfg):
    params = dict(_parse_param(p) for p in cfg.extra["params"])
    spec = bodyio.make_spec(cfg.extra["kind"], params, n=cfg.n or 2)
    text = bodyio.dump_spec(spec) + "\n"
    emit(text, cfg.out)
    return EXIT_OK


def _load(cfg):
    K = bodyio.load_body(cfg.body)
    cfg.resolve_n(K.n)
    return K


def _recentered(K, cfg, grid):
    """Recentre, after checking the boundary and radial centroid routes agree."""
    centroid_cross_check(K, grid, make_radial_rule(cfg.radial_nodes))
    return recenter(K, grid)


def _ps(cfg, default):
    return cfg.ps if cfg.ps else default


FUNCTIONALS = {
    "weighted_volume": lambda K, g, p: F.weighted_volume(K, g),
    "weighted_volume_radial": lambda K, g, p: F.weighted_volume_radial(K, g),
    "minkowski_flux": lambda K, g, p: F.minkowski_flux(K, g),
    "weighted_curvature": lambda K, g, k: F.weighted_curvature_integral(K, int(k), g),
    "shifted_mean": lambda K, g, p: F.shifted_mean_curvature_integral(K, g),
    "as_H": lambda K, g, p: F.hyperbolic_lp_asa(K, p, g),
    "volume_product": lambda K, g, p: F.volume_product(K, g),
}


def cmd_eval(cfg):
    K = _load(cfg)
    grid = cfg.make_grid()
    if cfg.extra.get("recenter"):
        K = _recentered(K, cfg, grid)
    rows = []
    for name in cfg.extra["functionals"]:
        if name == "as_H":
            params = _ps(cfg, (1.0,))
        elif name == "weighted_curvature":
            params = tuple(range(K.n))
        else:
            params = (None,)
        for p in params:
            v = FUNCTIONALS[name](K, grid, p)
            rows.append({"functional": name, "param": None if p is None else float(p),
                         "value": v.value, "error": v.error, "grid": v.grid})
    emit(render(rows, ("functional", "param", "value", "error", "grid"), cfg.fmt), cfg.out)
    return EXIT_OK


REPORT_COLUMNS = ("theorem", "lhs", "rhs", "ratio", "gap", "satisfied", "lhs_err", "rhs_err")


def _reports(K, theorems, grid, ps):
    out = []
    for name in theorems:
        if name == "all":
            out += harness.check_all(K, grid, ps)
        elif name == "minkowski":
            out.append(harness.check_minkowski(K, grid))
        elif name == "quermass":
            out += [harness.check_quermass(K, k, grid) for k in range(K.n)]
        elif name == "shifted-mean":
            out.append(harness.check_shifted_mean(K, grid))
        elif name == "affine-isoperimetric":
            out.append(harness.check_affine_isoperimetric(K, grid))
        elif name == "lp-affine":
            out += [harness.check_lp_affine(K, p, grid) for p in ps]
        elif name == "santalo":
            out.append(harness.check_santalo(K, grid))
    return out


def cmd_check(cfg):
    corpus = cfg.extra.get("corpus")
    if corpus:
        if cfg.body:
            raise GeometryError("give either a body spec or --corpus, not both")
        cfg.n = cfg.n or 2
        grid = cfg.make_grid()
        cfg.resolve_n(cfg.n)
        bodies = harness.random_corpus(cfg.n, corpus, cfg.seed, grid)
    else:
        if not cfg.body:
            raise GeometryError("check needs a body spec or --corpus N")
        bodies = [_load(cfg)]
        grid = cfg.make_grid()
    ps = _ps(cfg, (2.0, -1.0))
    rows = []
    for i, K in enumerate(bodies):
        if cfg.extra.get("recenter"):
            K = _recentered(K, cfg, grid)
        for rep in _reports(K, cfg.extra["theorems"], grid, ps):
            row = rep.row()
            row["body"] = i
            rows.append(row)
    columns = (("body",) if corpus else ()) + REPORT_COLUMNS
    emit(render(rows, columns, cfg.fmt), cfg.out)
    return EXIT_OK if all(r["satisfied"] for r in rows) else EXIT_VIOLATION


def parse_range(text):
    """``start:stop:count`` as evenly spaced values."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise GeometryError(f"bad range {text!r}; expected start:stop:count") from None
    if count < 1 or not (np.isfinite(start) and np.isfinite(stop)):
        raise GeometryError(f"bad range {text!r}")
    if count == 1 and start != stop:
        raise GeometryError("a single-point range needs start == stop")
    return np.linspace(start, stop, count)


def cmd_sweep(cfg):
    K = _load(cfg)
    grid = cfg.make_grid()
    if cfg.extra.get("recenter"):
        K = _recentered(K, cfg, grid)
    theorem = cfg.extra["theorem"]
    if theorem == "invariance":
        rows = harness.invariance_sweep(K, cfg.extra["count"], cfg.seed, grid, _ps(cfg, (-1.0, 1.0, 2.0)))
        emit(render(rows, ("family", "index", "quantity", "drift"), cfg.fmt), cfg.out)
        return EXIT_OK
    rng = cfg.extra.get("range")
    if rng is None:
        if theorem != "quermass":
            raise GeometryError(f"--range is required for {theorem}")
        values = np.arange(K.n, dtype=float)
    else:
        values = parse_range(rng)
    if theorem == "quermass" and not all(v == int(v) and 0 <= v < K.n for v in values):
        raise GeometryError(f"k must be an integer in 0..{K.n - 1}")
    if theorem == "lp-affine" and np.any(values == -K.n):
        raise GeometryError(f"p = -n = {-K.n} is excluded")
    if theorem == "affine-isoperimetric" and np.any(values <= 0):
        raise GeometryError("lambda must be positive")
    rows = harness.parameter_sweep(K, theorem, values, grid)
    emit(render(rows, ("parameter", "ratio", "gap", "lhs_err", "rhs_err"), cfg.fmt), cfg.out)
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "eval": cmd_eval, "check": cmd_check, "sweep": cmd_sweep}


# --- argument parsing ----------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, choices=(2, 3), help="dimension of H^n")
    common.add_argument("--grid", help="sphere grid: m (n=2) or m_polarxm_azimuth (n=3)")
    common.add_argument("--radial-nodes", type=int, default=32, help="radial nodes for the centroid cross-check")
    common.add_argument("--p", type=float, nargs="+", default=[], help="exponents p")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path (default stdout)")

    parser = argparse.ArgumentParser(prog="hypaffine", description="Hyperbolic affine inequality checks.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("gen", parents=[common], help="write a body spec")
    gen.add_argument("kind", choices=sorted(bodyio.PARAMS))
    gen.add_argument("--param", action="append", default=[], metavar="KEY=JSON")

    ev = sub.add_parser("eval", parents=[common], help="evaluate functionals")
    ev.add_argument("body", help="body spec path or JSON text")
    ev.add_argument("--functional", nargs="+", choices=sorted(FUNCTIONALS), default=["weighted_volume"])
    ev.add_argument("--recenter", action="store_true")

    ch = sub.add_parser("check", parents=[common], help="inequality reports")
    ch.add_argument("body", nargs="?", help="body spec path or JSON text")
    ch.add_argument("--corpus", type=int, metavar="COUNT", help="check COUNT random bodies instead")
    ch.add_argument("--theorem", nargs="+", choices=("all",) + harness.THEOREMS, default=["all"])
    ch.add_argument("--recenter", action="store_true")

    sw = sub.add_parser("sweep", parents=[common], help="parameter sweep of one inequality")
    sw.add_argument("body", help="body spec path or JSON text")
    sw.add_argument("--theorem", required=True,
                    choices=("lp-affine", "quermass", "affine-isoperimetric", "invariance"))
    sw.add_argument("--range", help="start:stop:count")
    sw.add_argument("--count", type=int, default=20, help="transforms per family (invariance)")
    sw.add_argument("--recenter", action="store_true")
    return parser


def config_from_args(args):
    extra = {}
    if args.subcommand == "gen":
        extra = {"kind": args.kind, "params": args.param}
    elif args.subcommand == "eval":
        extra = {"functionals": args.functional, "recenter": args.recenter}
    elif args.subcommand == "check":
        extra = {"theorems": args.theorem, "recenter": args.recenter, "corpus": args.corpus}
    elif args.subcommand == "sweep":
        extra = {"theorem": args.theorem, "range": args.range, "count": args.count, "recenter": args.recenter}
    return RunConfig(
        subcommand=args.subcommand,
        body=getattr(args, "body", None),
        n=args.n,
        grid=None if args.grid is None else parse_resolution(args.grid),
        radial_nodes=args.radial_nodes,
        ps=tuple(args.p),
        seed=args.seed,
        fmt=args.format,
        out=args.out,
        extra=extra,
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.subcommand](cfg)
    except (GeometryError, OSError) as exc:
        print(f"hypaffine: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConsistencyError, ConvergenceError, FloatingPointError) as exc:
        print(f"hypaffine: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
