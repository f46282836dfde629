"""``asa-kit`` command-line front end.

Exit status: 0 all requested checks pass, 1 a check failed, 2 invalid
input (body spec, p <= 0, flags), 3 numerical failure.
"""
import argparse
from dataclasses import dataclass, field
import sys
import warnings

from . import __version__
from .asa import AsaReport, compute_asa
from .coarea import verify_change_of_variable, verify_sphere_boundary_equality
from .convex_body import Polytope
from .errors import (
    BodySpecError,
    DegenerateCurvature,
    HessianUnavailable,
    HullUnavailable,
    InvalidBody,
    NonConvergence,
    NumericalFailure,
    OriginNotInterior,
    ZeroCurvatureFunction,
)
from .io import SCHEMA, dumps, load_body, table_text
from .sphere import default_resolution
from .verify import DEFAULT_TOLERANCES, demo_upper_semicontinuity, run_body_suite

COMMANDS = ("compute", "verify", "coarea", "sweep", "demo-usc")
FORMATS = ("json", "csv", "tsv")
TOLERANCES = dict(
    DEFAULT_TOLERANCES,
    agreement=0.01,
    change_of_variable=0.01,
    sweep=1e-9,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
NUMERIC_ERRORS = (HessianUnavailable, DegenerateCurvature, ZeroCurvatureFunction, NumericalFailure, FloatingPointError)
INPUT_ERRORS = (BodySpecError, InvalidBody, OriginNotInterior, HullUnavailable)


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    body_path: str
    p: float = 1.0
    resolution: int = None
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output_path: str = None
    format: str = "json"
    trace_path: str = None

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if not (self.p > 0):
            raise InputError(f"p must be a real number > 0 (got {self.p})")
        if self.resolution is not None and self.resolution < 1:
            raise InputError("resolution must be >= 1")
        if self.format not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")
        unknown = set(self.tolerances) - set(TOLERANCES)
        if unknown:
            raise InputError(f"unknown tolerance names {sorted(unknown)}; known: {sorted(TOLERANCES)}")


@dataclass
class Outcome:
    passed: bool
    payload: dict
    header: list
    rows: list


# --------------------------------------------------------------- commands


def _compute(body, cfg, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonConvergence)
        rep = compute_asa(body, cfg.p, cfg.resolution, cfg.seed)
    if not (rep.cm_converged and rep.lutwak_converged):
        raise NumericalFailure("optimizer did not converge within its iteration budget")
    passed = rep.max_pairwise_rel_gap <= tol["agreement"]
    rows = [[name, value] for name, value in rep.values.items()]
    rows.append(["max_pairwise_rel_gap", rep.max_pairwise_rel_gap])
    return Outcome(passed, rep.to_dict(), ["representation", "value"], rows), rep


def _verify(body, cfg, tol):
    rep = run_body_suite(body, "body", ps=(cfg.p,), resolution=cfg.resolution, seed=cfg.seed, tolerances=tol)
    header, rows = rep.tsv_rows()
    return Outcome(rep.all_passed, rep.to_dict(), header, rows)


def _coarea(body, cfg, tol):
    if isinstance(body, Polytope):
        raise InputError("coarea checks need a smooth body")
    cov = verify_change_of_variable(body, cfg.p, cfg.resolution, cfg.seed)
    sb = verify_sphere_boundary_equality(body, cfg.p, cfg.resolution, cfg.seed)
    t = tol["change_of_variable"]
    passed = cov.max_gap <= t and sb.rel_gap <= t and sb.monotone
    header = ["identity", "index", "lhs", "rhs", "rel_gap"]
    rows = [[c.identity, c.index, c.lhs, c.rhs, c.rel_gap] for c in cov.checks]
    rows.append(["sphere_boundary", 0, sb.sphere_value, sb.boundary_value, sb.rel_gap])
    payload = {"change_of_variable": cov.to_dict(), "sphere_boundary": sb.to_dict()}
    return Outcome(passed, payload, header, rows)


def sweep_ladder(n, base):
    """Resolutions at 1x, 2x, 4x linear refinement (node spacing halves each step)."""
    if n == 3:
        return [base, base + 1, base + 2]
    return [base, 2 * base, 4 * base]


def _sweep(body, cfg, tol):
    n = body.dim
    base = cfg.resolution if cfg.resolution is not None else (3 if n == 3 else max(1, default_resolution(n) // 4))
    ladder = sweep_ladder(n, base)
    reports = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonConvergence)
        for r in ladder:
            reports.append(compute_asa(body, cfg.p, r, cfg.seed))
    names = list(reports[0].values)
    rows, passed, cauchy = [], True, {}
    for name in names:
        v = [rep.values[name] for rep in reports]
        ok = abs(v[1] - v[2]) <= abs(v[0] - v[1]) + tol["sweep"] * max(1.0, abs(v[2]))
        cauchy[name] = ok
        passed = passed and (ok or isinstance(body, Polytope))
        rows.append([name, *v, ok])
    header = ["representation", *[f"res_{r}" for r in ladder], "cauchy"]
    payload = {
        "ladder": ladder,
        "values": {name: [rep.values[name] for rep in reports] for name in names},
        "cauchy": cauchy,
        "max_pairwise_rel_gap": [rep.max_pairwise_rel_gap for rep in reports],
    }
    return Outcome(passed, payload, header, rows)


def _demo_usc(body, cfg, tol):
    if isinstance(body, Polytope):
        raise InputError("demo-usc needs a smooth body")
    rep = demo_upper_semicontinuity(body, cfg.p, resolution=cfg.resolution, seed=cfg.seed)
    header = ["m", "d_m", "omega_P", "omega_K"]
    rows = [[m, d, w, rep.omega_K] for m, d, w in rep.rows]
    return Outcome(rep.passed, rep.to_dict(), header, rows)


HANDLERS = {"compute": _compute, "verify": _verify, "coarea": _coarea, "sweep": _sweep, "demo-usc": _demo_usc}


def render(cfg, outcome, body_hash, resolution):
    if cfg.format == "json":
        doc = {
            "schema": SCHEMA,
            "command": cfg.command,
            "body_sha256": body_hash,
            "p": cfg.p,
            "seed": cfg.seed,
            "resolution": resolution,
            "pass": outcome.passed,
            "report": outcome.payload,
        }
        return dumps(doc) + "\n"
    return table_text(outcome.header, outcome.rows, "," if cfg.format == "csv" else "\t")


def run(cfg, stdout=None, stderr=None):
    """Execute ``cfg``; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        body, _, body_hash = load_body(cfg.body_path)
        tol = dict(TOLERANCES, **cfg.tolerances)
        result = HANDLERS[cfg.command](body, cfg, tol)
    except InputError as exc:
        print(f"asa-kit: error: {exc}", file=stderr)
        return EXIT_INPUT
    except INPUT_ERRORS as exc:
        print(f"asa-kit: invalid input: {exc}", file=stderr)
        return EXIT_INPUT
    except NUMERIC_ERRORS as exc:
        print(f"asa-kit: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    outcome = result[0] if isinstance(result, tuple) else result
    resolution = cfg.resolution if cfg.resolution is not None else default_resolution(body.dim)
    text = render(cfg, outcome, body_hash, resolution)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if cfg.trace_path and isinstance(result, tuple) and isinstance(result[1], AsaReport):
        with open(cfg.trace_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(table_text(["iteration", "value"], result[1].optimizer_trace))
    return EXIT_OK if outcome.passed else EXIT_CHECK


def _tolerance(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=REAL, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"tolerance value is not a number: {value!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(prog="asa-kit", description="L_p affine surface area: compute and verify.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "compute": "all four representations of Omega_p",
        "verify": "property checks for one body",
        "coarea": "change-of-variable and sphere/boundary identities",
        "sweep": "values on a 1x/2x/4x resolution ladder",
        "demo-usc": "inscribed-polytope semicontinuity table (n = 3)",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--body", required=True, metavar="PATH", help="body spec JSON file")
        sp.add_argument("--p", type=float, default=1.0, metavar="REAL")
        sp.add_argument("--resolution", type=int, default=None, metavar="INT")
        sp.add_argument("--seed", type=int, default=0, metavar="INT")
        sp.add_argument("--out", default=None, metavar="PATH")
        sp.add_argument("--format", choices=FORMATS, default="json")
        sp.add_argument("--tolerance", type=_tolerance, action="append", default=[], metavar="NAME=REAL")
        if name == "compute":
            sp.add_argument("--trace", default=None, metavar="PATH", help="write the optimizer trace as CSV")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        body_path=args.body,
        p=args.p,
        resolution=args.resolution,
        seed=args.seed,
        tolerances=dict(args.tolerance),
        output_path=args.out,
        format=args.format,
        trace_path=getattr(args, "trace", None),
    )
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
