"""Command-line front end.

Every subcommand prints one record, JSON (default) or CSV, on stdout:

    {"command": ..., "diagnostics": {...}, "inputs": {...}, "results": {...}, "version": ...}

Exit status: 0 success, 1 bad arguments, 2 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .constants import c1, c2, make_exponents, omega
from .exceptions import ConsistencyError, ConvergenceError, DomainError, QuadratureError
from .manifolds import make_model, volume_monotonicity_report
from .profiles import NORM_QUADRATURE, make_profile, norms_report
from .rearrangement import rearrange
from .specfun import QuadratureSpec, quadrature_stats
from .variational import sharpness_scan, volume_bound_diagnostics

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- designations


def parse_model(text):
    """``euclidean:<n>``, ``hyperbolic:<n>:<kappa>`` or ``sphere:<n>:<kappa>``."""
    parts = text.split(":")
    try:
        if parts[0] == "euclidean" and len(parts) == 2:
            return make_model("euclidean", int(parts[1]))
        if parts[0] in ("hyperbolic", "sphere") and len(parts) == 3:
            return make_model(parts[0], int(parts[1]), kappa=float(parts[2]))
    except ValueError as exc:
        raise DomainError(f"bad model designation {text!r}: {exc}") from None
    raise DomainError(f"bad model designation {text!r}")


def parse_profile(text, e, lam, model):
    """``power``, ``talenti``, ``linear:<k0>,<v0>;<k1>,<v1>;...`` or ``constant:<level>``."""
    kind, _, rest = text.partition(":")
    if kind in ("power", "talenti") and not rest:
        return make_profile(kind, e, lam, model=model)
    if kind == "linear" and rest:
        try:
            pairs = [tuple(float(x) for x in item.split(",")) for item in rest.split(";")]
        except ValueError:
            raise DomainError(f"bad linear profile {text!r}") from None
        if any(len(pair) != 2 for pair in pairs):
            raise DomainError(f"bad linear profile {text!r}")
        knots, values = zip(*pairs)
        return make_profile("linear", e, lam, knots=knots, values=values, model=model)
    if kind == "constant" and rest:
        try:
            level = float(rest)
        except ValueError:
            raise DomainError(f"bad constant level in {text!r}") from None
        return make_profile("constant", e, model=model, level=level)
    raise DomainError(f"bad profile designation {text!r}")


def parse_grid(text):
    """``a:b:k`` -> k points from a to b, geometric when a > 0 and linear otherwise."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like a:b:k, got {text!r}")
    try:
        a, b, k = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"bad grid {text!r}") from None
    if k < 1 or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"bad grid {text!r}")
    if k == 1:
        return [a]
    if not b > a:
        raise DomainError(f"grid end must exceed start in {text!r}")
    if a > 0.0:
        pts = [a * (b / a) ** (i / (k - 1)) for i in range(k)]
    else:
        pts = [a + (b - a) * i / (k - 1) for i in range(k)]
    pts[0], pts[-1] = a, b
    return pts


# ---------------------------------------------------------------- serialisation


def _num(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def to_json(obj, indent=0):
    """Deterministic JSON: keys sorted, floats with 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (bool, int, float)):
        return _num(obj)
    return json.dumps(str(obj))


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _num(x).strip('"')
    return str(x)


def to_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[h]) for h in header])
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _quad(args):
    return QuadratureSpec(
        abs_tol=args.abs_tol, rel_tol=args.rel_tol, max_refinements=args.max_refinements
    )


def _setup(args, need_model=True):
    e = make_exponents(args.n, args.p)
    m = parse_model(args.model) if need_model else None
    if m is not None and m.n != e.n:
        raise DomainError(f"--n {e.n} does not match model dimension {m.n}")
    return e, m


def cmd_constants(args):
    e = make_exponents(args.n, args.p)
    res = {"c1": c1(e), "c2": c2(e), "eta": e.eta, "omega_n": omega(e.n), "p_conj": e.p_conj}
    header = ["c1", "c2", "eta", "omega_n", "p_conj"]
    return res, (header, [res]), {}


def cmd_quotient(args):
    e, m = _setup(args)
    u = parse_profile(args.profile, e, args.lam, m)
    rep = norms_report(u, m, e, _quad(args))
    res = rep.as_dict()
    res["quotient"] = getattr(rep, args.which)
    res["sharp_reference"] = 1.0 / (c1(e) if args.which == "q1" else c2(e))
    res["profile"] = u.describe()
    header = ["grad_lp_norm", "l1_norm", "q1", "q2", "quotient", "sharp_reference",
              "sup_norm", "support_measure"]
    return res, (header, [res]), {}


def cmd_scan(args):
    e, m = _setup(args)
    lams = parse_grid(args.lambda_grid)
    scan = sharpness_scan(m, e, lams, args.which, _quad(args))
    if scan.errors:
        first = next(iter(scan.errors.values()))
        raise QuadratureError(f"{len(scan.errors)} grid point(s) failed: {first}")
    rows = [{"lambda": lam, "q": q, "margin": q - scan.sharp_reference}
            for lam, q in zip(scan.lambdas, scan.q_values)]
    res = {
        "asymptotic_volume_ratio_estimate": scan.asymptotic_volume_ratio,
        "attainment": scan.attainment.value,
        "certified_minimum": scan.certified,
        "limit_estimate": scan.limit_estimate,
        "points": rows,
        "sharp_reference": scan.sharp_reference,
        "which": scan.which,
    }
    return res, (["lambda", "q", "margin"], rows), {"grid_points": len(lams)}


def cmd_rearrange(args):
    e, m = _setup(args)
    u = parse_profile(args.profile, e, args.lam, m)
    r = rearrange(u, m, e, _quad(args))
    before, after = r.report_before.as_dict(), r.report_after.as_dict()
    delta = {k: before[k] - after[k] for k in before}
    res = {
        "after": after,
        "before": before,
        "delta": delta,
        "star_support_radius": r.star_profile.lam,
        "support_radius": u.lam,
    }
    header = ["stage", "grad_lp_norm", "l1_norm", "q1", "q2", "sup_norm", "support_measure"]
    rows = [dict(before, stage="model"), dict(after, stage="rearranged"), dict(delta, stage="delta")]
    return res, (header, rows), {}


def cmd_volumes(args):
    m = parse_model(args.model)
    grid = parse_grid(args.rho_grid)
    rep = volume_monotonicity_report(m, grid)
    rows = [{"rho": r, "volume": v, "ratio": q} for r, v, q in zip(rep.radii, rep.volumes, rep.ratios)]
    res = {
        "comparison_holds": rep.comparison_holds,
        "curvature_class": m.curvature_class.value,
        "max_decrease": rep.max_decrease,
        "max_increase": rep.max_increase,
        "nondecreasing": rep.nondecreasing,
        "nonincreasing": rep.nonincreasing,
        "rows": rows,
        "small_radius_ratio": rep.small_radius_ratio,
    }
    return res, (["rho", "volume", "ratio"], rows), {}


def cmd_diagnose(args):
    e, m = _setup(args)
    if args.rho_grid is None:
        top = min(3.0, 0.99 * m.r_max)
        grid = parse_grid(f"0.1:{top!r}:30")
    else:
        grid = parse_grid(args.rho_grid)
    rep = volume_bound_diagnostics(m, e, args.C, args.which, grid, args.lam, _quad(args))
    rows = [{"quantity": "margin", "abscissa": r, "value": v} for r, v in zip(rep.radii, rep.margins)]
    rows += [{"quantity": "gap_integral", "abscissa": lam, "value": g}
             for lam, g in zip(rep.lambdas, rep.gap_integrals)]
    res = {
        "factor": rep.factor,
        "large_volume_balls": rep.large_volume_balls,
        "rows": rows,
        "worst_margin": rep.worst_margin,
        "worst_radius": rep.worst_radius,
    }
    return res, (["quantity", "abscissa", "value"], rows), {}


COMMANDS = {
    "constants": cmd_constants,
    "quotient": cmd_quotient,
    "scan": cmd_scan,
    "rearrange": cmd_rearrange,
    "volumes": cmd_volumes,
    "diagnose": cmd_diagnose,
}


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--rel-tol", type=float, default=NORM_QUADRATURE.rel_tol)
    common.add_argument("--abs-tol", type=float, default=NORM_QUADRATURE.abs_tol)
    common.add_argument("--max-refinements", type=int, default=NORM_QUADRATURE.max_refinements)

    parser = _Parser(prog="morrey-sobolev", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def np_args(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--p", type=float, required=True)

    sp = sub.add_parser("constants", parents=[common], help="sharp constants and exponents")
    np_args(sp)

    sp = sub.add_parser("quotient", parents=[common], help="norms and quotients of one profile")
    sp.add_argument("--model", required=True)
    sp.add_argument("--profile", required=True)
    np_args(sp)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--which", choices=("q1", "q2"), default="q1")

    sp = sub.add_parser("scan", parents=[common], help="minimal quotients over a lambda grid")
    sp.add_argument("--model", required=True)
    np_args(sp)
    sp.add_argument("--lambda-grid", required=True)
    sp.add_argument("--which", choices=("q1", "q2"), default="q1")

    sp = sub.add_parser("rearrange", parents=[common], help="Euclidean rearrangement of a profile")
    sp.add_argument("--model", required=True)
    sp.add_argument("--profile", required=True)
    np_args(sp)
    sp.add_argument("--lambda", dest="lam", type=float)

    sp = sub.add_parser("volumes", parents=[common], help="geodesic ball volume ratios")
    sp.add_argument("--model", required=True)
    sp.add_argument("--rho-grid", required=True)

    sp = sub.add_parser("diagnose", parents=[common], help="large-volume-balls diagnostics")
    sp.add_argument("--model", required=True)
    np_args(sp)
    sp.add_argument("--C", type=float, required=True)
    sp.add_argument("--which", choices=("ms1", "ms2"), required=True)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--rho-grid")
    return parser


def _inputs(args):
    skip = {"command"}
    out = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        out["lambda" if key == "lam" else key] = value
    return out


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, run the subcommand and write the record; return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        with quadrature_stats() as stats:
            results, table, extra = COMMANDS[args.command](args)
    except DomainError as exc:
        print(f"morrey-sobolev {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (QuadratureError, ConvergenceError, ConsistencyError, ArithmeticError) as exc:
        print(f"morrey-sobolev {args.command}: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL
    if args.format == "csv":
        stdout.write(to_csv(*table))
    else:
        record = {
            "command": args.command,
            "diagnostics": dict(stats.as_dict(), **extra),
            "inputs": _inputs(args),
            "results": results,
            "version": __version__,
        }
        stdout.write(to_json(record) + "\n")
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
