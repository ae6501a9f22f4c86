"""Command-line front end: ``hlslab constant | verify | extremal | sweep``.

Every run produces one report (JSON by default, or CSV) that embeds the
command, seed, quadrature level and package version.  Exit codes: 0 success,
1 a verification check failed, 2 invalid input, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .checks import (
    conformal_sampling,
    default_young_exponents,
    inequality_sampling,
    k2_identity_sampling,
    kernel_positivity,
    young_sampling,
)
from .constants import (
    ExtremalParams,
    c_e1,
    c_e2,
    el_residual,
    extremal_family,
    subcritical_constant,
    transport_boundary_function,
    xi_alpha,
)
from .errors import ExponentError, HLSError, NoConvergence
from .exponents import Exponents, make_exponents, validate_exponents
from .kernels import Kind
from .regression import lookup
from .solver import SolveConfig, solve_subcritical, sweep_to_critical

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NOCONV = 0, 1, 2, 3
SWEEP_COLUMNS = ("p", "t", "xi", "level")
DEFAULT_SEED = 0


class UsageError(Exception):
    """Bad combination of command-line arguments."""


def _number(value, error=None, tag=None) -> dict:
    out = {"value": float(value)}
    if error is not None:
        out["error_estimate"] = float(error)
    if tag is not None:
        out["tag"] = tag
    return out


def _point(text: str, dim: int) -> tuple:
    vals = [float(v) for v in text.split(",") if v.strip()]
    if len(vals) > dim:
        raise UsageError(f"expected at most {dim} coordinates, got {text!r}")
    return tuple(vals + [0.0] * (dim - len(vals)))


def _exponents(args, kind, need_pt: bool) -> Exponents:
    if need_pt and (args.p is None or args.t is None):
        raise UsageError("--p and --t are required for this command")
    e = make_exponents(args.n, args.alpha, kind, args.p, args.t)
    report = validate_exponents(e)
    if not report.ok:
        raise ExponentError("; ".join(report.violations))
    return e


# commands ---------------------------------------------------------------------

def cmd_constant(args) -> dict:
    kind = args.kind
    if kind == "xi":
        e = _exponents(args, Kind.REVERSED, need_pt=True)
        res = xi_alpha(e, max_level=args.level)
    elif kind == "ce1":
        res = c_e1(args.n, args.alpha, max_level=args.level)
    else:
        res = c_e2(args.n, args.alpha, max_level=args.level)
    values = {kind: _number(res.value, res.error_estimate)}
    checks = []
    frozen = lookup(kind, args.n, args.alpha, args.p if kind == "xi" else None,
                    args.t if kind == "xi" else None)
    if frozen is not None:
        values["regression"] = _number(frozen, tag="regression")
        rel = abs(res.value - frozen) / abs(frozen)
        checks.append(dict(name="matches regression value", passed=rel <= 1e-6, value=rel, bound=1e-6))
    return dict(values=values, checks=checks, level=res.quadrature_level,
                exponents=dict(p=res.exponents.p, t=res.exponents.t))


_SUMMARY_TAGS = {"p": "input", "t": "input", "constant": "radial-reduction"}


def _suite_report(suite, detail_limit: int = 20) -> dict:
    failures = suite.failures
    return dict(
        values={k: (v if isinstance(v, dict) else _number(v, tag=_SUMMARY_TAGS.get(k, "sampled")))
                for k, v in suite.summary.items() if isinstance(v, (int, float, dict))},
        checks=[dict(name=f"{suite.suite}: all {len(suite.checks)} checks", passed=suite.passed,
                     value=len(failures), bound=0)],
        failures=[dict(name=c.name, value=c.value, bound=c.bound, detail=c.detail) for c in failures[:detail_limit]],
    )


def cmd_verify(args) -> dict:
    suite = args.suite
    if suite == "reversed-inequality":
        res = inequality_sampling(args.n, args.alpha, Kind.REVERSED, args.samples, args.seed, args.level)
    elif suite == "poisson-inequality":
        res = inequality_sampling(args.n, args.alpha, Kind.POISSON, args.samples, args.seed, args.level)
    elif suite == "k2-identity":
        res = k2_identity_sampling(args.samples, args.n, args.alpha, args.seed)
    elif suite == "young":
        kind = Kind(args.regime)
        if args.p is None and args.t is None:
            e = default_young_exponents(args.n, args.alpha, kind)
        else:
            e = _exponents(args, kind, need_pt=True)
        if e.is_critical:
            raise ExponentError("the Young chains need subcritical exponents")
        res = young_sampling(e, args.samples, args.seed, args.level)
    elif suite == "conformal":
        e = Exponents.critical(args.n, args.alpha, Kind(args.regime))
        res = conformal_sampling(e, args.samples, args.seed, half_level=args.half_level)
    elif suite == "kernel-positivity":
        res = kernel_positivity(_point(args.y0, args.n - 1), args.lam, args.samples, args.alpha, args.n, args.seed)
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown suite {suite!r}")
    out = _suite_report(res)
    out["level"] = args.level
    return out


def cmd_extremal(args) -> dict:
    if args.action == "solve":
        e = _exponents(args, Kind(args.regime), need_pt=True)
        if e.is_critical:
            raise ExponentError("extremal solve needs subcritical exponents")
        cfg = SolveConfig(damping=args.damping, tol=args.tol, max_iters=args.max_iters,
                          init=args.init, seed=args.seed, b2_cap=args.b2_cap)
        res = solve_subcritical(e, cfg, level=args.level)
        ref = subcritical_constant(e).value
        rel = abs(res.xi_estimate - ref) / ref
        values = dict(
            xi_estimate=_number(res.xi_estimate, abs(res.xi_estimate - ref)),
            el_residual=_number(res.el_residual, tag="residual"),
            constancy_deviation=_number(res.constancy_deviation, tag="residual"),
            symmetry_deficit=_number(res.symmetry_deficit, tag="residual"),
            l2_value=_number(res.l2_value, tag="quadrature"),
            iterations=res.iterations,
            b2_bounds={k: _number(v, tag="closed-form") for k, v in res.b2_bounds.items()},
        )
        checks = [
            dict(name="converged to a constant", passed=res.constancy_deviation <= args.threshold,
                 value=res.constancy_deviation, bound=args.threshold),
            dict(name="xi matches the radial constant", passed=rel <= args.threshold, value=rel,
                 bound=args.threshold),
        ]
        if res.b2_violation is not None:
            values["b2_violation"] = res.b2_violation
        return dict(values=values, checks=checks, level=args.level)
    kind = Kind(args.family)
    e = Exponents.critical(args.n, args.alpha, kind)
    params = ExtremalParams(args.c, _point(args.y0, args.n - 1), args.d)
    f = transport_boundary_function(extremal_family(e, params), e, args.level)
    res, mu = el_residual(f, e)
    checks = [dict(name="Euler-Lagrange residual", passed=res <= args.threshold, value=res, bound=args.threshold)]
    return dict(values=dict(residual=_number(res, tag="residual"), multiplier=_number(mu, tag="fitted")),
                checks=checks, level=args.level)


def cmd_sweep(args) -> dict:
    res = sweep_to_critical(args.n, args.alpha, Kind(args.regime), args.steps)
    records = [dict(p=r.p, t=r.t, xi=r.xi, level=r.level) for r in res.records]
    e = Exponents.critical(args.n, args.alpha, Kind(args.regime))
    return dict(
        values=dict(
            limit=_number(res.limit, res.limit_error_estimate),
            critical=_number(res.critical.value, res.critical.error_estimate),
            gap=_number(res.gap, res.limit_error_estimate + res.critical.error_estimate),
            first_k=res.first_k,
        ),
        checks=[dict(name="limit matches the critical constant", passed=res.gap <= args.threshold,
                     value=res.gap, bound=args.threshold)],
        records=records,
        critical_exponents=dict(p=e.p, t=e.t),
        level=max(r.level for r in res.records),
    )


# output -----------------------------------------------------------------------

def sweep_csv(report: dict) -> str:
    """Sweep records as CSV with columns ``p,t,xi,level``.

    Three summary rows follow the records, all at the critical exponents;
    their ``level`` field is a tag: ``extrapolated`` (xi = extrapolated
    limit), ``critical`` (xi = sharp constant) and ``gap`` (xi = absolute
    difference of the two).
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in report["records"]:
        w.writerow([repr(r["p"]), repr(r["t"]), repr(r["xi"]), r["level"]])
    ce = report["critical_exponents"]
    v = report["values"]
    for tag, key in (("extrapolated", "limit"), ("critical", "critical"), ("gap", "gap")):
        w.writerow([repr(ce["p"]), repr(ce["t"]), repr(v[key]["value"]), tag])
    return buf.getvalue()


def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def report_csv(report: dict) -> str:
    """Generic ``key,value`` CSV of a report (sweeps use :func:`sweep_csv`)."""
    if report.get("command") == "sweep":
        return sweep_csv(report)
    rows: list = []
    _flatten("", report, rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    w.writerows(rows)
    return buf.getvalue()


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _clean(obj):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return report_csv(report)
    return json.dumps(_clean(report), indent=2, default=_json_default) + "\n"


# parser -----------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, level: int, alpha_required: bool = True):
    p.add_argument("--n", type=int, default=3, help="dimension")
    p.add_argument("--alpha", type=float, default=None, required=alpha_required, help="order alpha")
    p.add_argument("--p", type=float, default=None, help="boundary exponent")
    p.add_argument("--t", type=float, default=None, help="bulk exponent")
    p.add_argument("--level", type=int, default=level, help="quadrature level")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed")
    p.add_argument("--out", default=None, help="write the report to this path")
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="report format (default: from --out suffix, else json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlslab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constant", help="sharp and subcritical constants")
    p.add_argument("kind", choices=("xi", "ce1", "ce2"))
    _common(p, level=8)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="randomised verification suites")
    p.add_argument("suite", choices=("reversed-inequality", "poisson-inequality", "k2-identity", "young",
                                     "conformal", "kernel-positivity"))
    _common(p, level=4, alpha_required=False)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--regime", choices=("reversed", "poisson"), default="reversed")
    p.add_argument("--y0", default="0", help="centre of the moving sphere, comma separated")
    p.add_argument("--lam", type=float, default=1.0, help="radius of the moving sphere")
    p.add_argument("--half-level", type=int, default=None,
                   help="direct half-space quadrature level for 'conformal' (default 3 reversed, 5 Poisson)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extremal", help="extremal functions and Euler-Lagrange residuals")
    p.add_argument("action", choices=("solve", "residual"))
    _common(p, level=6)
    p.add_argument("--regime", choices=("reversed", "poisson"), default="reversed")
    p.add_argument("--family", choices=("reversed", "poisson"), default="reversed")
    p.add_argument("--init", choices=("constant", "random"), default="constant")
    p.add_argument("--damping", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-11)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--b2-cap", type=float, default=None)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--y0", default="0")
    p.add_argument("--threshold", type=float, default=None,
                   help="pass bound (default 1e-6 for solve, 1e-4 for residual)")
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("sweep", help="subcritical sweep towards the critical exponents")
    _common(p, level=0)
    p.add_argument("--regime", choices=("reversed", "poisson"), default="reversed")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--threshold", type=float, default=1e-4)
    p.set_defaults(func=cmd_sweep)
    return parser


_VERIFY_DEFAULTS = {
    "reversed-inequality": dict(alpha=4.0, samples=1000),
    "poisson-inequality": dict(alpha=2.0, samples=1000),
    "k2-identity": dict(alpha=2.0, samples=100),
    "young": dict(alpha=None, samples=50),
    "conformal": dict(alpha=None, samples=10),
    "kernel-positivity": dict(alpha=2.0, samples=10_000),
}


def _fill_defaults(args):
    if args.command == "verify":
        d = _VERIFY_DEFAULTS[args.suite]
        if args.samples is None:
            args.samples = d["samples"]
        if args.alpha is None:
            args.alpha = d["alpha"] if d["alpha"] is not None else (4.0 if args.regime == "reversed" else 2.0)
        if args.samples < 1:
            raise UsageError("--samples must be positive")
    if args.command == "extremal" and args.threshold is None:
        args.threshold = 1e-6 if args.action == "solve" else 1e-4
    if args.command != "sweep" and args.level < 1:
        raise UsageError("--level must be a positive integer")
    if args.format is None:
        args.format = "csv" if (args.out or "").lower().endswith(".csv") else "json"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        _fill_defaults(args)
        body = args.func(args)
    except (UsageError, ExponentError, ValueError) as exc:
        print(f"hlslab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoConvergence as exc:
        print(f"hlslab: no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except HLSError as exc:
        print(f"hlslab: numerical error: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    config = {k: v for k, v in vars(args).items() if k not in ("func",)}
    report = dict(
        command=args.command,
        config=config,
        version=__version__,
        seed=args.seed,
        level=body.pop("level", args.level),
        wall_time_s=time.perf_counter() - start,
        **body,
    )
    report["passed"] = all(c["passed"] for c in report.get("checks", []))
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        summary = {k: report[k] for k in ("command", "passed", "level", "seed")}
        summary["values"] = report.get("values", {})
        print(json.dumps(_clean(summary), indent=2, default=_json_default))
    else:
        sys.stdout.write(text)
    for c in report.get("checks", []):
        if not c["passed"]:
            print(f"hlslab: check failed: {c['name']} (value {c['value']!r}, bound {c['bound']!r})",
                  file=sys.stderr)
    return EXIT_OK if report["passed"] else EXIT_CHECK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
