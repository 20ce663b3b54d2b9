"""Command-line front end.

Exit codes: 0 pass or non-result, 1 a FALSIFIED verdict, 2 usage, parse or
precondition error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .curves import hermitian_family
from .errors import FFCurvesError
from .experiments import (
    FALSIFIED,
    fnc_report,
    plane_filling_search,
    random_smooth_curve,
    svb_check,
    verify_bertini_nonreflexive,
    verify_bertini_reflexive,
)
from .gf import field_create
from .incidence import (
    N_READING,
    collinear_rational_max,
    find_good_line,
    frobenius_incidence,
    incidence_sum,
    tangent_census,
)
from .io import emit_report, fixture_names, load_fixture, make_report, read_curve

COMMANDS = (
    "analyze", "census", "good-line", "frobenius", "verify-reflexive",
    "verify-nonreflexive", "fnc-report", "svb-check", "search-plane-filling",
)
CURVE_COMMANDS = {"analyze", "census", "good-line", "frobenius", "fnc-report", "svb-check"}


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser():
    ap = argparse.ArgumentParser(prog="ffcurves", description="Plane curves over finite fields.")
    ap.add_argument("--version", action="version", version=f"ffcurves {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv", "md"), default="json")
        sp.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-determinism)")

    def curve_source(sp):
        g = sp.add_argument_group("curve source (exactly one)")
        g.add_argument("--curve", help="curve spec file")
        g.add_argument("--fixture", help=f"named fixture ({', '.join(fixture_names())})")
        g.add_argument("--hermitian", nargs=2, type=int, metavar=("Q0", "N"))
        g.add_argument("--pardini", type=int, metavar="T", help="random smooth Pardini curve (with --p, --r, --seed)")
        sp.add_argument("--p", type=int)
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)

    helps = {
        "analyze": "smoothness, reflexivity, FNC, dual degree, flexes, point count",
        "census": "classify every rational line",
        "good-line": "first transverse line",
        "frobenius": "intersection divisor with the Frobenius form",
        "fnc-report": "checks for Frobenius non-classical curves",
        "svb-check": "2#C + N <= d(q+d-1)",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        curve_source(sp)
        common(sp)

    sp = sub.add_parser("verify-reflexive", help="good lines and (*) on random reflexive curves")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--degrees", type=_int_list, required=True)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=int, help="rejection-sampling tries per curve")
    common(sp)

    sp = sub.add_parser("verify-nonreflexive", help="good lines on random Pardini curves")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--budget", type=int)
    common(sp)

    sp = sub.add_parser("search-plane-filling", help="budgeted search for plane-filling curves of degree q+2")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--budget", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--curve", help="also check this curve spec file")
    sp.add_argument("--fixture", help="also check this fixture")
    common(sp)
    return ap


def _curve_from_args(args):
    chosen = [k for k in ("curve", "fixture", "hermitian", "pardini") if getattr(args, k) is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --curve, --fixture, --hermitian, --pardini")
    if args.curve is not None:
        return read_curve(args.curve)
    if args.fixture is not None:
        try:
            return load_fixture(args.fixture)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
    if args.hermitian is not None:
        return hermitian_family(*args.hermitian)
    if args.p is None:
        raise UsageError("--pardini needs --p (and --r)")
    ctx = field_create(args.p, args.r)
    C = random_smooth_curve(ctx, None, ("pardini", args.pardini), args.seed)
    C.name = f"pardini-t{args.pardini}-seed{args.seed}"
    return C


def _curve_info(C):
    rec = {"p": C.ctx.p, "r": C.ctx.m, "d": C.d, "F": C.F.to_text()}
    if C.name:
        rec["name"] = C.name
    return rec


def _census_dict(census):
    return {
        "T": census.T,
        "R": census.R,
        "S": census.S,
        "lines_total": census.lines_total,
        "histograms": census.histograms,
        "good_line": None if census.good_line is None else census.good_line.text(),
    }


def run_analyze(C):
    sm = C.smoothness()
    out = {"curve": _curve_info(C), "smooth": sm.smooth,
           "singular_witness": None if sm.witness is None else sm.witness.text()}
    out["points"] = C.count_points(1)
    out["plane_filling"] = C.is_plane_filling()
    if sm.smooth:
        out["reflexive"] = C.is_reflexive()
        out["frobenius_nonclassical"] = C.is_frobenius_nonclassical()
        if C.d >= 2:
            out["generic_contact_order"] = C.generic_contact_order()
            out["contact_samples"] = {str(e): ms for e, ms in C.contact_samples().items()}
            out["dual_degree"] = C.dual_degree()
        if out["reflexive"]:
            out["rational_flexes"] = [P.text() for P in C.rational_flexes()]
    return out, False


def run_census(C):
    census = tangent_census(C)
    cmax, witness = collinear_rational_max(C, census)
    n = C.count_points(1)
    out = {
        "curve": _curve_info(C),
        "points": n,
        "census": _census_dict(census),
        "collinear_max": {"count": cmax, "line": witness.text()},
        "incidence_identity": {"sum_over_lines": incidence_sum(C, census), "points_times_q_plus_1": n * (C.q + 1)},
        "lines": [r.as_dict() for r in census.records],
    }
    return out, False


def run_good_line(C):
    L = find_good_line(C)
    return {"curve": _curve_info(C), "good_line": None if L is None else L.text(),
            "equation": None if L is None else L.equation()}, False


def run_frobenius(C):
    prof = frobenius_incidence(C)
    F = C.ctx
    out = {
        "curve": _curve_info(C),
        "divisor": {
            "entries": [list(e) for e in prof.entries],
            "total_degree": prof.total_degree,
            "expected_degree": prof.expected_degree,
            "rational_points": [
                {"point": "[" + ":".join(F.format_element(c) for c in P) + "]", "multiplicity": m}
                for P, m in prof.rational_points
            ],
            "center": "[" + ":".join(F.format_element(c) for c in prof.center) + "]",
        },
        "N": prof.N,
        "n_reading": N_READING,
    }
    ok = prof.total_degree == prof.expected_degree and prof.rational_mult_ok
    return out, not ok


def _experiment(result, timing):
    return result.to_dict(timing=timing), bool(result.falsified)


def dispatch(command, args):
    """Run one command; returns (report, exit code)."""
    timing = getattr(args, "timing", False)
    start = time.perf_counter()
    ctx = None
    if command in CURVE_COMMANDS:
        C = _curve_from_args(args)
        ctx = C.ctx
        if command == "analyze":
            result, bad = run_analyze(C)
        elif command == "census":
            result, bad = run_census(C)
        elif command == "good-line":
            result, bad = run_good_line(C)
        elif command == "frobenius":
            result, bad = run_frobenius(C)
        elif command == "fnc-report":
            result, bad = _experiment(fnc_report(C), False)
        else:
            result, bad = _experiment(svb_check(C), False)
    elif command == "verify-reflexive":
        ctx = field_create(args.p, args.r)
        res = verify_bertini_reflexive(ctx, args.degrees, args.samples, args.seed, args.budget)
        result, bad = _experiment(res, False)
    elif command == "verify-nonreflexive":
        ctx = field_create(args.p, args.r)
        res = verify_bertini_nonreflexive(args.p, args.r, args.t, args.samples, args.seed, args.budget)
        result, bad = _experiment(res, False)
    elif command == "search-plane-filling":
        ctx = field_create(args.p, args.r)
        extra = []
        if args.curve:
            extra.append(read_curve(args.curve))
        if args.fixture:
            extra.append(load_fixture(args.fixture))
        res = plane_filling_search(ctx, args.budget, args.seed, extra)
        result, bad = _experiment(res, False)
    else:
        raise UsageError(f"unknown command {command!r}")
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("command", "out", "format", "timing") and v is not None}
    report = make_report(command, echo, ctx, result, __version__)
    report["status"] = FALSIFIED if bad else "ok"
    if timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 3)
    return report, (1 if bad else 0)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        report, code = dispatch(args.command, args)
    except UsageError as exc:
        print(f"ffcurves: error: {exc}", file=sys.stderr)
        return 2
    except (FFCurvesError, ValueError, OSError) as exc:
        print(f"ffcurves: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = emit_report(report, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
