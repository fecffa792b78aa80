"""Command-line front end.

    l1gv curve --space std-simplex --rho 2 --bounds gv,gvmr,sp,cw --delta 0:2:0.01
    l1gv curve --preset fig3 -o fig3.csv
    l1gv validate --space std-simplex --n-max 8 --r 4
    l1gv critical --space hypercube --q 2 --delta 0.25

Exit codes: 0 success, 1 bad arguments, 2 numerical failure or oracle mismatch.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import acsv, bounds, config, oracle
from .bounds import BoundKind
from .spaces import Kind, SpaceFamily, direction, reduced_denominator

log = config.get_logger(__name__)

PRESETS = {
    "fig1": ["--space", "std-simplex", "--rho", "2", "--bounds", "gv,gvmr,sp,cw", "--delta", "0:2:0.01"],
    "fig2": ["--space", "pos-simplex", "--opt-rho", "--bounds", "gv,gvmr,kk", "--delta", "0:0.6:0.005"],
    "fig3": ["--space", "hypercube", "--q", "4", "--bounds", "gv,gvmr,lee", "--delta", "0:1.3:0.005"],
}

CSV_HEADER = ("space", "params", "bound", "delta", "rate", "aux")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    return format(float(x), ".17g")


def parse_grid(spec):
    try:
        parts = [float(v) for v in spec.split(":")]
    except ValueError:
        raise UsageError(f"bad grid {spec!r}, expected start:stop:step")
    if len(parts) == 1:
        return parts
    if len(parts) != 3:
        raise UsageError(f"bad grid {spec!r}, expected start:stop:step")
    start, stop, step = parts
    if not step > 0:
        raise UsageError("grid step must be positive")
    if stop < start:
        raise UsageError("grid stop must be >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def family_from_args(args):
    try:
        kind = Kind(args.space)
    except ValueError:
        raise UsageError(f"unknown space {args.space!r}; choose from {', '.join(k.value for k in Kind)}")
    try:
        if kind.is_hypercube:
            return SpaceFamily(kind, q=args.q, tau=args.tau)
        rho = args.rho
        if rho is None and not getattr(args, "opt_rho", False):
            raise UsageError(f"{kind.value} needs --rho")
        return SpaceFamily(kind, rho=rho, tau=args.tau)
    except (TypeError, ValueError) as err:
        raise UsageError(str(err))


def params_label(family, opt_rho=False):
    parts = []
    if opt_rho:
        parts.append("rho=opt")
    elif family.rho is not None and not family.kind.is_hypercube:
        parts.append(f"rho={family.rho!r}")
    if family.q is not None:
        parts.append(f"q={family.q}")
    if family.tau is not None:
        parts.append(f"tau={family.tau!r}")
    return ";".join(parts)


def parse_params(space, params):
    """Inverse of params_label: (family, opt_rho)."""
    kw, opt = {}, False
    for item in filter(None, params.split(";")):
        k, v = item.split("=", 1)
        if k == "rho" and v == "opt":
            opt = True
        elif k == "q":
            kw["q"] = int(v)
        else:
            kw[k] = float(v)
    return SpaceFamily(Kind(space), **kw), opt


def aux_string(aux):
    return ";".join(f"{k}={fmt(v)}" for k, v in aux.items())


# subcommands

def _add_family_flags(p):
    p.add_argument("--space", help="space family: " + ", ".join(k.value for k in Kind))
    p.add_argument("--rho", type=float)
    p.add_argument("--q", type=int)
    p.add_argument("--tau", type=float)


def build_parser():
    ap = _Parser(prog="l1gv", description="Rate bounds for L1-metric codes in simplices and hypercubes.")
    sub = ap.add_subparsers(dest="cmd")

    c = sub.add_parser("curve", help="rate curves as CSV")
    _add_family_flags(c)
    c.add_argument("--preset", choices=sorted(PRESETS))
    c.add_argument("--opt-rho", action="store_true", help="optimize rho (positive / inverted simplex)")
    c.add_argument("--bounds", default="gv")
    c.add_argument("--delta", help="grid start:stop:step (inclusive) or a single value")
    c.add_argument("-o", "--output", default="-")

    v = sub.add_parser("validate", help="brute force vs DP vs series coefficients")
    _add_family_flags(v)
    v.add_argument("--n-max", type=int, default=6)
    v.add_argument("--r", type=int)
    v.add_argument("--enum-cap", type=int, default=config.ENUM_CAP)
    v.add_argument("--dp-cap", type=int, default=config.DP_CAP)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("-o", "--output", default="-")

    k = sub.add_parser("critical", help="one critical point as JSON")
    _add_family_flags(k)
    k.add_argument("--delta", type=float, required=True)
    k.add_argument("--newton-tol", type=float, default=config.NEWTON_TOL)
    k.add_argument("-o", "--output", default="-")
    return ap


def _open(path):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def curve_rows(family, kinds, grid, opt_rho=False):
    rows, failures = [], 0
    for kind in kinds:
        if not opt_rho and not bounds.applicable(kind, family):
            raise UsageError(f"bound {kind.value} does not apply to {family.kind.value}")
        if opt_rho and kind not in (BoundKind.GV, BoundKind.GVMR, BoundKind.KolesnikKrachkovsky):
            raise UsageError(f"bound {kind.value} has no optimized-rho form")
        use_opt = opt_rho and kind is not BoundKind.KolesnikKrachkovsky
        curve = bounds.rate_curve(family, kind, grid, optimized_rho=use_opt)
        for d, reason in curve.gaps:
            log.warning("%s: no value at delta=%s (%s)", kind.value, fmt(d), reason)
        failures += len(curve.gaps)
        for d, rate, aux in curve.samples:
            rows.append((family.kind.value, params_label(family, opt_rho), kind.value, fmt(d), fmt(rate),
                         aux_string(aux)))
    return rows, failures


def cmd_curve(args):
    if args.preset:
        extra = build_parser().parse_args(["curve"] + PRESETS[args.preset])
        for key in ("space", "rho", "q", "tau", "opt_rho", "bounds", "delta"):
            setattr(args, key, getattr(extra, key))
    if not args.space or not args.delta:
        raise UsageError("curve needs --space and --delta (or --preset)")
    if args.opt_rho:
        if args.space not in (Kind.PosSimplex.value, Kind.InvSimplex.value):
            raise UsageError("--opt-rho applies to pos-simplex and inv-simplex")
        args.rho = None
    family = family_from_args(args)
    try:
        kinds = [BoundKind.parse(b) for b in args.bounds.split(",") if b.strip()]
    except ValueError as err:
        raise UsageError(str(err))
    if not kinds:
        raise UsageError("no bounds requested")
    grid = parse_grid(args.delta)
    rows, failures = curve_rows(family, kinds, grid, args.opt_rho)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    out = _open(args.output)
    try:
        out.write(buf.getvalue())
    finally:
        if out is not sys.stdout:
            out.close()
    if not rows:
        log.error("no curve point could be evaluated")
        return 2
    if failures:
        log.info("%d grid points without a value", failures)
    return 0


def _validate_report(kind, q, nmax, r, cap):
    rows = oracle.triple_table(kind, nmax, r=r, q=q, cap=cap)
    bad = [row for row in rows if not row.ok]
    extra = []
    if kind.is_hypercube:
        # completeness: summing over s (and both constrained counts) gives q^(2n)
        for n in range(nmax + 1):
            tot = sum(row.dp for row in rows if row.key[0] == n)
            extra.append({"check": "completeness", "n": n, "total": tot, "expected": q ** (2 * n),
                          "ok": tot == q ** (2 * n)})
    if kind is Kind.InvSimplex:
        # reported only: finite totals differ (even |inv| != |pos|), the exponents agree
        rs = range(nmax + 1) if r is None else [r]
        for rr in rs:
            for n in range(nmax + 1):
                d = n
                a = oracle.total_ball(SpaceFamily(Kind.InvSimplex, rho=0), n, d, r=rr)
                b = oracle.total_ball(SpaceFamily(Kind.PosSimplex, rho=0), n, d, r=rr)
                extra.append({"check": "inv-vs-pos total ball", "n": n, "r": rr, "d": d,
                              "inv": a, "pos": b, "equal": a == b})
    return rows, bad, extra


def cmd_validate(args):
    if not args.space:
        raise UsageError("validate needs --space")
    try:
        kind = Kind(args.space)
    except ValueError:
        raise UsageError(f"unknown space {args.space!r}")
    if args.n_max < 0 or args.enum_cap <= 0 or args.dp_cap <= 0:
        raise UsageError("caps must be positive")
    if args.n_max > args.dp_cap:
        raise UsageError(f"--n-max {args.n_max} exceeds the DP cap {args.dp_cap}")
    q = args.q
    if kind.is_hypercube and (q is None or q < 2):
        raise UsageError("hypercube families need --q >= 2")
    if not kind.is_hypercube:
        q = None
        if args.r is not None and args.r < 0:
            raise UsageError("--r must be nonnegative")
    try:
        rows, bad, extra = _validate_report(kind, q, args.n_max, args.r, args.enum_cap)
    except ValueError as err:
        raise UsageError(str(err))
    ok = not bad and all(e.get("ok", True) for e in extra)
    out = _open(args.output)
    try:
        if args.format == "json":
            json.dump({"space": kind.value, "q": q, "n_max": args.n_max, "rows": [
                {"key": list(row.key), "brute": row.brute, "dp": row.dp, "series": row.series, "ok": row.ok}
                for row in rows], "checks": extra, "mismatches": len(bad), "ok": ok}, out, indent=1)
            out.write("\n")
        else:
            keyname = "n,s,p1,p2" if kind.is_hypercube else "n1,n2,r,s,p1,p2"
            if not kind.constrained:
                keyname = keyname.replace(",p1,p2", "")
            out.write(f"# {kind.value}" + (f" q={q}" if q else "") + f" n<={args.n_max}\n")
            out.write(f"{keyname}\tbrute\tdp\tseries\tstatus\n")
            for row in rows:
                # one line per (n, s): the diagonal n1 = n2
                if not kind.is_hypercube and row.key[0] != row.key[1] and row.ok:
                    continue
                cells = ["-" if v is None else str(v) for v in (row.brute, row.dp, row.series)]
                out.write(",".join(map(str, row.key)) + "\t" + "\t".join(cells)
                          + ("\tok\n" if row.ok else "\tMISMATCH\n"))
            for e in extra:
                out.write("# " + " ".join(f"{k}={v}" for k, v in e.items()) + "\n")
            out.write(f"summary: {len(rows)} entries, {len(bad)} mismatches, max n validated {args.n_max}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if ok else 2


def cmd_critical(args):
    if not args.space:
        raise UsageError("critical needs --space")
    family = family_from_args(args)
    if family.kind.constrained and family.tau is None:
        raise UsageError(f"{family.kind.value} needs --tau")
    if family.kind.is_hypercube:
        names = ("x", "y", "w")
    else:
        names = ("x", "y", "z", "w")
    d = args.delta
    base = {"space": family.kind.value, "params": params_label(family), "delta": d}
    try:
        closed = bounds.critical_point(family, d)
    except ValueError as err:
        raise UsageError(str(err))
    except acsv.NumericalFailure as err:
        log.error("closed form failed: %s", err)
        closed = None
        if d == 0 or d >= bounds.delta_max(family):
            return 2
    if closed is None and (d == 0 or d >= bounds.delta_max(family) - 1e-13):
        rate = bounds.ball_exponent(family, d)
        res = dict(base, point=None, rate=rate, residual_H=None, residual_prop=None,
                   source="closed_form", branch="capacity" if d == 0 else "plateau")
    else:
        H = reduced_denominator(family.kind, family.q)
        prob = acsv.CriticalProblem(H, direction(family, d))
        try:
            sol = acsv.solve_critical_point(prob, initial=closed, tol=args.newton_tol)
        except acsv.NumericalFailure as err:
            log.error("%s", err)
            return 2
        if closed is not None:
            agree = max(abs(a - b) for a, b in zip(closed, sol.point))
            point, rate = closed, bounds.exponent_at(closed, family, d)
            src = "closed_form"
            check = acsv.residuals(H, closed, prob.direction)
            rh, rp = check.residual_H, check.residual_prop
        else:
            agree, point, rate, src = None, sol.point, sol.rate, "newton"
            rh, rp = sol.residual_H, sol.residual_prop
        res = dict(base, point=dict(zip(names, point)), rate=rate, residual_H=rh, residual_prop=rp,
                   source=src, agreement=agree, newton_point=dict(zip(names, sol.point)))
    out = _open(args.output)
    try:
        json.dump(res, out, indent=1)
        out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd is None:
            raise UsageError("missing subcommand (curve, validate, critical)")
        return {"curve": cmd_curve, "validate": cmd_validate, "critical": cmd_critical}[args.cmd](args)
    except UsageError as err:
        sys.stderr.write(f"l1gv: error: {err}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
