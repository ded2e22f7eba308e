"""Command-line front end.

Subcommands
-----------
correlator   C+, C-, W for point pairs on the time machine
limit-scan   weak-warp deviations from the Einstein cylinder over a delta grid
rset         stress-tensor components at a point
verify       module invariant suites, JSON report

Exit status is 0 on success, 1 on a numerical failure (a diagnostic row is
still written) and 2 on invalid input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .correlators import hadamard_closed, hadamard_series, limit_deviation, pj_closed, pj_series
from .cylinder_qft import CorrelatorValue
from .errors import ConvergenceError, DomainError
from .geometry import Chart, SpacetimePoint, WarpConfig, chart_transform
from .rset import f_beta, rset_cylinder_chart, rset_zeta
from .series import SeriesControl
from .verification import SUITES, run_suite

CORRELATOR_COLUMNS = ["A", "L", "chart", "x1", "x2", "x1p", "x2p",
                      "ReCp", "ImCp", "ReCm", "ImCm", "ReW", "ImW", "status"]
LIMIT_COLUMNS = ["delta", "L", "t", "y", "tp", "yp", "c1_osc", "c2", "c2_first_log10",
                 "cminus", "cminus_zm", "cminus_osc", "c0_asymptote", "c0_asymptote_rel",
                 "status"]
RSET_COLUMNS = ["A", "delta", "L", "chart", "x1", "x2", "F", "T_pp", "T_mm", "T_pm", "status"]


class UsageError(Exception):
    pass


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _parse_point(text):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"expected a point 'a,b', got {text!r}") from None
    return a, b


def _parse_pair(text):
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError(f"expected a pair 'a,b;c,d', got {text!r}")
    return _parse_point(parts[0]), _parse_point(parts[1])


def _parse_delta_log(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise UsageError(f"expected 'start:stop:count', got {text!r}") from None
    if not (0 < a and 0 < b and n >= 1):
        raise UsageError("delta grid needs positive bounds and count >= 1")
    return np.geomspace(a, b, n)


def _warp(args):
    if args.A is not None and args.delta is not None:
        raise UsageError("give either --A or --delta, not both")
    if args.A is None and args.delta is None:
        raise UsageError("one of --A or --delta is required")
    if args.delta is not None:
        return WarpConfig.from_delta(args.delta, args.L)
    return WarpConfig(args.A, args.L)


def _write(rows, columns, fmt, output):
    if fmt == "json":
        text = json.dumps([dict(zip(columns, r)) for r in rows], indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cvals(cp, cm):
    if not cp.ok or not cm.ok:
        bad = cp.status if not cp.ok else cm.status
        return [math.nan] * 6 + [bad.value]
    w = 0.5 * (cp.value + cm.value)
    return [cp.value.real, cp.value.imag, cm.value.real, cm.value.imag, w.real, w.imag, "ok"]


def cmd_correlator(args):
    cfg = _warp(args)
    ctl = SeriesControl(args.n_max, args.tail_tol)
    rows, failed = [], False
    for text in args.pair:
        (a, b), (c, d) = _parse_pair(text)
        head = [cfg.A, cfg.L, args.chart, a, b, c, d]
        try:
            if args.chart == "ty":
                x = chart_transform(SpacetimePoint(Chart.TY, a, b), Chart.NULL, cfg)
                xp = chart_transform(SpacetimePoint(Chart.TY, c, d), Chart.NULL, cfg)
            else:
                x, xp = SpacetimePoint(Chart.NULL, a, b), SpacetimePoint(Chart.NULL, c, d)
            if args.form == "closed":
                cp, cm = hadamard_closed(x, xp, cfg), pj_closed(x, xp, cfg)
            else:
                h = hadamard_series(x, xp, cfg, ctl)
                cp, cm = CorrelatorValue(h.total, h.status), pj_series(x, xp, cfg, ctl)
            rows.append(head + _cvals(cp, cm))
        except (DomainError, ConvergenceError) as exc:
            failed = True
            rows.append(head + [math.nan] * 6 + [f"error: {exc}"])
    _write(rows, CORRELATOR_COLUMNS, args.format, args.output)
    return 1 if failed else 0


def cmd_limit_scan(args):
    deltas = _parse_delta_log(args.delta_log)
    ctl = SeriesControl(args.n_max, args.tail_tol)
    rows, failed = [], False
    for text in args.pair_ty:
        (t, y), (tp, yp) = _parse_pair(text)
        for d in deltas:
            head = [float(d), args.L, t, y, tp, yp]
            try:
                r = limit_deviation((t, y), (tp, yp), float(d), args.L, ctl).as_dict()
                rows.append(head + [r[k] for k in LIMIT_COLUMNS[6:]])
            except (DomainError, ConvergenceError) as exc:
                failed = True
                rows.append(head + [math.nan] * 8 + [f"error: {exc}"])
    _write(rows, LIMIT_COLUMNS, args.format, args.output)
    return 1 if failed else 0


def cmd_rset(args):
    cfg = _warp(args)
    ctl = SeriesControl(args.n_max, args.tail_tol)
    points = [_parse_point(p) for p in args.point] if args.point else None
    if points is None:
        points = [(0.0, 0.0)] if args.chart == "z" else [(1 / cfg.W, 1 / cfg.W)]
    rows, failed = [], False
    for a, b in points:
        head = [cfg.A, cfg.delta, cfg.L, args.chart, a, b]
        try:
            F = f_beta(cfg.beta, ctl)
            T = rset_cylinder_chart((a, b), cfg, ctl) if args.chart == "z" else rset_zeta((a, b), cfg, ctl)
            rows.append(head + [F, T.T_pp, T.T_mm, T.T_pm, "ok"])
        except (DomainError, ConvergenceError) as exc:
            failed = True
            rows.append(head + [math.nan] * 4 + [f"error: {exc}"])
    _write(rows, RSET_COLUMNS, args.format, args.output)
    return 1 if failed else 0


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    report = []
    for name in names:
        kwargs = {}
        if name == "correlators" and args.A is not None:
            kwargs["amps"] = (args.A,)
        report.append(run_suite(name, **kwargs).as_dict())
    ok = all(r["passed"] for r in report)
    text = json.dumps({"passed": ok, "suites": report}, indent=1) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def _add_common(p, warp=True):
    if warp:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--A", type=float, help="warp parameter A >= 1")
        g.add_argument("--delta", type=float, help="A - 1")
    p.add_argument("--L", type=float, default=1.0, help="length of the time machine")
    p.add_argument("--n-max", type=int, default=400, help="series truncation cap")
    p.add_argument("--tail-tol", type=float, default=1e-15, help="series tail tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", help="output file (default stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="tmqft", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="file of key=value lines mirroring the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlator", help="C+, C-, W for point pairs")
    _add_common(p)
    p.add_argument("--pair", action="append", required=True, help="'a,b;c,d', repeatable")
    p.add_argument("--chart", choices=("null", "ty"), default="null")
    p.add_argument("--form", choices=("closed", "series"), default="series")
    p.set_defaults(func=cmd_correlator)

    p = sub.add_parser("limit-scan", help="weak-warp deviations over a delta grid")
    _add_common(p, warp=False)
    p.add_argument("--delta-log", required=True, help="'start:stop:count', log spaced")
    p.add_argument("--pair-ty", action="append", required=True, help="'t,y;t2,y2', repeatable")
    p.set_defaults(func=cmd_limit_scan)

    p = sub.add_parser("rset", help="stress-tensor components")
    _add_common(p)
    p.add_argument("--chart", choices=("zeta", "z"), default="z")
    p.add_argument("--point", action="append", help="'a,b', repeatable")
    p.set_defaults(func=cmd_rset)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--A", type=float, help="single warp for the correlators suite")
    p.add_argument("--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def _config_args(path):
    """Turn key=value lines into flags; blank lines and '#' comments are skipped."""
    out = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line is not key=value: {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            out += ["--" + key.replace("_", "-") if len(key) > 1 else "--" + key, value]
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise UsageError("--config needs a file")
            path = argv[i + 1]
            rest = argv[:i] + argv[i + 2:]
            # subcommand must come first so the config flags land on it
            extra = _config_args(path)
            argv = rest[:1] + extra + rest[1:]
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, DomainError, ValueError) as exc:
        sys.stderr.write(f"tmqft: error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"tmqft: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
