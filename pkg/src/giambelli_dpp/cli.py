"""Command-line driver: ``verify``, ``sample`` and ``plot``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from .identities.report import validate_report_dict
from .suites import SUITES, ConfigError, RunConfig, run_suite, write_reports

log = logging.getLogger("giambelli_dpp")


class ReportParseError(ValueError):
    pass


def parse_kernel_spec(text: str) -> dict:
    """``discrete_sine:rho=0.5`` or ``cd:weight=gaussian,n=3`` -> kernel config dict."""
    kind, _, rest = text.partition(":")
    if not kind:
        raise ValueError(f"empty kernel kind in {text!r}")
    spec: dict = {"kind": kind}
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ValueError(f"kernel parameter {item!r} is not key=value")
        try:
            spec[key] = int(val)
        except ValueError:
            try:
                spec[key] = float(val)
            except ValueError:
                spec[key] = val
    return spec


# -- verify ---------------------------------------------------------------------------

def cmd_verify(args, parser) -> int:
    if not args.suite:
        parser.error("verify: a suite name is required")
    try:
        cfg = RunConfig.load(args.suite, args.config, seed=args.seed, samples=args.samples,
                             out=args.out, workers=args.workers)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    reports = run_suite(cfg)
    jpath, cpath = write_reports(reports, cfg.out, stem=cfg.suite)
    for r in reports:
        print(r.summary())
    failed = [r.name for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} passed; wrote {jpath} and {cpath}")
    if failed:
        print("failed reports:", file=sys.stderr)
        for name in failed:
            print(f"  {name}", file=sys.stderr)
        return 1
    return 0


# -- sample ---------------------------------------------------------------------------

def cmd_sample(args) -> int:
    from .kernels import Window, make_kernel
    from .sampling import SeedSpec, configurations, window_dpp, write_samples_csv

    try:
        K = make_kernel(parse_kernel_spec(args.kernel))
    except ValueError as exc:
        print(f"kernel error: {exc}", file=sys.stderr)
        return 2
    if args.count < 1:
        print("count must be positive", file=sys.stderr)
        return 2
    dpp = window_dpp(K, Window.symmetric(args.window), args.order)
    occ = dpp.occupancy(args.count, SeedSpec(args.seed))
    write_samples_csv(args.out, configurations(dpp.sites, occ))
    print(f"wrote {args.count} configurations to {args.out}")
    return 0


# -- plot -----------------------------------------------------------------------------

PLOT_FIELDS = ("name", "axis", "x", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err", "stderr", "pass")


def load_reports(path) -> list[dict]:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportParseError(f"{path}:{exc.lineno}: parse error: {exc.msg}") from exc
    items = data if isinstance(data, list) else [data]
    for i, d in enumerate(items):
        try:
            if not isinstance(d, dict):
                raise ValueError("report is not an object")
            validate_report_dict(d)
        except ValueError as exc:
            raise ReportParseError(f"{path}: report {i}: {exc}") from exc
    return items


def _row(name, axis, x, lhs, rhs, stderr, ok):
    return {"name": name, "axis": axis, "x": x, "lhs_re": lhs["re"], "lhs_im": lhs["im"],
            "rhs_re": rhs["re"], "rhs_im": rhs["im"],
            "abs_err": abs(complex(lhs["re"], lhs["im"]) - complex(rhs["re"], rhs["im"])),
            "stderr": "" if stderr is None else stderr, "pass": ok}


def convergence_rows(d: dict) -> list[dict]:
    """Error-vs-window, error-vs-order or error-vs-samples rows for one report."""
    params, extras = d.get("params", {}), d.get("extras", {})
    name, ok = d["name"], d["pass"]
    if "doubled_window" in extras and "doubled_lhs" in extras:
        lo, hi = params["window"]
        dlo, dhi = extras["doubled_window"]
        return [_row(name, "window", hi - lo, d["lhs"], d["rhs"], extras.get("stderr_lhs"), ok),
                _row(name, "window", dhi - dlo, extras["doubled_lhs"], extras["doubled_rhs"],
                     extras.get("shift_stderr_lhs"), ok)]
    if "orders" in params:
        return [_row(name, "order", max(params["orders"]), d["lhs"], d["rhs"], d.get("stderr"), ok)]
    if "nsamples" in params:
        return [_row(name, "samples", params["nsamples"], d["lhs"], d["rhs"], d.get("stderr"), ok)]
    return [_row(name, "none", "", d["lhs"], d["rhs"], d.get("stderr"), ok)]


def plot_csv(reports: list[dict], kind: str = "convergence") -> str:
    if kind != "convergence":
        raise ValueError(f"unknown plot kind {kind!r}")
    rows = [r for d in reports for r in convergence_rows(d)]
    rows.sort(key=lambda r: (r["name"], r["x"] if r["x"] != "" else 0))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=PLOT_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_plot(args) -> int:
    reports = []
    try:
        for p in args.reports:
            reports += load_reports(p)
    except OSError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return 2
    except ReportParseError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    text = plot_csv(reports, args.kind)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- entry point ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="giambelli-dpp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    v.add_argument("--config", help="TOML file overriding the defaults")
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--out", help="output directory for the JSON and CSV reports")
    v.add_argument("--workers", type=int)
    s = sub.add_parser("sample", help="sample a window-restricted DPP")
    s.add_argument("kernel", help="kernel spec, e.g. discrete_sine:rho=0.5")
    s.add_argument("--window", type=float, required=True, help="half-width T of the window [-T, T]")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--order", type=int, default=200, help="Nystrom order for continuous kernels")
    pl = sub.add_parser("plot", help="CSV plot data from report files")
    pl.add_argument("reports", nargs="+")
    pl.add_argument("--kind", default="convergence", choices=["convergence"])
    pl.add_argument("--out")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args, parser)
    if args.command == "sample":
        return cmd_sample(args)
    return cmd_plot(args)


if __name__ == "__main__":
    sys.exit(main())
