"""Command-line interface: ``riswpc {analytic,simulate,sweep,validate}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure (including a
``validate`` run where some tolerance is missed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from typing import Optional, Sequence

from . import analytic
from .experiment import SweepSpec, canonical_variable, row_record, rows_to_csv, run_sweep
from .montecarlo import McConfig, McEstimate, simulate_outage, simulate_rate
from .params import SystemParams, db_to_linear
from .validation import run_all

log = logging.getLogger("riswpc")

# config-file key -> (argparse dest, type)
CONFIG_KEYS = {
    "m": ("m", int),
    "pb_dbm": ("pb_dbm", str),
    "alpha": ("alpha", float),
    "tau_c": ("tau_c", float),
    "eta": ("eta", float),
    "r": ("r", float),
    "zeta": ("zeta", float),
    "zeta_db": ("zeta_db", float),
    "sigma2_dbm": ("sigma2_dbm", float),
    "trials": ("trials", int),
    "seed": ("seed", int),
    "chunk_size": ("chunk_size", int),
    "workers": ("workers", int),
    "var": ("var", str),
    "grid": ("grid", str),
    "format": ("format", str),
    "rate_time_fraction": ("rate_time_fraction", lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def read_config(path: str) -> dict:
    """Parse a flat ``key = value`` file. ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_").lower()
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            dest, conv = CONFIG_KEYS[key]
            try:
                out[dest] = conv(value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(s) for s in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(n)]
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def _param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("link parameters")
    g.add_argument("--m", type=int, help="number of surface elements (default 50)")
    g.add_argument("--pb-dbm", dest="pb_dbm", help="BS transmit power in dBm (default 10); sweep accepts a comma list")
    g.add_argument("--alpha", type=float, help="energy-transfer fraction of the coherence interval, in (0,1) (default 0.4)")
    g.add_argument("--tau-c", dest="tau_c", type=float, help="coherence interval in seconds (default 1)")
    g.add_argument("--eta", type=float, help="energy conversion efficiency, in (0,1] (default 0.85)")
    g.add_argument("--r", type=float, help="target rate in bit/s/Hz (default 1.2)")
    z = g.add_mutually_exclusive_group()
    z.add_argument("--zeta", type=float, help="path loss through the surface, linear power gain (default 1)")
    z.add_argument("--zeta-db", dest="zeta_db", type=float, help="path loss through the surface in dB")
    g.add_argument("--sigma2-dbm", dest="sigma2_dbm", type=float, help="noise power at the BS in dBm (default -90)")
    g.add_argument("--rate-time-fraction", dest="rate_time_fraction", action="store_true", default=None,
                   help="multiply ergodic rates by (1 - alpha)")
    g.add_argument("--config", help="key=value file; flags override its values")


def _mc_flags(p: argparse.ArgumentParser, trials_default: Optional[int]) -> None:
    g = p.add_argument_group("simulation")
    what = f"default {trials_default}" if trials_default else "omit for analytic-only output"
    g.add_argument("--trials", type=int, help=f"Monte Carlo trials ({what})")
    g.add_argument("--seed", type=int, help="master seed, unsigned 64-bit (default 0)")
    g.add_argument("--chunk-size", dest="chunk_size", type=int, help="trials per independent sub-stream (default 10000)")
    g.add_argument("--workers", type=int, help="worker threads; results do not depend on it (default 1)")


def _out_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("output")
    g.add_argument("--format", choices=("json", "csv"), help="output format (default json)")
    g.add_argument("--out", help="write results to this file instead of standard output")
    g.add_argument("-v", "--verbose", action="count", default=0, help="more diagnostics on standard error")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riswpc", description="RIS-assisted wireless-powered link: closed forms and Monte Carlo.")
    sub = parser.add_subparsers(dest="command", metavar="{analytic,simulate,sweep,validate}", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("analytic", help="closed-form outage probability and ergodic rate")
    _param_flags(p)
    _out_flags(p)

    p = sub.add_parser("simulate", help="Monte Carlo outage and rate next to the closed forms")
    _param_flags(p)
    _mc_flags(p, 1_000_000)
    _out_flags(p)

    p = sub.add_parser("sweep", help="sweep one parameter; one table row per grid value")
    _param_flags(p)
    g = p.add_argument_group("sweep")
    g.add_argument("--var", help="swept variable: m, p_b (dBm), alpha, r, zeta, sigma2 (dBm) (default m)")
    g.add_argument("--grid", help="start:stop:step (stop inclusive) or comma list (default 10:100:10 for m)")
    _mc_flags(p, None)
    _out_flags(p)

    p = sub.add_parser("validate", help="run every analytic-vs-oracle check; exit 0 iff all pass")
    _mc_flags(p, 1_000_000)
    _out_flags(p)
    p.add_argument("--config", help="key=value file; flags override its values")
    return parser


def _merge(args: argparse.Namespace) -> dict:
    opts = read_config(args.config) if getattr(args, "config", None) else {}
    for k, v in vars(args).items():
        if v is not None:
            opts[k] = v
    zeta, zeta_db = getattr(args, "zeta", None), getattr(args, "zeta_db", None)
    if "zeta" in opts and "zeta_db" in opts and zeta is None and zeta_db is None:
        raise UsageError("config sets both zeta and zeta_db")
    if zeta is not None:
        opts.pop("zeta_db", None)
    if zeta_db is not None:
        opts.pop("zeta", None)
    return opts


def _pb_list(opts: dict) -> list[float]:
    raw = opts.get("pb_dbm")
    if raw is None:
        return [10.0]
    try:
        return [float(s) for s in str(raw).split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --pb-dbm value {raw!r}") from None


def _params(opts: dict, pb_dbm: Optional[float] = None) -> SystemParams:
    kw = {}
    for key in ("m", "alpha", "tau_c", "eta", "r", "zeta", "sigma2_dbm"):
        if key in opts:
            kw[key] = opts[key]
    if "zeta_db" in opts:
        kw["zeta"] = db_to_linear(opts["zeta_db"])
    if pb_dbm is None:
        pbs = _pb_list(opts)
        if len(pbs) != 1:
            raise UsageError("--pb-dbm takes a single value here")
        pb_dbm = pbs[0]
    kw["p_b_dbm"] = pb_dbm
    try:
        return SystemParams(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _mc(opts: dict, trials_default: Optional[int]) -> Optional[McConfig]:
    trials = opts.get("trials", trials_default)
    if trials is None:
        return None
    try:
        return McConfig(
            trials=trials,
            seed=opts.get("seed", 0),
            chunk_size=opts.get("chunk_size", 10_000),
            workers=opts.get("workers", 1),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _clean(x):
    """Round floats to 10 significant digits; non-finite becomes null."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        return float(f"{x:.10g}") if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _params_record(p: SystemParams) -> dict:
    return {
        "m": p.m, "p_b_dbm": p.p_b_dbm, "alpha": p.alpha, "tau_c": p.tau_c, "eta": p.eta,
        "r": p.r, "zeta": p.zeta, "sigma2_dbm": p.sigma2_dbm,
    }


def _analytic_record(p: SystemParams, time_fraction: bool) -> dict:
    s = analytic.evaluate(p, time_fraction)
    rec = _params_record(p)
    rec.update({
        "outage": s.outage,
        "log10_outage": s.log_outage / math.log(10.0),
        "rate": s.rate,
        "rate_time_fraction": time_fraction,
    })
    return rec


def _estimate_record(prefix: str, e: McEstimate) -> dict:
    rec = {
        f"{prefix}_mc": e.mean,
        f"{prefix}_mc_stderr": e.std_err,
        f"{prefix}_mc_ci95_low": e.ci95_low,
        f"{prefix}_mc_ci95_high": e.ci95_high,
    }
    if e.wilson_low is not None:
        rec[f"{prefix}_mc_wilson_low"] = e.wilson_low
        rec[f"{prefix}_mc_wilson_high"] = e.wilson_high
        rec[f"{prefix}_mc_below_resolution"] = e.below_resolution
    return rec


def _records_to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
    w.writeheader()
    for rec in records:
        w.writerow({k: "" if v is None else (f"{v:.10g}" if isinstance(v, float) else v) for k, v in rec.items()})
    return buf.getvalue()


def _dump(records, fmt: str) -> str:
    if fmt == "csv":
        return _records_to_csv(records if isinstance(records, list) else [records])
    return json.dumps(_clean(records), indent=2) + "\n"


def cmd_analytic(opts: dict) -> str:
    rec = _analytic_record(_params(opts), bool(opts.get("rate_time_fraction")))
    return _dump(rec, opts.get("format", "json"))


def cmd_simulate(opts: dict) -> str:
    p = _params(opts)
    tf = bool(opts.get("rate_time_fraction"))
    mc = _mc(opts, 1_000_000)
    rec = _analytic_record(p, tf)
    rec.update(_estimate_record("outage", simulate_outage(p, mc)))
    rec.update(_estimate_record("rate", simulate_rate(p, mc, tf)))
    rec.update({"trials": mc.trials, "seed": mc.seed, "chunk_size": mc.chunk_size})
    return _dump(rec, opts.get("format", "json"))


def cmd_sweep(opts: dict) -> str:
    try:
        var = canonical_variable(opts.get("var", "m"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if "grid" in opts:
        grid = parse_grid(opts["grid"])
    elif var == "m":
        grid = list(range(10, 101, 10))
    else:
        raise UsageError(f"--grid is required when sweeping {var}")
    mc = _mc(opts, None)
    tf = bool(opts.get("rate_time_fraction"))
    series = [None] if var == "p_b" else _pb_list(opts)
    rows = []
    for pb in series:
        base = _params(opts, pb if pb is not None else 10.0)
        label = None if pb is None or len(series) == 1 else f"p_b_dbm={pb:g}"
        try:
            spec = SweepSpec(var, grid, base, mc, tf, label)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows.extend(run_sweep(spec, workers=mc.workers if mc else 1))
    if opts.get("format", "json") == "csv":
        return rows_to_csv(rows)
    return _dump([row_record(r) for r in rows], "json")


def cmd_validate(opts: dict) -> tuple[str, bool]:
    mc = _mc(opts, 1_000_000)
    results = run_all(mc.trials, mc.seed, mc.chunk_size, mc.workers)
    passed = all(r.passed for r in results)
    for r in results:
        print(f"criterion {r.criterion}: {r.name:<45} {'PASS' if r.passed else 'FAIL'}", file=sys.stderr)
    doc = {
        "trials": mc.trials,
        "seed": mc.seed,
        "chunk_size": mc.chunk_size,
        "passed": passed,
        "checks": [
            {"criterion": r.criterion, "name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ],
    }
    if opts.get("format", "json") == "csv":
        text = _records_to_csv([{"criterion": r.criterion, "name": r.name, "passed": r.passed} for r in results])
    else:
        text = json.dumps(_clean(doc), indent=2) + "\n"
    return text, passed


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(name)s: %(message)s")

    ok = True
    try:
        opts = _merge(args)
        if args.command == "analytic":
            text = cmd_analytic(opts)
        elif args.command == "simulate":
            text = cmd_simulate(opts)
        elif args.command == "sweep":
            text = cmd_sweep(opts)
        else:
            text, ok = cmd_validate(opts)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"riswpc {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"riswpc {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"riswpc {args.command}: numerical failure in {type(exc).__module__}: {exc}", file=sys.stderr)
        return 2

    out = args.out
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
