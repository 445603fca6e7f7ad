"""Parameter sweeps comparing the closed forms with simulation.

The default sweeps mirror the usual presentation of this link: outage and
ergodic rate against the number of surface elements (10 to 100), one curve
per BS power (10 and 35 dBm).
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import analytic
from .montecarlo import McConfig, McEstimate, simulate_outage, simulate_rate
from .params import SystemParams

log = logging.getLogger(__name__)

# sweep variable -> SystemParams field
VARIABLES = {
    "m": "m",
    "p_b": "p_b_dbm",
    "alpha": "alpha",
    "r": "r",
    "zeta": "zeta",
    "sigma2": "sigma2_dbm",
}
_ALIASES = {"pb": "p_b", "pb_dbm": "p_b", "p_b_dbm": "p_b", "sigma2_dbm": "sigma2"}

DEFAULT_M_GRID = tuple(range(10, 101, 10))
DEFAULT_PB_DBM = (10.0, 35.0)

CSV_COLUMNS = (
    "variable", "value", "outage_analytic", "rate_analytic", "outage_mc",
    "outage_mc_stderr", "rate_mc", "rate_mc_stderr", "trials", "seed",
)


class SweepError(RuntimeError):
    pass


def canonical_variable(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in VARIABLES:
        raise ValueError(f"unknown sweep variable {name!r}; choose from {sorted(VARIABLES)}")
    return key


def point_seed(master: int, variable: str, value: float) -> int:
    """64-bit seed for one grid point, stable under adding or removing other points."""
    msg = f"{int(master)}|{variable}|{float(value)!r}".encode()
    return int.from_bytes(hashlib.blake2b(msg, digest_size=8).digest(), "little")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: Sequence[float]
    base: SystemParams = field(default_factory=SystemParams)
    mc: Optional[McConfig] = None
    time_fraction: bool = False
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "variable", canonical_variable(self.variable))
        grid = tuple(self.grid)
        if not grid:
            raise ValueError("sweep grid is empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError(f"sweep grid must be strictly increasing, got {list(grid)}")
        object.__setattr__(self, "grid", grid)
        for v in grid:
            self.params_at(v)

    def params_at(self, value: float) -> SystemParams:
        return self.base.replace(**{VARIABLES[self.variable]: value})


@dataclass(frozen=True)
class SweepRow:
    variable: str
    value: float
    outage: float
    log_outage: float
    rate: float
    mc_outage: Optional[McEstimate] = None
    mc_rate: Optional[McEstimate] = None
    label: Optional[str] = None


def _run_point(spec: SweepSpec, value: float) -> SweepRow:
    p = spec.params_at(value)
    s = analytic.evaluate(p, spec.time_fraction)
    if not (math.isfinite(s.outage) and math.isfinite(s.rate)):
        raise FloatingPointError(f"non-finite analytic result: outage={s.outage}, rate={s.rate}")
    mc_out = mc_rate = None
    if spec.mc is not None:
        mc = McConfig(
            trials=spec.mc.trials,
            seed=point_seed(spec.mc.seed, spec.variable, value),
            chunk_size=spec.mc.chunk_size,
            workers=spec.mc.workers,
        )
        mc_out = simulate_outage(p, mc)
        mc_rate = simulate_rate(p, mc, spec.time_fraction)
    return SweepRow(spec.variable, value, s.outage, s.log_outage, s.rate, mc_out, mc_rate, spec.label)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every grid point; rows come back in grid order.

    A failing point aborts the whole sweep with a :class:`SweepError` naming it.
    """
    def guarded(value):
        try:
            return _run_point(spec, value)
        except Exception as exc:
            raise SweepError(f"sweep over {spec.variable} failed at {spec.variable}={value}: {exc}") from exc

    log.info("sweeping %s over %d points", spec.variable, len(spec.grid))
    if workers == 1:
        return [guarded(v) for v in spec.grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(guarded, spec.grid))


def figure_sweeps(
    base: Optional[SystemParams] = None,
    mc: Optional[McConfig] = None,
    grid: Sequence[int] = DEFAULT_M_GRID,
    pb_dbm: Sequence[float] = DEFAULT_PB_DBM,
    time_fraction: bool = False,
) -> dict[float, SweepSpec]:
    """One element-count sweep per BS power, keyed by power in dBm."""
    base = base or SystemParams()
    return {
        pb: SweepSpec("m", grid, base.replace(p_b_dbm=pb), mc, time_fraction, label=f"p_b_dbm={pb:g}")
        for pb in pb_dbm
    }


@dataclass(frozen=True)
class ComparisonSummary:
    max_outage_gap: float
    max_outage_gap_at: float
    max_rate_gap: float
    max_rate_gap_at: float
    outage_tol: float
    rate_tol: float
    flagged: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.flagged


def compare_report(rows: Sequence[SweepRow], outage_tol: float = 0.02, rate_tol: float = 0.05) -> ComparisonSummary:
    """Worst analytic-vs-simulation gaps over a sweep.

    Outage gaps are absolute, rate gaps relative to the simulated rate.
    ``flagged`` lists ``(value, outage_exceeded, rate_exceeded)`` per offending row.
    """
    if not rows:
        raise ValueError("no rows to compare")
    missing = [r.value for r in rows if r.mc_outage is None or r.mc_rate is None]
    if missing:
        raise ValueError(f"rows without simulation results at {missing}")
    worst_o, at_o, worst_r, at_r = -1.0, None, -1.0, None
    flagged = []
    for r in rows:
        og = abs(r.outage - r.mc_outage.mean)
        denom = abs(r.mc_rate.mean)
        rg = abs(r.rate - r.mc_rate.mean) / denom if denom > 0 else abs(r.rate)
        if og > worst_o:
            worst_o, at_o = og, r.value
        if rg > worst_r:
            worst_r, at_r = rg, r.value
        if og > outage_tol or rg > rate_tol:
            flagged.append((r.value, og > outage_tol, rg > rate_tol))
    return ComparisonSummary(worst_o, at_o, worst_r, at_r, outage_tol, rate_tol, tuple(flagged))


def fmt(x) -> str:
    """10 significant digits; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return f"{x:.10g}"


def row_record(row: SweepRow) -> dict:
    variable = row.variable if row.label is None else f"{row.variable}[{row.label}]"
    value = int(row.value) if row.variable == "m" else row.value
    o, r = row.mc_outage, row.mc_rate
    return {
        "variable": variable,
        "value": value,
        "outage_analytic": row.outage,
        "rate_analytic": row.rate,
        "outage_mc": o.mean if o else None,
        "outage_mc_stderr": o.std_err if o else None,
        "rate_mc": r.mean if r else None,
        "rate_mc_stderr": r.std_err if r else None,
        "trials": o.trials if o else None,
        "seed": o.seed if o else None,
    }


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        rec = row_record(row)
        w.writerow([rec["variable"]] + [fmt(rec[c]) for c in CSV_COLUMNS[1:]])
    return buf.getvalue()
