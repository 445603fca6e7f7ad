"""End-to-end checks of every closed form against an independent oracle.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_all`
runs them in a fixed order with seeds derived from one master seed.
Oracles are scipy quadrature (special functions), numpy's Gamma sampler
(exactness of the outage formula given the Gamma law) and full channel
simulation (quality of the Gamma approximation).
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from . import analytic
from .experiment import figure_sweeps, point_seed, run_sweep
from .montecarlo import McConfig, gamma_sampler, sample_T_moments, simulate_outage, simulate_rate
from .params import SystemParams
from .specfun import GammaApprox, gamma_pdf, reg_lower_incomplete_gamma


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def _mc(trials: int, seed: int, tag: str, value: float = 0.0, chunk_size: int = 10_000, workers: int = 1) -> McConfig:
    return McConfig(trials=trials, seed=point_seed(seed, tag, value), chunk_size=chunk_size, workers=workers)


def check_moment_identities(ms=(1, 2, 4, 8, 16, 32, 50, 64, 128), rtol=1e-12) -> CheckResult:
    worst = 0.0
    for m in ms:
        g = analytic.moment_match(m)
        worst = max(
            worst,
            abs(g.k * g.w - m * math.pi / 4) / (m * math.pi / 4),
            abs(g.k * g.w**2 - m * analytic.ELEMENT_VAR) / (m * analytic.ELEMENT_VAR),
        )
    return CheckResult(1, "moment-matching identities", worst <= rtol, {"max_rel_err": worst, "tol": rtol})


def check_channel_statistics(trials=1_000_000, seed=0, m=50, n_se=3.0, **kw) -> CheckResult:
    mo = sample_T_moments(m, _mc(trials, seed, "T-moments", m, **kw))
    mean_ref = m * analytic.ELEMENT_MEAN
    var_ref = m * analytic.ELEMENT_VAR
    z_mean = (mo.mean.mean - mean_ref) / mo.mean.std_err
    z_var = (mo.variance.mean - var_ref) / mo.variance.std_err
    return CheckResult(2, "cascade-sum mean and variance", abs(z_mean) <= n_se and abs(z_var) <= n_se, {
        "mean": mo.mean.mean, "mean_ref": mean_ref, "mean_z": z_mean,
        "var": mo.variance.mean, "var_ref": var_ref, "var_z": z_var,
    })


def check_outage_gamma_level(trials=1_000_000, seed=0, points=10, n_se=3.0, **kw) -> CheckResult:
    """Sample T from the matched Gamma law and count ``T**4 < theta``."""
    rng = np.random.default_rng(point_seed(seed, "gamma-level-points", 0))
    rows = []
    ok = True
    for i in range(points):
        m = int(rng.integers(1, 101))
        q = float(rng.uniform(0.05, 0.95))
        g = analytic.moment_match(m)
        theta = float(stats.gamma.ppf(q, g.k, scale=g.w)) ** 4
        p = analytic.with_threshold(SystemParams(m=m), theta)
        a = analytic.outage_probability(p)
        e = simulate_outage(p, _mc(trials, seed, "gamma-level", i, **kw), sampler=gamma_sampler(g))
        z = (a - e.mean) / e.std_err
        ok &= abs(z) <= n_se
        rows.append({"m": m, "theta": theta, "analytic": a, "mc": e.mean, "z": z})
    return CheckResult(3, "outage closed form vs Gamma sampler", ok, {"points": rows})


def check_outage_channel_level(trials=1_000_000, seed=0, ms=(4, 8, 16), levels=(0.05, 0.2, 0.5), tol=0.02, **kw) -> CheckResult:
    rows = []
    worst = 0.0
    for m in ms:
        g = analytic.moment_match(m)
        for q in levels:
            theta = float(stats.gamma.ppf(q, g.k, scale=g.w)) ** 4
            p = analytic.with_threshold(SystemParams(m=m), theta)
            a = analytic.outage_probability(p)
            e = simulate_outage(p, _mc(trials, seed, f"channel-level-{m}", q, **kw))
            worst = max(worst, abs(a - e.mean))
            rows.append({"m": m, "theta": theta, "analytic": a, "mc": e.mean, "gap": a - e.mean})
    return CheckResult(4, "outage closed form vs channel simulation", worst <= tol, {"max_gap": worst, "tol": tol, "points": rows})


def check_fourth_moment(trials=1_000_000, seed=0, rtol=0.01, **kw) -> CheckResult:
    rel = {}
    for m in (4, 50, 64):
        mo = sample_T_moments(m, _mc(trials, seed, "fourth-moment", m, **kw))
        rel[m] = abs(analytic.fourth_moment_T(m) - mo.fourth.mean) / mo.fourth.mean
    ok = rel[50] <= rtol and rel[64] < rel[4]
    return CheckResult(5, "fourth-moment formula", ok, {"rel_err_m4": rel[4], "rel_err_m50": rel[50], "rel_err_m64": rel[64], "tol": rtol})


def check_ergodic_rate(trials=1_000_000, seed=0, rtol=0.05, **kw) -> CheckResult:
    p = SystemParams(m=50, p_b_dbm=35.0)
    a = analytic.ergodic_rate(p)
    e = simulate_rate(p, _mc(trials, seed, "ergodic-rate", 50, **kw))
    rel = abs(a - e.mean) / e.mean
    return CheckResult(6, "ergodic-rate approximation", rel <= rtol, {"analytic": a, "mc": e.mean, "rel_err": rel, "tol": rtol})


def _quad_cdf(k: float, x: float) -> float:
    g = GammaApprox(k, 1.0)
    if k < 1:
        # integrable t^(k-1) singularity at the origin: let QAWS take it
        c = math.exp(-math.lgamma(k))
        val, _ = integrate.quad(lambda t: c * math.exp(-t), 0.0, x, weight="alg", wvar=(k - 1.0, 0.0), epsabs=1e-13, epsrel=1e-12)
        return val
    val, _ = integrate.quad(lambda t: gamma_pdf(g, t), 0.0, x, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def check_special_functions(seed=0) -> CheckResult:
    xs = np.linspace(0.0, 30.0, 100)
    exp_err = max(abs(reg_lower_incomplete_gamma(1.0, x) - (-math.expm1(-x))) for x in xs)

    quad_err = 0.0
    for k in (0.5, 1.6, 80.5):
        for x in np.linspace(0.05, 2.0, 9) * k:
            quad_err = max(quad_err, abs(reg_lower_incomplete_gamma(k, x) - _quad_cdf(k, x)))

    rng = np.random.default_rng(point_seed(seed, "finite-difference", 0))
    fd_err = 0.0
    for _ in range(20):
        k = float(rng.uniform(0.5, 100.0))
        x = k * float(rng.uniform(0.5, 1.5))
        h = 1e-5 * x
        fd = (reg_lower_incomplete_gamma(k, x + h) - reg_lower_incomplete_gamma(k, x - h)) / (2 * h)
        dens = gamma_pdf(GammaApprox(k, 1.0), x)
        fd_err = max(fd_err, abs(fd - dens) / dens)

    ok = exp_err <= 1e-12 and quad_err <= 1e-8 and fd_err <= 1e-6
    return CheckResult(7, "special-function kernel", ok, {"exp_err": exp_err, "quad_err": quad_err, "fd_rel_err": fd_err})


def check_figure_trends() -> CheckResult:
    """Default element sweep at both BS powers: strict monotonicity and dominance.

    Compared in log-outage, since at the default noise floor the outage
    underflows double precision for all but the smallest surfaces.
    """
    sweeps = {pb: run_sweep(s) for pb, s in figure_sweeps().items()}
    lo, hi = sweeps[10.0], sweeps[35.0]

    def strictly(seq, cmp):
        return all(map(cmp, seq, seq[1:]))

    ok = all(
        strictly([r.log_outage for r in rows], operator.gt) and strictly([r.rate for r in rows], operator.lt)
        for rows in (lo, hi)
    )
    ok &= all(h.log_outage < l.log_outage and h.rate > l.rate for l, h in zip(lo, hi))
    return CheckResult(8, "sweep trends vs element count and BS power", ok, {
        "log10_outage_10dBm": [r.log_outage / math.log(10) for r in lo],
        "log10_outage_35dBm": [r.log_outage / math.log(10) for r in hi],
        "rate_10dBm": [r.rate for r in lo],
        "rate_35dBm": [r.rate for r in hi],
    })


def run_all(trials=1_000_000, seed=0, chunk_size=10_000, workers=1) -> list[CheckResult]:
    kw = {"chunk_size": chunk_size, "workers": workers}
    return [
        check_moment_identities(),
        check_channel_statistics(trials, seed, **kw),
        check_outage_gamma_level(trials, seed, **kw),
        check_outage_channel_level(trials, seed, **kw),
        check_fourth_moment(trials, seed, **kw),
        check_ergodic_rate(trials, seed, **kw),
        check_special_functions(seed),
        check_figure_trends(),
    ]
