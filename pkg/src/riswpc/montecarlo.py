"""Seeded Monte Carlo estimates of outage, rate and moments of the cascade sum.

Trials are cut into fixed-size chunks. Chunk ``i`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(i,))``, so any trial's
realization depends only on ``(seed, chunk_size, trial index)`` and never on
how chunks are scheduled. Per-chunk central moments are merged by a
pairwise tree in chunk order, which makes results bit-identical for every
worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .channel import cascade_sum, instantaneous_snr, sample_channels
from .params import SystemParams
from .specfun import GammaApprox

log = logging.getLogger(__name__)

Z95 = 1.959963984540054

TSampler = Callable[[np.random.Generator, int], np.ndarray]


class SimulationError(FloatingPointError):
    """A trial produced a non-finite value."""


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 0
    chunk_size: int = 10_000
    workers: int = 1

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if int(self.chunk_size) != self.chunk_size or self.chunk_size < 1:
            raise ValueError(f"chunk_size must be a positive integer, got {self.chunk_size}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers}")

    def chunks(self) -> list[tuple[int, int]]:
        """``(chunk index, trials in chunk)`` pairs covering all trials."""
        full, rest = divmod(self.trials, self.chunk_size)
        out = [(i, self.chunk_size) for i in range(full)]
        if rest:
            out.append((full, rest))
        return out


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error and 95% intervals.

    ``wilson_low``/``wilson_high`` are filled for proportions only; they stay
    meaningful when no event was observed at all.
    """

    mean: float
    std_err: float
    ci95_low: float
    ci95_high: float
    trials: int
    seed: int
    wilson_low: Optional[float] = None
    wilson_high: Optional[float] = None

    @property
    def below_resolution(self) -> bool:
        return self.wilson_low is not None and self.mean == 0.0


@dataclass(frozen=True)
class TMoments:
    mean: McEstimate
    variance: McEstimate
    fourth: McEstimate


@dataclass(frozen=True)
class _Moments:
    """Count, mean and central power sums up to order 4 (columnwise)."""

    n: int
    mean: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray

    @classmethod
    def of(cls, v: np.ndarray) -> "_Moments":
        mean = v.mean(axis=0)
        d = v - mean
        d2 = d * d
        return cls(len(v), mean, d2.sum(axis=0), (d2 * d).sum(axis=0), (d2 * d2).sum(axis=0))

    def merge(self, o: "_Moments") -> "_Moments":
        na, nb = self.n, o.n
        n = na + nb
        delta = o.mean - self.mean
        d_n = delta / n
        mean = self.mean + d_n * nb
        m2 = self.m2 + o.m2 + delta * d_n * na * nb
        m3 = (
            self.m3 + o.m3
            + delta * d_n * d_n * na * nb * (na - nb)
            + 3.0 * d_n * (na * o.m2 - nb * self.m2)
        )
        m4 = (
            self.m4 + o.m4
            + delta * d_n**3 * na * nb * (na * na - na * nb + nb * nb)
            + 6.0 * d_n * d_n * (na * na * o.m2 + nb * nb * self.m2)
            + 4.0 * d_n * (na * o.m3 - nb * self.m3)
        )
        return _Moments(n, mean, m2, m3, m4)


def _tree_merge(parts: list[_Moments]) -> _Moments:
    while len(parts) > 1:
        nxt = [parts[i].merge(parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def channel_sampler(m: int) -> TSampler:
    """Cascade sums from full complex Rayleigh draws with co-phased surface."""
    def draw(rng, n):
        return cascade_sum(sample_channels(m, n, rng))
    return draw


def gamma_sampler(g: GammaApprox) -> TSampler:
    """Cascade sums drawn straight from the matched Gamma law."""
    def draw(rng, n):
        return rng.gamma(g.k, g.w, size=n)
    return draw


def _run(mc: McConfig, sampler: TSampler, statistic: Callable[[np.ndarray], np.ndarray]) -> _Moments:
    def one(chunk):
        index, n = chunk
        t = sampler(chunk_rng(mc.seed, index), n)
        with np.errstate(over="ignore", invalid="ignore"):
            v = np.asarray(statistic(t), dtype=float)
        bad = ~np.isfinite(v)
        if bad.any():
            row = int(np.argwhere(bad)[0][0])
            raise SimulationError(
                f"non-finite trial value in chunk {index} (trial {index * mc.chunk_size + row}, "
                f"T={t[row]!r}, seed={mc.seed})"
            )
        if v.ndim == 1:
            v = v[:, None]
        return _Moments.of(v)

    chunks = mc.chunks()
    log.debug("running %d trials in %d chunks on %d worker(s)", mc.trials, len(chunks), mc.workers)
    if mc.workers == 1:
        parts = [one(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            parts = list(pool.map(one, chunks))
    return _tree_merge(parts)


def _estimate(mean: float, var: float, n: int, seed: int) -> McEstimate:
    se = math.sqrt(max(var, 0.0) / n)
    return McEstimate(mean, se, mean - Z95 * se, mean + Z95 * se, n, seed)


def _sample_var(mo: _Moments, col: int = 0) -> float:
    return float(mo.m2[col]) / (mo.n - 1) if mo.n > 1 else 0.0


def wilson_interval(hits: float, n: int, z: float = Z95) -> tuple[float, float]:
    p = hits / n
    z2n = z * z / n
    centre = (p + z2n / 2.0) / (1.0 + z2n)
    half = z * math.sqrt(p * (1.0 - p) / n + z2n / (4.0 * n)) / (1.0 + z2n)
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == n else min(1.0, centre + half)
    return lo, hi


def uplink_rate(p: SystemParams, t: np.ndarray) -> np.ndarray:
    """Per-trial achievable rate ``(1 - alpha) log2(1 + z_u)``."""
    z = instantaneous_snr(p, t)
    return (1.0 - p.alpha) * np.log1p(z) / math.log(2.0)


def _proportion(mo: _Moments, mc: McConfig) -> McEstimate:
    hits = round(float(mo.mean[0]) * mo.n)
    mean = hits / mo.n
    var = mean * (1.0 - mean) * mo.n / (mo.n - 1) if mo.n > 1 else 0.0
    est = _estimate(mean, var, mo.n, mc.seed)
    lo, hi = wilson_interval(hits, mo.n)
    return McEstimate(est.mean, est.std_err, est.ci95_low, est.ci95_high, mo.n, mc.seed, lo, hi)


def simulate_outage(p: SystemParams, mc: McConfig, sampler: Optional[TSampler] = None) -> McEstimate:
    """Fraction of trials with ``(1 - alpha) log2(1 + z_u) < r``.

    ``sampler`` defaults to full channel draws for ``p.m`` elements.
    """
    sampler = sampler or channel_sampler(p.m)
    mo = _run(mc, sampler, lambda t: uplink_rate(p, t) < p.r)
    return _proportion(mo, mc)


def simulate_outage_below(theta: float, mc: McConfig, sampler: TSampler) -> McEstimate:
    """Fraction of trials with ``T**4 < theta``."""
    mo = _run(mc, sampler, lambda t: t**4 < theta)
    return _proportion(mo, mc)


def simulate_rate(p: SystemParams, mc: McConfig, time_fraction: bool = False) -> McEstimate:
    """Sample mean of ``log2(1 + z_u)`` (times ``1 - alpha`` if ``time_fraction``)."""
    scale = (1.0 - p.alpha) if time_fraction else 1.0
    mo = _run(mc, channel_sampler(p.m), lambda t: scale * np.log1p(instantaneous_snr(p, t)) / math.log(2.0))
    return _estimate(float(mo.mean[0]), _sample_var(mo), mo.n, mc.seed)


def sample_T_moments(m: int, mc: McConfig) -> TMoments:
    """Empirical mean, variance and fourth raw moment of the cascade sum."""
    mo = _run(mc, channel_sampler(m), lambda t: np.column_stack((t, t**4)))
    n = mo.n
    mean = _estimate(float(mo.mean[0]), _sample_var(mo, 0), n, mc.seed)
    fourth = _estimate(float(mo.mean[1]), _sample_var(mo, 1), n, mc.seed)
    # delta-method standard error of the sample variance: (mu4 - sigma^4) / n
    var_hat = _sample_var(mo, 0)
    mu2 = float(mo.m2[0]) / n
    mu4 = float(mo.m4[0]) / n
    se = math.sqrt(max(mu4 - mu2 * mu2, 0.0) / n)
    variance = McEstimate(var_hat, se, var_hat - Z95 * se, var_hat + Z95 * se, n, mc.seed)
    return TMoments(mean, variance, fourth)


__all__ = [
    "McConfig",
    "McEstimate",
    "SimulationError",
    "TMoments",
    "channel_sampler",
    "chunk_rng",
    "gamma_sampler",
    "sample_T_moments",
    "simulate_outage",
    "simulate_outage_below",
    "simulate_rate",
    "uplink_rate",
    "wilson_interval",
]
