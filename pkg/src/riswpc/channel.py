"""Rayleigh channels through the surface and per-realization link quantities.

Channel vectors may carry leading batch axes: every function here reduces
over the last axis only, so ``h_br`` of shape ``(trials, M)`` yields one
cascade sum per trial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SystemParams, snr_scale


@dataclass(frozen=True)
class ChannelRealization:
    """BS-to-surface (``h_br``) and user-to-surface (``h_ur``) complex gains."""

    h_br: np.ndarray
    h_ur: np.ndarray

    def __post_init__(self):
        if self.h_br.shape != self.h_ur.shape or self.h_br.ndim < 1:
            raise ValueError(
                f"channel vectors must share a shape (..., M), got {self.h_br.shape} "
                f"and {self.h_ur.shape}"
            )

    @property
    def m(self) -> int:
        return self.h_br.shape[-1]


@dataclass(frozen=True)
class RisConfig:
    """Per-element amplitude ``beta`` in [0, 1] and phase ``theta`` in [0, 2pi)."""

    beta: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        if self.beta.shape != self.theta.shape:
            raise ValueError("beta and theta must have the same shape")
        if np.any(self.beta < 0) or np.any(self.beta > 1):
            raise ValueError("amplitude responses must lie in [0, 1]")

    def response(self) -> np.ndarray:
        """Diagonal of the response matrix, ``sqrt(beta) * exp(j theta)``."""
        return np.sqrt(self.beta) * np.exp(1j * self.theta)


def _check_m(m: int) -> int:
    if int(m) != m or m < 1:
        raise ValueError(f"element count must be a positive integer, got {m}")
    return int(m)


def _cn01(rng: np.random.Generator, shape) -> np.ndarray:
    # circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2)
    z = rng.standard_normal((*shape, 2))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def sample_channels(m: int, n: int, rng: np.random.Generator) -> ChannelRealization:
    """Draw ``n`` independent realizations as arrays of shape ``(n, m)``.

    ``h_br`` is drawn before ``h_ur`` so a given generator state always maps
    to the same realizations.
    """
    m = _check_m(m)
    h_br = _cn01(rng, (n, m))
    h_ur = _cn01(rng, (n, m))
    return ChannelRealization(h_br, h_ur)


def sample_channel(m: int, rng: np.random.Generator) -> ChannelRealization:
    m = _check_m(m)
    h_br = _cn01(rng, (m,))
    h_ur = _cn01(rng, (m,))
    return ChannelRealization(h_br, h_ur)


def aligned_phases(ch: ChannelRealization) -> RisConfig:
    """Phase configuration that co-phases every cascaded term.

    Each term ``h_ur[m] * exp(j theta[m]) * h_br[m]`` becomes real and
    non-negative, i.e. ``theta[m]`` is minus the cascade phase. Amplitudes are
    all set to 1. Zero-magnitude terms get phase 0.
    """
    cascade = ch.h_ur * ch.h_br
    theta = np.mod(-np.angle(cascade), 2.0 * np.pi)
    theta = np.where(cascade == 0, 0.0, theta)
    # mod can round up to exactly 2pi for tiny negative angles
    theta = np.where(theta >= 2.0 * np.pi, 0.0, theta)
    return RisConfig(beta=np.ones(theta.shape), theta=theta)


def cascaded_gain(ch: ChannelRealization, ris: RisConfig) -> np.ndarray:
    """Complex end-to-end gain ``h_ur^T Theta h_br`` for an arbitrary configuration."""
    return np.sum(ch.h_ur * ris.response() * ch.h_br, axis=-1)


def cascade_sum(ch: ChannelRealization) -> np.ndarray | float:
    """``T = sum_m |h_br[m]| |h_ur[m]|``, the gain magnitude under aligned phases."""
    t = np.sum(np.abs(ch.h_br) * np.abs(ch.h_ur), axis=-1)
    return float(t) if np.ndim(t) == 0 else t


def harvested_energy(p: SystemParams, t):
    """Energy collected by the user during the harvesting slot, in joules.

    Linear harvester: ``eta * alpha * tau_c * P_b * zeta * T**2``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("cascade sum must be non-negative")
    e = p.eta * p.alpha * p.tau_c * p.p_b_watts * p.zeta * t**2
    return float(e) if e.ndim == 0 else e


def user_transmit_power(p: SystemParams, t):
    """Harvested energy spread over the uplink slot ``(1 - alpha) tau_c``, in watts."""
    e = harvested_energy(p, t)
    return e / ((1.0 - p.alpha) * p.tau_c)


def instantaneous_snr(p: SystemParams, t):
    """Received SNR at the BS: ``p_e * zeta**2 * T**4``.

    The same realization serves both the harvesting and the uplink slot
    (reciprocal, quasi-static channel), hence the fourth power.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("cascade sum must be non-negative")
    z = snr_scale(p) * p.zeta**2 * t**4
    return float(z) if z.ndim == 0 else z
