"""System parameters of the RIS-assisted wireless-powered link.

All computation downstream happens in linear units (watts, linear gains).
dBm values are accepted only here, at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace


def dbm_to_watts(dbm: float) -> float:
    """Convert a power in dBm to watts. ``-inf`` maps to exactly zero."""
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts < 0:
        raise ValueError(f"power must be non-negative, got {watts!r} W")
    if watts == 0:
        return -math.inf
    return 10.0 * math.log10(watts) + 30.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Scalar link parameters.

    Attributes
    ----------
    alpha : fraction of the coherence interval spent on energy transfer, in (0, 1).
    tau_c : coherence interval in seconds (normalised, 1 by default).
    eta : energy conversion efficiency, in (0, 1].
    p_b_dbm : base-station transmit power in dBm. ``-inf`` switches the BS off.
    zeta : one-hop path loss through the surface, linear power gain in (0, 1].
    sigma2_dbm : noise power at the base station in dBm.
    r : target codeword rate in bit/s/Hz.
    m : number of surface elements.
    """

    alpha: float = 0.4
    tau_c: float = 1.0
    eta: float = 0.85
    p_b_dbm: float = 10.0
    zeta: float = 1.0
    sigma2_dbm: float = -90.0
    r: float = 1.2
    m: int = 50

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or math.isnan(v):
                raise ValueError(f"{f.name} must be a real number, got {v!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.tau_c > 0 or math.isinf(self.tau_c):
            raise ValueError(f"tau_c must be positive and finite, got {self.tau_c}")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.p_b_dbm == math.inf:
            raise ValueError("p_b_dbm must be finite or -inf")
        if not 0.0 < self.zeta or math.isinf(self.zeta):
            raise ValueError(f"zeta must be positive and finite, got {self.zeta}")
        if not math.isfinite(self.sigma2_dbm):
            raise ValueError(f"sigma2_dbm must be finite (noise power > 0), got {self.sigma2_dbm}")
        if not self.r >= 0 or math.isinf(self.r):
            raise ValueError(f"r must be finite and non-negative, got {self.r}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def p_b_watts(self) -> float:
        return dbm_to_watts(self.p_b_dbm)

    @property
    def sigma2_watts(self) -> float:
        return dbm_to_watts(self.sigma2_dbm)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)


def effective_pump_power(p: SystemParams) -> float:
    """Uplink transmit-power scale ``eta * alpha * P_b / (1 - alpha)`` in watts.

    Multiplying by ``zeta * T**2`` gives the user's instantaneous transmit power.
    """
    return p.eta * p.alpha * p.p_b_watts / (1.0 - p.alpha)


def snr_scale(p: SystemParams) -> float:
    """Pump power normalised by the noise power (linear)."""
    noise = p.sigma2_watts
    if not noise > 0:
        raise ValueError(f"noise power must be positive, got {noise} W")
    return effective_pump_power(p) / noise
