"""Outage and ergodic rate of a RIS-assisted wireless-powered link.

A base station charges an energy-constrained user through a reconfigurable
intelligent surface; the user then transmits back through the same surface
using the harvested energy. This package provides the closed-form
performance expressions (Gamma moment matching of the cascaded channel) and
a seeded Monte Carlo simulator to check them.
"""

from .analytic import (
    ergodic_rate,
    fourth_moment_T,
    log_outage_probability,
    moment_match,
    outage_probability,
    outage_threshold,
    with_threshold,
)
from .channel import (
    ChannelRealization,
    RisConfig,
    aligned_phases,
    cascade_sum,
    cascaded_gain,
    harvested_energy,
    instantaneous_snr,
    sample_channel,
    sample_channels,
)
from .experiment import SweepRow, SweepSpec, compare_report, figure_sweeps, run_sweep
from .montecarlo import McConfig, McEstimate, sample_T_moments, simulate_outage, simulate_rate
from .params import SystemParams, dbm_to_watts, effective_pump_power, snr_scale, watts_to_dbm
from .specfun import GammaApprox, gamma_pdf, log_gamma, reg_lower_incomplete_gamma

__version__ = "0.1.0"
