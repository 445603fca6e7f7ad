import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riswpc.channel import (
    ChannelRealization,
    RisConfig,
    aligned_phases,
    cascade_sum,
    cascaded_gain,
    harvested_energy,
    instantaneous_snr,
    sample_channel,
    sample_channels,
    user_transmit_power,
)
from riswpc.params import SystemParams, effective_pump_power, snr_scale, watts_to_dbm


def _rng(seed=0):
    return np.random.default_rng(seed)


def test_sample_channel_is_deterministic():
    a = sample_channel(50, _rng(11))
    b = sample_channel(50, _rng(11))
    assert a.h_br.shape == (50,) and a.m == 50
    np.testing.assert_array_equal(a.h_br, b.h_br)
    np.testing.assert_array_equal(a.h_ur, b.h_ur)


def test_rejects_zero_elements():
    with pytest.raises(ValueError):
        sample_channel(0, _rng())
    with pytest.raises(ValueError):
        sample_channels(0, 10, _rng())


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        ChannelRealization(np.ones(3, complex), np.ones(4, complex))


def test_entry_statistics():
    # 10^6 single-element draws: Rayleigh magnitude mean sqrt(pi)/2, unit power
    ch = sample_channels(1, 1_000_000, _rng(3))
    mag = np.abs(ch.h_br).ravel()
    se = mag.std(ddof=1) / math.sqrt(mag.size)
    assert abs(mag.mean() - math.sqrt(math.pi) / 2) <= 3 * se
    pw = mag**2
    assert abs(pw.mean() - 1.0) <= 3 * pw.std(ddof=1) / math.sqrt(pw.size)
    assert abs(np.mean(np.abs(ch.h_ur) ** 2) - 1.0) < 0.01
    # circular symmetry: no preferred phase, uncorrelated I/Q
    z = ch.h_br.ravel()
    assert abs(np.mean(z)) < 0.005
    assert abs(np.mean(z * z)) < 0.005


def test_alignment_trivial():
    ch = ChannelRealization(np.array([1 + 0j]), np.array([1 + 0j]))
    ris = aligned_phases(ch)
    assert ris.theta[0] == 0.0 and ris.beta[0] == 1.0


def test_alignment_cancels_phase():
    ch = ChannelRealization(np.array([np.exp(1j * math.pi / 3)]), np.array([np.exp(1j * math.pi / 6)]))
    g = cascaded_gain(ch, aligned_phases(ch))
    assert abs(g.imag) < 1e-12
    assert g.real == pytest.approx(1.0, rel=1e-12)


def test_alignment_attains_magnitude_sum():
    ch = sample_channel(8, _rng(5))
    ris = aligned_phases(ch)
    assert np.all((0 <= ris.theta) & (ris.theta < 2 * math.pi))
    # direct complex sum against sum of magnitude products
    direct = abs(np.sum(ch.h_ur * np.exp(1j * ris.theta) * ch.h_br))
    mags = sum(abs(a) * abs(b) for a, b in zip(ch.h_br, ch.h_ur))
    assert direct == pytest.approx(mags, rel=1e-10)
    assert cascade_sum(ch) == pytest.approx(mags, rel=1e-12)


def test_zero_entry_gets_zero_phase():
    ch = ChannelRealization(np.array([0j, 1j]), np.array([1 + 0j, 1 + 0j]))
    assert aligned_phases(ch).theta[0] == 0.0


def test_ris_config_validation():
    with pytest.raises(ValueError):
        RisConfig(beta=np.array([1.5]), theta=np.array([0.0]))
    with pytest.raises(ValueError):
        RisConfig(beta=np.ones(2), theta=np.zeros(3))


def test_cascade_sum_examples():
    ph = np.exp(1j * np.linspace(0, 5, 50))
    assert cascade_sum(ChannelRealization(ph, ph.conj())) == pytest.approx(50.0, rel=1e-14)
    assert cascade_sum(ChannelRealization(np.array([0.5j]), np.array([-0.8 + 0j]))) == pytest.approx(0.4)


def test_cascade_sum_batched():
    ch = sample_channels(6, 100, _rng(1))
    t = cascade_sum(ch)
    assert t.shape == (100,)
    assert t[17] == pytest.approx(cascade_sum(ChannelRealization(ch.h_br[17], ch.h_ur[17])))


def test_cascade_sum_moments_m50(moments_m50):
    mean, var = moments_m50.mean, moments_m50.variance
    assert abs(mean.mean - 50 * math.pi / 4) <= 3 * mean.std_err
    assert abs(mean.mean - 39.2699) <= 3 * mean.std_err + 1e-4
    assert abs(var.mean - 50 * (1 - math.pi**2 / 16)) <= 3 * var.std_err


def test_harvested_energy():
    p = SystemParams(eta=0.85, alpha=0.4, tau_c=1.0, p_b_dbm=10.0, zeta=1.0)
    assert harvested_energy(p, 0.0) == 0.0
    assert harvested_energy(p, 2.0) == pytest.approx(0.0136, rel=1e-12)
    assert harvested_energy(p, 4.0) == pytest.approx(4 * harvested_energy(p, 2.0), rel=1e-14)
    with pytest.raises(ValueError):
        harvested_energy(p, -1.0)


def test_transmit_power_is_pump_power_times_gain():
    p = SystemParams(zeta=0.3)
    t = np.array([0.5, 2.0, 40.0])
    np.testing.assert_allclose(user_transmit_power(p, t), effective_pump_power(p) * p.zeta * t**2, rtol=1e-13)


def _unit_scale():
    p = SystemParams()
    return p.replace(sigma2_dbm=watts_to_dbm(effective_pump_power(p)))


def test_instantaneous_snr_examples():
    p = _unit_scale()
    assert snr_scale(p) == pytest.approx(1.0, rel=1e-12)
    assert instantaneous_snr(p, 1.0) == pytest.approx(1.0, rel=1e-12)
    assert instantaneous_snr(p, 2.0) == pytest.approx(16 * instantaneous_snr(p, 1.0), rel=1e-14)
    q = p.replace(sigma2_dbm=p.sigma2_dbm - 10.0, zeta=0.1)
    assert snr_scale(q) == pytest.approx(10.0, rel=1e-12)
    assert instantaneous_snr(q, 3.0) == pytest.approx(8.1, rel=1e-12)


complex_vec = st.integers(1, 16).flatmap(
    lambda m: st.tuples(
        st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=m, max_size=m),
        st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=m, max_size=m),
        st.lists(st.floats(0, 2 * math.pi, exclude_max=True), min_size=m, max_size=m),
    )
)


@given(complex_vec)
def test_alignment_is_optimal(data):
    hb, hu, theta = (np.array(x) for x in data)
    ch = ChannelRealization(hb.astype(complex), hu.astype(complex))
    other = RisConfig(beta=np.ones(len(theta)), theta=theta)
    assert abs(cascaded_gain(ch, other)) <= cascade_sum(ch) + 1e-10
    assert abs(cascaded_gain(ch, aligned_phases(ch))) == pytest.approx(cascade_sum(ch), rel=1e-10, abs=1e-12)


@settings(max_examples=50)
@given(st.integers(0, 2**32), st.floats(0, 2 * math.pi))
def test_snr_invariant_to_common_rotation(seed, phi):
    p = SystemParams()
    ch = sample_channel(10, _rng(seed))
    rotated = ChannelRealization(ch.h_br * np.exp(1j * phi), ch.h_ur)
    assert instantaneous_snr(p, cascade_sum(rotated)) == pytest.approx(instantaneous_snr(p, cascade_sum(ch)), rel=1e-12)
    g = cascaded_gain(rotated, aligned_phases(rotated))
    assert abs(g) == pytest.approx(cascade_sum(ch), rel=1e-10)
