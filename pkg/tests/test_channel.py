import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intent_ran.errors import CapacityError, DomainError, SchedulingError
from intent_ran.ransim import ScenarioConfig
from intent_ran.ransim.channel import (
    channel_gain,
    compute_energy,
    compute_load,
    dbm_to_w,
    first_packet_latency,
    link_distance,
    max_power_w,
    noise_power_mw,
    path_loss,
    sinr,
    throughput,
)

distances = st.floats(1e-3, 1e5)


def test_path_loss_examples():
    assert path_loss(100.0, 3.5) == pytest.approx(28 + 44 + 20 * math.log10(3.5), abs=1e-12)
    assert path_loss(100.0, 3.5) == pytest.approx(82.881, abs=5e-4)
    assert path_loss(1.0, 1.0) == 28.0


@pytest.mark.parametrize("d", [0.0, -5.0])
def test_path_loss_domain(d):
    with pytest.raises(DomainError):
        path_loss(d, 3.5)


@given(distances, st.floats(0.5, 100))
def test_path_loss_doubling_identity(d, fc):
    assert path_loss(2 * d, fc) - path_loss(d, fc) == pytest.approx(22 * math.log10(2), abs=1e-9)
    assert 22 * math.log10(2) == pytest.approx(6.623, abs=5e-4)


@given(distances, distances)
def test_path_loss_monotone(a, b):
    if a < b:
        assert path_loss(a, 3.5) < path_loss(b, 3.5)


def test_channel_gain_examples():
    assert channel_gain(82.881, 0.0, 0.0) == pytest.approx(-72.881, abs=1e-12)
    assert channel_gain(82.881, 15.0, 0.0) == pytest.approx(-72.580, abs=5e-4)


@pytest.mark.parametrize("angle", [90.0, 120.0, -1.0])
def test_channel_gain_domain(angle):
    with pytest.raises(DomainError):
        channel_gain(80.0, angle, 0.0)


@given(st.floats(0, 89.9), st.floats(-20, 20), st.floats(0.01, 10))
def test_channel_gain_strictly_decreasing_in_shadowing(angle, alpha, delta):
    assert channel_gain(90.0, angle, alpha + delta) < channel_gain(90.0, angle, alpha)


@given(st.floats(0, 89), st.floats(0.01, 0.9))
def test_channel_gain_rises_with_tilt_term(angle, delta):
    # -20 log10(cos b) grows with b, so the gain grows with the angle
    assert channel_gain(90.0, angle + delta, 0.0) > channel_gain(90.0, angle, 0.0)


def test_link_distance_includes_altitude():
    d = link_distance([[0.0, 0.0]], [[30.0, 40.0]], 25.0)
    assert d.shape == (1, 1)
    assert d[0, 0] == pytest.approx(math.sqrt(30**2 + 40**2 + 25**2))


def test_load_examples():
    assert compute_load([], 100) == 0.0
    assert compute_load([60, 40], 100) == 1.0
    rbs = ScenarioConfig(bandwidth_mhz=40.0).total_rbs
    assert rbs == 222
    assert compute_load([111], rbs) == 0.5
    with pytest.raises(CapacityError):
        compute_load([100, 23], 122)


def test_energy_examples():
    assert compute_energy(0.0, 1000.0, 0.0) == 0.0
    for eta in (0.0, 0.3, 1.0):
        assert compute_energy(1.0, 777.0, eta) == pytest.approx(777.0)
    p_max = max_power_w(50.0, 21.45, 354.44)
    assert dbm_to_w(50.0) == pytest.approx(100.0)
    assert p_max == pytest.approx(2499.44, abs=1e-9)
    assert compute_energy(0.5, p_max, 0.5) == pytest.approx(1874.58, abs=1e-9)
    assert compute_energy(0.7, p_max, 0.5, asleep=True, standby_w=12.0) == 12.0


@given(st.floats(0, 1), st.floats(1, 1e4))
def test_energy_affine_in_load(eta, p_max):
    e0, e_half, e1 = (compute_energy(t, p_max, eta) for t in (0.0, 0.5, 1.0))
    assert e_half - e0 == pytest.approx(e1 - e_half, rel=1e-9, abs=1e-9)
    assert e1 - e0 == pytest.approx((1 - eta) * p_max, rel=1e-9, abs=1e-9)


def test_noise_power():
    # -174 dBm/Hz over 20 MHz is about -101 dBm
    assert 10 * math.log10(noise_power_mw(-174.0, 20e6)) == pytest.approx(-174 + 10 * math.log10(20e6))


def test_sinr_without_interference_is_snr():
    assert sinr(2.0, 0.0, 0.5) == pytest.approx(4.0)


@given(st.floats(1e-9, 1.0), st.floats(1e-9, 1.0), st.floats(1e-12, 1e-3), st.integers(1, 100))
def test_doubling_interferer_lowers_rate(signal, interference, noise, rbs):
    r1 = throughput(rbs, 180e3, sinr(signal, interference, noise))
    r2 = throughput(rbs, 180e3, sinr(signal, 2 * interference, noise))
    assert r2 < r1


def test_zero_rbs_zero_rate():
    assert throughput(0, 180e3, 10.0) == 0.0


@given(st.integers(0, 300), st.floats(1e3, 1e6), st.floats(0, 1e4))
def test_throughput_matches_straight_line_oracle(rbs, bw, s):
    oracle = rbs * bw * (math.log(1 + s) / math.log(2))
    assert float(throughput(rbs, bw, s)) == pytest.approx(oracle, rel=1e-9, abs=1e-9)


def test_latency_examples():
    assert first_packet_latency(0, 0, 320, 1.0, 1, 320) == pytest.approx(1.0)
    assert first_packet_latency(5, 7, 320, 1.0, 1, 320) == pytest.approx(3.0)
    one = first_packet_latency(0, 0, 320, 0.5, 3, 100)
    two = first_packet_latency(0, 0, 320, 0.5, 6, 100)
    assert two == pytest.approx(one / 2)


def test_latency_undefined_cases():
    with pytest.raises(SchedulingError):
        first_packet_latency(0, 0, 320, 0.5, 1, 100, scheduled=False)
    with pytest.raises(SchedulingError):
        first_packet_latency(0, 0, 320, 0.5, 0, 100)
    with pytest.raises(SchedulingError):
        first_packet_latency(3, 2, 320, 0.5, 1, 100)


@given(st.floats(0, 50), st.floats(0, 50), st.floats(1, 1e4), st.floats(0.05, 1), st.integers(1, 200), st.floats(1, 2000))
def test_latency_matches_straight_line_oracle(t_in, wait, bits, rate, rbs, rb_bits):
    oracle = wait + bits / (rate * rbs * rb_bits)
    assert first_packet_latency(t_in, t_in + wait, bits, rate, rbs, rb_bits) == pytest.approx(oracle, rel=1e-9)
