import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reradmimo import errors
from reradmimo.channel import (
    Mode,
    PhaseModel,
    assemble_channel,
    free_space_amplitude,
    los_coefficient,
    normalized_decomposition,
    reradiation_amplitude,
    reradiation_coefficient,
    unit_power_scale,
)
from reradmimo.geometry import ArrayPose, link_arrays
from reradmimo.linkbudget import CONST, rician_k_factor

F = 60e9
LAM = CONST.c / F


def fs(f, d):
    return CONST.c / (4 * math.pi * f * d)


def pair(n=4, d=10.0, tx_angles=(0.0, 0.0, 0.0), rx_angles=(0.0, 0.0, 0.0)):
    return link_arrays(n, n, LAM / 2, d, ArrayPose(orientation=tx_angles), ArrayPose(orientation=rx_angles))


# LoS coefficient


@pytest.mark.example
def test_los_magnitude_without_absorption():
    assert abs(los_coefficient(F, 10.0, 0.0)) == pytest.approx(fs(F, 10.0), rel=1e-14)


@pytest.mark.example
def test_los_phase_wraps_on_whole_wavelengths():
    f = 1e9
    d = 37 * (CONST.c / f)
    assert cmath.phase(los_coefficient(f, d, 0.0)) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.example
def test_los_magnitude_halved_at_kd_ln4():
    d = 10.0
    k = math.log(4.0) / d
    assert abs(los_coefficient(F, d, k)) == pytest.approx(0.5 * abs(los_coefficient(F, d, 0.0)), rel=1e-13)


@given(d=st.floats(0.1, 1e3))
def test_los_phase_matches_path_length(d):
    h = los_coefficient(F, d, 0.0)
    expected = cmath.exp(2j * math.pi * ((d / LAM) % 1.0))
    assert abs(h / abs(h) - expected) < 1e-9


def test_los_rejects_bad_inputs():
    with pytest.raises(errors.NonPositiveInput):
        los_coefficient(0.0, 1.0, 0.0)
    with pytest.raises(errors.NegativeAbsorption):
        los_coefficient(F, 1.0, -1.0)


# re-radiated coefficient


@pytest.mark.example
@pytest.mark.parametrize("model", list(PhaseModel))
def test_reradiation_vanishes_without_absorption(model):
    h = reradiation_coefficient(F, np.full(8, 10.0), 0.0, np.random.default_rng(0), model)
    assert np.all(h == 0)


@pytest.mark.example
def test_uniform_phase_magnitude_is_deterministic():
    d, k = 10.0, 0.05
    h = reradiation_coefficient(F, np.full(1000, d), k, np.random.default_rng(1))
    expected = math.sqrt(1 - math.exp(-k * d)) * fs(F, d)
    np.testing.assert_allclose(np.abs(h), expected, rtol=1e-13)


@pytest.mark.example
@pytest.mark.parametrize("model", list(PhaseModel))
def test_reradiation_statistics(model):
    n, d = 100_000, 10.0
    k = 1.0 / d
    h = reradiation_coefficient(F, np.full(n, d), k, np.random.default_rng(5), model)
    power = (1 - math.exp(-1.0)) * fs(F, d) ** 2
    # per-component std of the mean is sqrt(power / 2 / n)
    bound = 3 * math.sqrt(power / 2 / n)
    assert abs(h.real.mean()) < bound and abs(h.imag.mean()) < bound
    assert np.mean(np.abs(h) ** 2) == pytest.approx(power, rel=0.01)


def test_reradiation_amplitude_matches_power_split():
    d, k = 7.0, 0.2
    los = abs(los_coefficient(F, d, k)) ** 2
    rr = reradiation_amplitude(F, d, k) ** 2
    assert los + rr == pytest.approx(fs(F, d) ** 2, rel=1e-13)


# assembly


@pytest.mark.example
def test_single_pair_without_absorption():
    tx, rx = link_arrays(1, 1, LAM / 2, 10.0)
    ch = assemble_channel(tx, rx, F, 0.0, Mode.SCATTERING, np.random.default_rng(0))
    assert ch.h.shape == (1, 1)
    assert ch.h[0, 0] == los_coefficient(F, 10.0, 0.0)


@pytest.mark.example
def test_noise_mode_keeps_los_rank():
    tx, rx = pair(4, 10.0)
    ch = assemble_channel(tx, rx, F, 0.01, Mode.NOISE)
    np.testing.assert_array_equal(ch.h, ch.h_los)
    assert not np.any(ch.h_a)
    # deep far field: the LoS matrix is numerically rank one
    tx, rx = pair(4, 1e4, (0.3, 1.1, 2.0), (4.0, 0.2, 5.5))
    s = np.linalg.svd(assemble_channel(tx, rx, F, 0.0, "noise").h, compute_uv=False)
    assert s[1] / s[0] <= 1e-6


@pytest.mark.example
def test_same_seed_gives_identical_channel():
    tx, rx = pair(16)
    a = assemble_channel(tx, rx, F, 0.1, "scattering", np.random.default_rng(11))
    b = assemble_channel(tx, rx, F, 0.1, "scattering", np.random.default_rng(11))
    assert a.h.tobytes() == b.h.tobytes()


def test_scattering_needs_generator():
    tx, rx = pair(4)
    with pytest.raises(ValueError):
        assemble_channel(tx, rx, F, 0.1, "scattering")


def test_unit_power_scale_normalises_mean_power():
    tx, rx = pair(16, 2.0, (0.5, 0.5, 0.5), (1.0, 2.0, 3.0))
    ch = assemble_channel(tx, rx, F, 0.0, "noise")
    assert np.mean(np.abs(ch.h * unit_power_scale(ch)) ** 2) == pytest.approx(1.0, rel=1e-12)


# normalized decomposition


@pytest.mark.example
def test_decomposition_weights_at_unit_k():
    tx, rx = pair(4)
    ch = assemble_channel(tx, rx, F, math.log(2.0) / 10.0, "scattering", np.random.default_rng(2))
    K, _, _ = normalized_decomposition(ch)
    assert K == pytest.approx(1.0, rel=1e-12)
    assert math.sqrt(K / (K + 1)) == pytest.approx(math.sqrt(0.5), rel=1e-12)
    assert math.sqrt(1 / (K + 1)) == pytest.approx(math.sqrt(0.5), rel=1e-12)


@pytest.mark.example
def test_decomposition_round_trip_example():
    test_decomposition_round_trip.hypothesis.inner_test(kd=1.0, seed=5, model=PhaseModel.UNIFORM)


@settings(max_examples=20)
@given(kd=st.floats(1e-3, 20.0), seed=st.integers(0, 2**32 - 1), model=st.sampled_from(list(PhaseModel)))
def test_decomposition_round_trip(kd, seed, model):
    d = 10.0
    tx, rx = pair(4, d, (0.2, 0.4, 0.6), (1.0, 3.0, 5.0))
    ch = assemble_channel(tx, rx, F, kd / d, "scattering", np.random.default_rng(seed), model)
    K, h_los_hat, h_a_hat = normalized_decomposition(ch)
    assert K == pytest.approx(rician_k_factor(kd / d, d), rel=1e-12)
    np.testing.assert_allclose(np.abs(h_los_hat), 1.0, rtol=1e-12)
    rebuilt = fs(F, d) * (math.sqrt(K / (K + 1)) * h_los_hat + math.sqrt(1 / (K + 1)) * h_a_hat)
    err = np.linalg.norm(rebuilt - ch.h) / np.linalg.norm(ch.h)
    assert err <= 1e-3


@pytest.mark.example
def test_decomposition_rejects_pure_los():
    tx, rx = pair(4)
    ch = assemble_channel(tx, rx, F, 0.0, "scattering", np.random.default_rng(0))
    with pytest.raises(errors.PureLoS):
        normalized_decomposition(ch)
