import math

import numpy as np
import pytest

from rrcqkd.core.rrc_shaping import orthogonality_defect, rrc_amplitude, rrc_spectrum_power
from rrcqkd.models import RrcPulse, SpectralProfile

ROLLOFFS = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0]


def test_sinc_peak():
    assert rrc_amplitude(0.0, RrcPulse(0.0)) == 1.0


def test_center_limit():
    assert rrc_amplitude(0.0, RrcPulse(0.25)) == pytest.approx(1.0 + 0.25 * (4.0 / math.pi - 1.0), abs=1e-15)
    assert rrc_amplitude(0.0, RrcPulse(0.25)) == pytest.approx(1.068310, abs=1e-6)
    for t in (1e-6 * 1.5, -1e-6 * 1.5):
        assert rrc_amplitude(t, RrcPulse(0.25)) == pytest.approx(1.068310, abs=1e-6)


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5, 1.0])
def test_edge_limit_matches_two_sided_values(rho):
    pulse = RrcPulse(rho)
    t0 = 1.0 / (4.0 * rho)
    at = rrc_amplitude(t0, pulse)
    left = rrc_amplitude(t0 - 1e-5, pulse)
    right = rrc_amplitude(t0 + 1e-5, pulse)
    assert at == pytest.approx(0.5 * (left + right), abs=1e-8)


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5, 1.0])
def test_continuity_at_singular_points(rho):
    pulse = RrcPulse(rho)
    for t0 in (0.0, 1.0 / (4.0 * rho), -1.0 / (4.0 * rho)):
        value = rrc_amplitude(t0, pulse)
        for dt in (1e-7, -1e-7):
            assert abs(rrc_amplitude(t0 + dt, pulse) - value) < 1e-4


def test_evenness_is_exact():
    t = np.linspace(0.0, 12.0, 2401)
    for rho in ROLLOFFS:
        pulse = RrcPulse(rho)
        np.testing.assert_array_equal(rrc_amplitude(t, pulse), rrc_amplitude(-t, pulse))


def test_symbol_period_scaling():
    pulse = RrcPulse(0.3, symbol_period=2.0)
    assert rrc_amplitude(0.0, pulse) == pytest.approx(rrc_amplitude(0.0, RrcPulse(0.3)) / math.sqrt(2.0))


def test_singular_time():
    assert RrcPulse(0.0).singular_time is None
    assert RrcPulse(0.25, symbol_period=2.0).singular_time == pytest.approx(2.0)


def test_edge_limit_with_stretched_symbol_period():
    pulse = RrcPulse(0.25, symbol_period=2.0)
    at = rrc_amplitude(pulse.singular_time, pulse)
    near = rrc_amplitude(pulse.singular_time + 1e-5, pulse)
    assert at == pytest.approx(near, abs=1e-4)


def test_array_shape_is_preserved():
    t = np.zeros((3, 4))
    assert rrc_amplitude(t, RrcPulse(0.25)).shape == (3, 4)


def test_spectrum_values():
    for rho in ROLLOFFS:
        pulse = RrcPulse(rho)
        assert rrc_spectrum_power(0.0, pulse) == 1.0
        assert rrc_spectrum_power((1.0 + rho) / 2.0 + 1e-9, pulse) == 0.0
        if rho > 0.0:
            assert rrc_spectrum_power(0.5, pulse) == pytest.approx(0.5, abs=1e-15)


def test_spectrum_support_and_energy():
    for rho in ROLLOFFS:
        profile = SpectralProfile(rho)
        f = np.linspace(-1.2, 1.2, 24001)
        power = rrc_spectrum_power(f, profile.pulse)
        assert np.all(power >= 0.0)
        assert np.all(power[np.abs(f) > profile.stopband_edge] == 0.0)
        # the rho = 0 brick wall costs up to one grid step per edge
        assert np.trapezoid(power, f) == pytest.approx(1.0, abs=2e-4)


def test_time_domain_energy():
    pulse = RrcPulse(0.5)
    dt = 0.01
    t = np.arange(-400.0, 400.0 + dt / 2, dt)
    assert np.sum(rrc_amplitude(t, pulse) ** 2) * dt == pytest.approx(1.0, abs=1e-4)


@pytest.mark.parametrize("rho", [0.5, 1.0])
def test_spectrum_matches_fourier_transform(rho):
    pulse = RrcPulse(rho)
    dt = 0.05
    t = np.arange(-500.0, 500.0 + dt / 2, dt)
    v = rrc_amplitude(t, pulse)
    f = np.linspace(-1.0, 1.0, 100)
    spectrum = (np.exp(-2j * np.pi * f[:, None] * t[None, :]) @ v) * dt
    np.testing.assert_allclose(np.abs(spectrum) ** 2, rrc_spectrum_power(f, pulse), atol=1e-4)


@pytest.mark.parametrize("rho", ROLLOFFS)
def test_orthogonality_suite(rho):
    pulse = RrcPulse(rho)
    for j in range(-8, 9):
        expected = 1.0 if j == 0 else 0.0
        assert orthogonality_defect(pulse, j) == pytest.approx(expected, abs=1e-8)


def test_orthogonality_far_lag():
    assert orthogonality_defect(RrcPulse(0.9), 5) == pytest.approx(0.0, abs=1e-8)
    assert orthogonality_defect(RrcPulse(0.25), 64) == pytest.approx(0.0, abs=1e-8)


def test_orthogonality_lag_limit():
    with pytest.raises(ValueError):
        orthogonality_defect(RrcPulse(0.25), 65)


@pytest.mark.parametrize("kwargs", [{"rolloff": -0.1}, {"rolloff": 1.1}, {"rolloff": 0.2, "symbol_period": 0.0}])
def test_invalid_pulse(kwargs):
    with pytest.raises(ValueError):
        RrcPulse(**kwargs)
