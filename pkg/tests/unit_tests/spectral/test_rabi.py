import math

import numpy as np
import pytest
from scipy.special import jv

from fastnoise import ParameterError, RangeError
from fastnoise.noise import PhaseTrace
from fastnoise.spectral import (RabiSpectrum, compute_rabi_psd, dbc_per_hz, ensemble_rabi_psd, rpsd_at,
                                rpsd_from_dbc, servo_bump_fraction, to_dbc_per_hz)
from fastnoise.spectral.rabi import _per_side


@pytest.fixture
def ramp():
    '''An RPSD of 2 Hz²/Hz per Hz of offset, on 10 Hz bins up to 100 Hz.'''
    freqs = np.arange(11) * 10.0
    return RabiSpectrum(freqs, 2 * freqs, carrier_rabi=100.0, carrier_band=10.0, resolution_df=10.0)


class Test_per_side(object):

    def test_even(self):
        # fft order for n=4: [0, +1, nyquist, -1]
        assert np.array_equal(_per_side(np.array([1.0, 2.0, 3.0, 4.0])), [1.0, 3.0, 1.5])

    def test_odd(self):
        # n=5: [0, +1, +2, -2, -1]
        assert np.array_equal(_per_side(np.array([1.0, 2.0, 3.0, 4.0, 5.0])), [1.0, 3.5, 3.5])


class TestRabiSpectrum(object):

    def test_powers_count_both_sides(self, ramp):
        assert ramp.total_power() == pytest.approx(2 * 1100.0 * 10.0)
        assert ramp.carrier_power() == pytest.approx(2 * 20.0 * 10.0)
        assert ramp.band_power(40.0, 60.0) == pytest.approx(2 * 300.0 * 10.0)


class Test_compute_rabi_psd(object):

    def test_noise_free_carrier(self):
        trace = PhaseTrace(np.zeros(4096), 1e-7)
        spectrum = compute_rabi_psd(trace, 100e3)
        assert spectrum.total_power() == pytest.approx(100e3 ** 2)
        assert spectrum.carrier_power() == pytest.approx(100e3 ** 2)
        assert np.all(spectrum.values[3:] < 1e-12 * spectrum.values[0])

    def test_grid(self):
        trace = PhaseTrace(np.zeros(4096), 1e-7)
        spectrum = compute_rabi_psd(trace, 100e3)
        assert spectrum.resolution_df == pytest.approx(10e6 / 512)
        assert spectrum.carrier_band == pytest.approx(5 * 10e6 / 512)
        assert len(spectrum.freqs) == 257
        assert spectrum.freqs[-1] == pytest.approx(5e6)

    def test_total_normalization(self, servo_noise):
        spectrum = compute_rabi_psd(servo_noise.synthesize(1, 3.0), 50e3)
        assert spectrum.total_power() == pytest.approx(50e3 ** 2)

    def test_carrier_normalization(self, servo_noise):
        spectrum = compute_rabi_psd(servo_noise.synthesize(1, 3.0), 50e3, normalization='carrier')
        assert spectrum.carrier_power() == pytest.approx(50e3 ** 2)
        assert spectrum.total_power() > 50e3 ** 2

    def test_small_noise_follows_phase_psd(self, servo_noise):
        # for small phase excursions each side of the field spectrum is Ω² times half the one-sided phase PSD
        rabi_hz = 100e3
        spectrum = ensemble_rabi_psd([servo_noise.synthesize(seed) for seed in range(8)], rabi_hz)
        expected = rabi_hz ** 2 * servo_noise.model_psd([200e3])[0] / 2
        assert rpsd_at(spectrum, 200e3, 5e3) == pytest.approx(expected, rel=0.25)

    def test_phase_modulation_sidebands(self):
        # e^{iβ sin 2πft} puts J1(β)² ≈ (β/2)² of the field on each of ±f
        beta, rabi_hz = 0.05, 100e3
        times = np.arange(2 ** 16) * 1e-7
        trace = PhaseTrace(beta * np.sin(2 * np.pi * 300e3 * times), 1e-7)
        spectrum = compute_rabi_psd(trace, rabi_hz)
        df = spectrum.resolution_df

        one_side = rpsd_at(spectrum, 300e3, band=3 * df) * 6 * df
        assert one_side == pytest.approx(6.25e6, rel=0.05)
        assert one_side == pytest.approx(jv(1, beta) ** 2 * rabi_hz ** 2, rel=0.05)
        assert spectrum.band_power(300e3 - 3 * df, 300e3 + 3 * df) == pytest.approx(2 * 6.25e6, rel=0.05)

    def test_resolution_too_coarse(self):
        with pytest.raises(ParameterError, match='too short'):
            compute_rabi_psd(PhaseTrace(np.zeros(1024), 1e-7), 100e3, carrier_band=1e3)

    def test_bad_arguments(self):
        trace = PhaseTrace(np.zeros(1024), 1e-7)
        with pytest.raises(ParameterError):
            compute_rabi_psd(trace, 0.0)
        with pytest.raises(ParameterError):
            compute_rabi_psd(trace, 100e3, normalization='peak')


class Test_rpsd_at(object):

    def test_band_average(self, ramp):
        # a linear spectrum averages to its centre value
        assert rpsd_at(ramp, 50.0, band=10.0) == pytest.approx(100.0)

    def test_between_bins(self, ramp):
        assert rpsd_at(ramp, 55.0, band=0.0) == pytest.approx(110.0)

    def test_default_band(self, ramp):
        assert rpsd_at(ramp, 50.0) == pytest.approx(100.0)

    def test_clipped_at_zero(self, ramp):
        # averages over [0, 10]
        assert rpsd_at(ramp, 0.0, band=10.0) == pytest.approx(10.0)

    def test_sign_ignored(self, ramp):
        assert rpsd_at(ramp, -30.0) == rpsd_at(ramp, 30.0)

    def test_beyond_range(self, ramp):
        with pytest.raises(RangeError):
            rpsd_at(ramp, 101.0)

    def test_negative_band(self, ramp):
        with pytest.raises(ParameterError):
            rpsd_at(ramp, 50.0, band=-1.0)


class Test_dbc(object):

    def test_budget_point(self):
        assert dbc_per_hz(1.0, 100e3) == pytest.approx(-100.0, abs=1e-12)

    def test_zero(self):
        assert dbc_per_hz(0.0, 100e3) == -math.inf

    def test_inverse(self):
        assert rpsd_from_dbc(dbc_per_hz(3.5, 20e3), 20e3) == pytest.approx(3.5)

    def test_to_dbc_per_hz(self, ramp):
        # 100 Hz²/Hz against a 100 Hz carrier
        assert to_dbc_per_hz(ramp, 50.0, band=0.0) == pytest.approx(-20.0)


class Test_servo_bump_fraction(object):

    def test_fraction(self, ramp):
        # bins 40..60 hold 2*(40+50+60)*10 of 2*550*10
        assert servo_bump_fraction(ramp, 40.0, 60.0) == pytest.approx(150.0 / 550.0)
