import numpy as np
import pytest

from fastnoise import ParameterError
from fastnoise.noise import PhaseTrace
from fastnoise.spectral import PowerSpectrum, average_spectra, ensemble_psd, estimate_psd
from fastnoise.spectral.estimate import welch_layout


class Test_welch_layout(object):

    def test_defaults(self):
        assert welch_layout(1024, 1e6, None, 0.5) == (128, 64, 15)

    def test_no_overlap(self):
        assert welch_layout(1000, 1e6, 100, 0.0) == (100, 0, 10)

    @pytest.mark.parametrize('segment_len,overlap', [(4, 0.5), (2000, 0.5), (100, 1.0), (100, -0.1)])
    def test_invalid(self, segment_len, overlap):
        with pytest.raises(ParameterError):
            welch_layout(1000, 1e6, segment_len, overlap)


class Test_estimate_psd(object):

    @pytest.fixture
    def white(self):
        rng = np.random.default_rng(3)
        return PhaseTrace(rng.standard_normal(2 ** 16), 1e-6, seed=3)

    def test_grid(self, white):
        psd = estimate_psd(white)
        assert psd.resolution_df == pytest.approx(1e6 / 8192)
        assert psd.freqs[0] == 0
        assert psd.freqs[1] == pytest.approx(psd.resolution_df)
        assert len(psd.freqs) == 8192 // 2 + 1
        assert psd.n_averages == 15
        assert psd.seeds == (3,)

    def test_integral_is_variance(self, white):
        assert estimate_psd(white).total_power() == pytest.approx(np.var(white.samples), rel=0.05)

    def test_white_level(self, white):
        # unit variance over a 500 kHz one-sided band
        psd = estimate_psd(white)
        assert np.mean(psd.values[1:-1]) == pytest.approx(2e-6, rel=0.05)

    def test_mean_removed(self, white):
        offset = PhaseTrace(white.samples + 100.0, white.dt)
        assert np.allclose(estimate_psd(offset).values, estimate_psd(white).values)

    def test_pure_tone_power(self):
        # a tone of amplitude A carries A²/2, almost all of it inside the Hann main lobe
        times = np.arange(2 ** 16) * 1e-7
        trace = PhaseTrace(0.2 * np.sin(2 * np.pi * 50e3 * times), 1e-7)
        psd = estimate_psd(trace)
        df = psd.resolution_df
        assert psd.band_power(50e3 - 3 * df, 50e3 + 3 * df) == pytest.approx(0.02, rel=0.05)
        assert psd.peak_frequency() == pytest.approx(50e3, abs=df)

    def test_brown_slope(self, brown_noise):
        psd = ensemble_psd([brown_noise.synthesize(seed) for seed in range(10)])
        band = (psd.freqs >= 2e3) & (psd.freqs <= 50e3)
        slope, _ = np.polyfit(np.log10(psd.freqs[band]), np.log10(psd.values[band]), 1)
        assert slope == pytest.approx(-2.0, abs=0.2)

    def test_matches_model(self, brown_noise):
        psd = ensemble_psd([brown_noise.synthesize(seed) for seed in range(10)])
        band = (psd.freqs >= 2e3) & (psd.freqs <= 50e3)
        ratio = psd.values[band] / brown_noise.model_psd(psd.freqs[band])
        assert np.mean(ratio) == pytest.approx(1.0, rel=0.1)


class TestPowerSpectrum(object):

    @pytest.fixture
    def spectrum(self):
        return PowerSpectrum(np.arange(5.0), np.array([0.0, 1.0, 4.0, 2.0, 1.0]), 1.0)

    def test_total_power(self, spectrum):
        assert spectrum.total_power() == 8.0

    def test_band_power(self, spectrum):
        assert spectrum.band_power(1.0, 2.0) == 5.0

    def test_peak(self, spectrum):
        assert spectrum.peak_frequency() == 2.0
        assert spectrum.peak_frequency(f_min=3.0) == 3.0

    @pytest.mark.parametrize('freqs,values', [
        ([0.0, 1.0], [1.0]),
        ([1.0, 0.0], [1.0, 1.0]),
        ([0.0, 1.0], [1.0, -1.0]),
    ])
    def test_invalid(self, freqs, values):
        with pytest.raises(ParameterError):
            PowerSpectrum(np.array(freqs), np.array(values), 1.0)


class Test_average_spectra(object):

    def test_mean_and_bookkeeping(self):
        a = PowerSpectrum(np.arange(3.0), np.array([1.0, 2.0, 3.0]), 1.0, 4, (1,))
        b = PowerSpectrum(np.arange(3.0), np.array([3.0, 2.0, 1.0]), 1.0, 4, (2,))
        mean = average_spectra([a, b])
        assert np.array_equal(mean.values, [2.0, 2.0, 2.0])
        assert mean.n_averages == 8
        assert mean.seeds == (1, 2)

    def test_grid_mismatch(self):
        a = PowerSpectrum(np.arange(3.0), np.ones(3), 1.0)
        b = PowerSpectrum(np.arange(4.0), np.ones(4), 1.0)
        with pytest.raises(ParameterError):
            average_spectra([a, b])

    def test_empty(self):
        with pytest.raises(ParameterError):
            average_spectra([])
