import json

import numpy as np
import pytest

from fastnoise.noise.export import sidecar_path
from fastnoise.spectral import PowerSpectrum, RabiSpectrum, read_spectrum, write_spectrum


class Test_write_spectrum(object):

    def test_phase_psd(self, tmp_path):
        spectrum = PowerSpectrum(np.array([0.0, 1.0, 2.0]), np.array([3.0, 2.0, 1.0]), 1.0, 6, (4, 5))
        csv, sidecar = write_spectrum(spectrum, tmp_path / 'noise_psd.csv')

        assert csv.read_text().splitlines()[0] == 'freq_hz,psd'
        meta = json.loads(sidecar.read_text())
        assert meta == {'kind': 'phase_psd', 'carrier_rabi_hz': None, 'carrier_band_hz': None,
                        'resolution_df_hz': 1.0, 'n_averages': 6, 'seed_list': [4, 5]}

    def test_rpsd_read_back(self, tmp_path):
        spectrum = RabiSpectrum(np.array([0.0, 10.0]), np.array([1e8, 2.5]), 100e3, 50.0, 10.0, 3, (1,))
        path, _ = write_spectrum(spectrum, tmp_path / 'x_rpsd.csv', seeds=[7, 8])
        assert sidecar_path(path).exists()

        loaded = read_spectrum(path)
        assert isinstance(loaded, RabiSpectrum)
        assert np.array_equal(loaded.values, spectrum.values)
        assert loaded.carrier_rabi == 100e3
        assert loaded.seeds == (7, 8)
        assert loaded.carrier_power() == pytest.approx(1e9)
