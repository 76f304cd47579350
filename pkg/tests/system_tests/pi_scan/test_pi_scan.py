# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################
import json

import numpy as np
import pytest

from fastnoise.config import parse_config
from fastnoise.run import run

pytestmark = pytest.mark.filterwarnings("ignore:_metric_send_conn not set")

NOISE = {
    'noise': {'h0': 1000.0, 'leak': 1e-4, 'n_samples': 4096},
    'servo': {'unity_gain_freq': 200e3, 'gain_db': 80.0, 'bump_quality': 2.0},
    'ensemble': {'n_realizations': 8, 'max_parallel': 2},
}


def read_json(path):
    return json.loads(path.read_text())


@pytest.mark.slow
def test_worst_rabi_frequency_below_bump(tmp_path):
    rabi_list = [25e3, 50e3, 100e3, 150e3, 200e3, 300e3, 500e3]
    config = parse_config(dict(NOISE, experiment='pi-scan-rabi', params={'rabi_list': rabi_list}),
                          output_dir=tmp_path)
    status, _ = run(config)
    assert status == 0

    fit = read_json(tmp_path / 'pi-scan-rabi_fit.json')
    assert fit['bump_peak_hz'] == pytest.approx(config.noise.bump_peak())
    assert fit['worst_below_bump'] is True

    plotdata = read_json(tmp_path / 'pi-scan-rabi_plotdata.json')
    assert plotdata['rabi_hz'] == rabi_list
    assert all(0 < e < 0.1 for e in plotdata['infidelity'])


@pytest.mark.slow
def test_infidelity_follows_rpsd(tmp_path):
    config = parse_config(dict(NOISE, experiment='pi-scan-rpsd', drive={'rabi_hz': 200e3},
                               params={'amplitudes': [0.5, 1.0, 1.5, 2.0]}),
                          output_dir=tmp_path)
    status, _ = run(config)
    assert status == 0

    fit = read_json(tmp_path / 'pi-scan-rpsd_fit.json')
    assert fit['t_pi_s'] == pytest.approx(2.5e-6)
    assert fit['fit']['slope'] > 0
    assert fit['fit']['r_squared'] > 0.9

    # for small phase excursions RPSD(Ω) grows as the square of the noise amplitude
    rpsd = np.array(read_json(tmp_path / 'pi-scan-rpsd_plotdata.json')['rpsd_at_rabi'])
    assert rpsd / rpsd[1] == pytest.approx([0.25, 1.0, 2.25, 4.0], rel=0.2)


def test_noise_free_pi_pulses(tmp_path):
    document = dict(NOISE, experiment='pi-scan-rabi', params={'rabi_list': [50e3, 100e3, 200e3]})
    document['noise'] = {'h0': 0.0, 'n_samples': 4096}
    status, manifest = run(parse_config(document, output_dir=tmp_path))

    assert status == 0
    assert manifest['files'][0]['path'] == 'pi-scan-rabi_series.csv'
    plotdata = read_json(tmp_path / 'pi-scan-rabi_plotdata.json')
    assert np.all(np.array(plotdata['infidelity']) < 1e-8)
