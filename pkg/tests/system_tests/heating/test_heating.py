# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################
import json

import numpy as np
import pytest

from fastnoise.config import parse_config
from fastnoise.quantum import mean_phonons
from fastnoise.quantum.state import read_state
from fastnoise.run import run

pytestmark = pytest.mark.filterwarnings("ignore:_metric_send_conn not set")


def read_json(path):
    return json.loads(path.read_text())


def test_noise_free_cycles(tmp_path):
    document = {'experiment': 'heating', 'noise': {'h0': 0.0, 'n_samples': 10001}, 'params': {'n_cycles': 3}}
    config = parse_config(document, output_dir=tmp_path / 'run')
    status, manifest = run(config, dump_state=tmp_path / 'state.json')
    assert status == 0

    fit = read_json(tmp_path / 'run' / 'heating_fit.json')
    assert fit['cycle_time_s'] == pytest.approx(1 / 3e3)
    assert fit['detuning_hz'] == pytest.approx(np.sqrt(200e3 ** 2 - 20e3 ** 2))

    plotdata = read_json(tmp_path / 'run' / 'heating_plotdata.json')
    assert plotdata['cycle'] == [1, 2, 3]
    # whole sideband cycles return the ion to |g,0⟩
    assert np.all(np.array(plotdata['n_mean']) <= 0.05)

    state = read_state(tmp_path / 'state.json')
    assert state.fock_cutoff == 15
    assert mean_phonons(state) == pytest.approx(plotdata['n_mean'][-1], abs=1e-9)
    assert str(tmp_path / 'state.json') in manifest['diagnostics']


@pytest.mark.slow
def test_noise_heats(tmp_path):
    document = {
        'experiment': 'heating',
        'noise': {'h0': 1000.0, 'leak': 1e-4, 'n_samples': 2 ** 15},
        'servo': {'unity_gain_freq': 200e3, 'gain_db': 80.0, 'bump_quality': 2.0},
        'drive': {'fock_cutoff': 10},
        'ensemble': {'n_realizations': 16, 'max_parallel': 4},
        'params': {'n_cycles': [1, 2, 3, 4, 5, 6, 7, 8]},
    }
    status, _ = run(parse_config(document, output_dir=tmp_path))
    assert status == 0

    fit = read_json(tmp_path / 'heating_fit.json')
    assert fit['fit']['slope'] > 0
    # linear from the second cycle on
    assert fit['fit']['r_squared'] >= 0.8

    plotdata = read_json(tmp_path / 'heating_plotdata.json')
    n_mean = np.array(plotdata['n_mean'])
    stderr = np.array(plotdata['stderr'])
    assert n_mean[-1] > n_mean[0]
    # non-decreasing within two standard errors
    assert np.all(np.diff(n_mean) >= -2 * np.hypot(stderr[1:], stderr[:-1]))
