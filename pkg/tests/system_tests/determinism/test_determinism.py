# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################
"""
Equal seeds give byte-identical output files, whatever the worker count.

"""
import pytest

from fastnoise.config import parse_config
from fastnoise.run import run

pytestmark = pytest.mark.filterwarnings("ignore:_metric_send_conn not set")

NOISE = {'noise': {'h0': 1000.0, 'leak': 1e-4, 'n_samples': 4096}}


def hashes(manifest):
    return {f['path']: f['sha256'] for f in manifest['files']}


def run_into(out_dir, experiment, jobs=1, seed=None, **params):
    config = parse_config(dict(NOISE, experiment=experiment, ensemble={'n_realizations': 3}, params=params),
                          output_dir=out_dir, jobs=jobs, seed=seed)
    status, manifest = run(config)
    assert status == 0
    assert manifest['status'] == 'ok'
    return manifest


@pytest.mark.parametrize('experiment,params', [
    ('noise-only', {}),
    ('rabi', {'duration': 20e-6}),
])
def test_repeatable(tmp_path, experiment, params):
    first = run_into(tmp_path / 'first', experiment, **params)
    second = run_into(tmp_path / 'second', experiment, **params)
    assert hashes(first) == hashes(second)


@pytest.mark.parametrize('experiment,params', [
    ('noise-only', {}),
    ('rabi', {'duration': 20e-6}),
])
def test_worker_count_does_not_matter(tmp_path, experiment, params):
    serial = run_into(tmp_path / 'serial', experiment, jobs=1, **params)
    parallel = run_into(tmp_path / 'parallel', experiment, jobs=2, **params)
    assert hashes(serial) == hashes(parallel)


def test_seed_matters(tmp_path):
    first = hashes(run_into(tmp_path / 'first', 'noise-only', seed=1))
    second = hashes(run_into(tmp_path / 'second', 'noise-only', seed=2))
    assert first.keys() == second.keys()
    assert first['noise-only_trace.f64'] != second['noise-only_trace.f64']
    assert first['noise-only_series.csv'] != second['noise-only_series.csv']
