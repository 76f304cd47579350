import json
from pathlib import Path

import pytest

from fastnoise import ConfigError, NumericalFailure
from fastnoise.config import parse_config
from fastnoise.constants import DIAGNOSTIC_FILES
from fastnoise.run_context import RunContext, error_record, final_path
from fastnoise.util import file_checksum


@pytest.fixture(name="config")
def fixture_config():
    return parse_config({'experiment': 'noise-only', 'ensemble': {'n_realizations': 2, 'max_parallel': 1}})


class Test_final_path(object):

    def test_output(self):
        assert final_path(Path('run/a_fit.json.partial')) == Path('run/a_fit.json')

    def test_sidecar(self):
        assert final_path(Path('run/a_psd.csv.partial.json')) == Path('run/a_psd.csv.json')


class Test_error_record(object):

    def test_config_error(self):
        record = error_record(ConfigError('must be > 0', 'params.duration'))
        assert record == {'error_type': 'ConfigError', 'message': 'params.duration: must be > 0',
                          'key': 'params.duration'}

    def test_numerical_failure(self):
        assert error_record(NumericalFailure('non-finite amplitudes', step=12))['step'] == 12

    def test_seeds(self):
        err = RuntimeError('all failed')
        err.seeds = [1, 2]
        assert error_record(err)['seeds'] == [1, 2]


class TestRunContext(object):

    def test_success(self, config, tmp_path):
        with RunContext(config, run_dir=tmp_path) as context:
            path = context.path_for('noise-only_fit.json')
            assert path.name == 'noise-only_fit.json.partial'
            path.write_text('{}\n')
            context.add_outputs([path])

        assert context.status == 0
        assert not path.exists()
        output = tmp_path / 'noise-only_fit.json'
        assert output.exists()

        manifest = json.loads((tmp_path / 'manifest.json').read_text())
        assert manifest == context.manifest
        assert manifest['status'] == 'ok'
        assert manifest['files'] == [{'path': 'noise-only_fit.json', 'sha256': file_checksum(output).file_hash}]
        assert manifest['config'] == config.science_dict()
        assert 'log.txt' in manifest['diagnostics']
        assert 'metrics/metrics.json' in manifest['diagnostics']
        assert 'error' not in manifest

    def test_failure_keeps_partials(self, config, tmp_path):
        with RunContext(config, run_dir=tmp_path) as context:
            path = context.path_for('noise-only_series.csv')
            path.write_text('x\n')
            context.add_outputs([path])
            raise NumericalFailure('non-finite amplitudes', step=3)

        assert context.status == 1
        assert path.exists()
        error = json.loads((tmp_path / 'error.json').read_text())
        assert error == {'error_type': 'NumericalFailure', 'message': 'non-finite amplitudes (step 3)', 'step': 3}
        assert context.manifest['status'] == 'failed'
        assert context.manifest['error'] == 'error.json'
        assert 'error.json' in context.manifest['diagnostics']
        assert context.manifest['files'][0]['path'] == 'noise-only_series.csv.partial'

    def test_whole_ensemble_failure(self, config, tmp_path):
        with RunContext(config, run_dir=tmp_path) as context:
            raise RuntimeError('2 error(s) found during noise spectra')
        assert context.status == 1

    def test_bugs_propagate(self, config, tmp_path):
        with pytest.raises(KeyError):
            with RunContext(config, run_dir=tmp_path):
                raise KeyError('oops')
        assert (tmp_path / 'manifest.json').exists()

    def test_default_folder(self, config, tmp_path, monkeypatch):
        monkeypatch.setenv('FASTNOISE_WORKSPACE', str(tmp_path))
        assert RunContext(config).run_dir == tmp_path / 'noise-only'

    def test_diagnostics(self, config, tmp_path):
        with RunContext(config, run_dir=tmp_path) as context:
            dump = tmp_path / 'dumps' / 'state.json'
            dump.parent.mkdir()
            dump.write_text('{}')
            context.artefact_store.add_diagnostics([dump])

        assert context.artefact_store[DIAGNOSTIC_FILES] == [dump]
        assert 'dumps/state.json' in context.manifest['diagnostics']
        # diagnostics are not hashed
        assert context.manifest['files'] == []
