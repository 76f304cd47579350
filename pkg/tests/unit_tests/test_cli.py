import json
from unittest import mock

from fastnoise.cli import cli_fastnoise


def cli_kwargs(**kwargs):
    '''Arguments as the argument parser would return them.'''
    defaults = {'experiment': 'noise-only', 'config': None, 'out': None, 'jobs': None, 'seed': None,
                'paper_scale': False, 'dry_run': False, 'dump_trace': None, 'dump_state': None, 'verbose': False}
    return {**defaults, **kwargs}


class TestCli(object):

    def test_dry_run(self, capsys, tmp_path):
        assert cli_fastnoise(cli_kwargs(dry_run=True, seed=5, out=tmp_path)) == 0

        echo = json.loads(capsys.readouterr().out)
        assert echo['experiment'] == 'noise-only'
        assert echo['ensemble']['base_seed'] == 5
        # nothing is written
        assert list(tmp_path.iterdir()) == []

    def test_invalid_config(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text(json.dumps({'noise': {'h0': 'lots'}}))
        assert cli_fastnoise(cli_kwargs(config=path)) == 2

    def test_missing_param(self):
        assert cli_fastnoise(cli_kwargs(experiment='rabi')) == 2

    def test_overrides_reach_run(self, tmp_path):
        path = tmp_path / 'run.toml'
        path.write_text('[params]\nduration = 1e-5\n')
        with mock.patch('fastnoise.cli.run', return_value=(0, {})) as mock_run:
            status = cli_fastnoise(cli_kwargs(experiment='rabi', config=path, out=tmp_path / 'out', jobs=2,
                                              paper_scale=True, verbose=True))

        assert status == 0
        config = mock_run.call_args[0][0]
        assert config.output_dir == tmp_path / 'out'
        assert config.ensemble.max_parallel == 2
        assert config.ensemble.n_realizations == 1000
        assert mock_run.call_args[1]['verbose']

    def test_run(self, tmp_path):
        path = tmp_path / 'noise.json'
        path.write_text(json.dumps({'noise': {'h0': 100.0, 'leak': 1e-4, 'n_samples': 4096},
                                    'servo': {'enabled': False}, 'ensemble': {'n_realizations': 2}}))

        status = cli_fastnoise(cli_kwargs(config=path, out=tmp_path / 'out', jobs=1))

        assert status == 0
        manifest = json.loads((tmp_path / 'out' / 'manifest.json').read_text())
        assert [f['path'] for f in manifest['files']] == [
            'noise-only_series.csv', 'noise-only_fit.json', 'noise-only_plotdata.json', 'noise-only_psd.csv',
            'noise-only_psd.csv.json', 'noise-only_rpsd.csv', 'noise-only_rpsd.csv.json', 'noise-only_trace.f64',
            'noise-only_trace.f64.json']
