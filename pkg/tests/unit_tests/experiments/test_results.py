import json
import math

import numpy as np
import pytest

from fastnoise import ParameterError
from fastnoise.experiments.results import (ExperimentOutput, GateResult, SeriesTable, TimeSeriesResult,
                                           canonical_json, jsonable, seed_summary)
from fastnoise.noise import silent_trace
from fastnoise.spectral import PowerSpectrum


class TestSeriesTable(object):

    def test_single(self, tmp_path):
        table = SeriesTable.single([0.0, 1.0], [0.25, 0.5], [0.0, 0.1], 3)
        table.write(tmp_path / 'series.csv')

        lines = (tmp_path / 'series.csv').read_text().splitlines()
        assert lines[0] == 'x,mean,stderr,n'
        assert lines[2] == '1,0.5,0.10000000000000001,3'

    def test_stacked(self, tmp_path):
        table = SeriesTable.stacked('amplitude', [1.0, 2.0], [10.0, 20.0], [[1, 2], [3, 4]], [[0, 0], [0, 0]], 5)
        assert np.array_equal(table.series, [1, 1, 2, 2])
        assert np.array_equal(table.x, [10, 20, 10, 20])
        assert np.array_equal(table.mean, [1, 2, 3, 4])

        table.write(tmp_path / 'series.csv')
        data = np.loadtxt(tmp_path / 'series.csv', delimiter=',', skiprows=1)
        assert data.shape == (4, 5)
        assert (tmp_path / 'series.csv').read_text().startswith('amplitude,x,mean,stderr,n')


class Test_jsonable(object):

    def test_numpy(self):
        assert jsonable({'a': np.arange(3), 'b': np.float64(0.5), 1: (np.int64(2), )}) == \
            {'a': [0, 1, 2], 'b': 0.5, '1': [2]}

    def test_non_finite(self):
        assert jsonable([math.nan, math.inf, 1.0]) == [None, None, 1.0]

    def test_canonical(self):
        text = canonical_json({'b': 1, 'a': [1.5]})
        assert text == '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'


class TestResults(object):

    def test_time_series_lengths(self):
        with pytest.raises(ParameterError):
            TimeSeriesResult(np.arange(3), np.zeros(2), np.zeros(3), 'P_e', 1)

    def test_time_series_ascending(self):
        with pytest.raises(ParameterError):
            TimeSeriesResult(np.array([0, 2, 1]), np.zeros(3), np.zeros(3), 'P_e', 1)

    def test_gate_fidelity_range(self):
        with pytest.raises(ParameterError):
            GateResult(1.2, 0.0, 1e-4, 1.0, np.array([1.2]))

    def test_gate_infidelity(self):
        gate = GateResult(0.99, 0.001, 1e-4, 1.0, np.array([0.99]))
        assert gate.infidelity == pytest.approx(0.01)
        assert gate.to_dict()['gate_time'] == 1e-4

    def test_seed_summary(self):
        assert seed_summary([3, 1, 2], [4]) == {'n': 3, 'seed_range': [1, 3], 'seeds': [3, 1, 2],
                                                'failed_seeds': [4]}
        assert seed_summary([])['seed_range'] is None


class TestExperimentOutput(object):

    def test_write(self, tmp_path):
        output = ExperimentOutput('rabi', SeriesTable.single([0.0], [0.0], [0.0], 1), {'slope': np.float64(2.0)},
                                  {'t_s': np.zeros(2)}, warnings=('fit failed', ))
        paths = output.write(lambda name: tmp_path / name)

        assert [p.name for p in paths] == ['rabi_series.csv', 'rabi_fit.json', 'rabi_plotdata.json']
        fit = json.loads((tmp_path / 'rabi_fit.json').read_text())
        assert fit == {'slope': 2.0, 'warnings': ['fit failed']}

    def test_write_spectra_and_trace(self, tmp_path):
        psd = PowerSpectrum(np.array([0.0, 1.0]), np.array([1.0, 2.0]), 1.0, 4, (7, ))
        output = ExperimentOutput('noise-only', SeriesTable.single([0.0], [0.0], [0.0], 1), {},
                                  spectra={'_psd.csv': psd}, trace=silent_trace(4, 1e-7))
        paths = output.write(lambda name: tmp_path / name)

        assert [p.name for p in paths] == ['noise-only_series.csv', 'noise-only_fit.json', 'noise-only_psd.csv',
                                           'noise-only_psd.csv.json', 'noise-only_trace.f64',
                                           'noise-only_trace.f64.json']
