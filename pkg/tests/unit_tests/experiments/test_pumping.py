import numpy as np
import pytest

from fastnoise import ParameterError
from fastnoise.experiments.pumping import pumping_output, pumping_scan_output, run_pumping, scan_pumping_rate


pytestmark = pytest.mark.filterwarnings("ignore:_metric_send_conn not set")


class Test_run_pumping(object):

    def test_detuning_too_small(self, servo_noise, small_ensemble):
        with pytest.raises(ParameterError):
            run_pumping(servo_noise, 20e3, 90e3, 1e-3, small_ensemble)

    def test_noise_free_stays_coherent(self, silent_noise, small_ensemble):
        result = run_pumping(silent_noise, 20e3, 200e3, 1e-3, small_ensemble)

        # off-resonant Rabi flopping never exceeds Ω²/(Ω² + Δ²)
        assert result.series.n == 1
        assert np.max(result.series.means) <= 20e3 ** 2 / (20e3 ** 2 + 200e3 ** 2) + 1e-9

    def test_noise_pumps(self, servo_noise, small_ensemble, tmp_path):
        result = run_pumping(servo_noise, 20e3, 200e3, 1e-3, small_ensemble, keep_state=True)

        assert result.series.means[-1] > 0.05
        assert result.rpsd_at_detuning > 0
        assert result.fit is not None and result.fit.gamma > 0
        assert result.series.final_state is not None

        output = pumping_output(result, 'pumping', 20e3, 200e3)
        assert output.fit['converged']
        assert output.fit['golden_rule_gamma'] == pytest.approx(2 * np.pi ** 2 * result.rpsd_at_detuning)
        assert output.fit['coherent_bound'] == pytest.approx(1 / 101)


class Test_scan_pumping_rate(object):

    def test_too_few_amplitudes(self, servo_noise, small_ensemble):
        with pytest.raises(ParameterError):
            scan_pumping_rate(servo_noise, [1.0, 2.0], 20e3, 200e3, 1e-3, small_ensemble)

    def test_rate_law(self, servo_noise, small_ensemble):
        scan = scan_pumping_rate(servo_noise, [0.5, 1.0, 1.5], 20e3, 200e3, 1e-3, small_ensemble)

        assert scan.means.shape == (3, len(scan.times))
        assert np.all(np.diff(scan.rpsd) > 0)
        assert np.all(np.isfinite(scan.gammas))
        # the law is fitted against the coupling PSD, (2π)²/4 times the RPSD
        assert scan.psd == pytest.approx(np.pi ** 2 * scan.rpsd)
        assert scan.law is not None and scan.law.slope > 0

        output = pumping_scan_output(scan, 'pumping-scan', 20e3, 200e3)
        assert [p['amplitude'] for p in output.fit['points']] == [0.5, 1.0, 1.5]
        assert len(output.table.x) == 3 * len(scan.times)
