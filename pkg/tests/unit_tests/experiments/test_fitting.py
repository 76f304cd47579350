import numpy as np
import pytest

from fastnoise import FitError
from fastnoise.experiments.fitting import (PumpingFit, damped_rabi_model, fit_damped_rabi, fit_exponential_saturation,
                                           fit_linear, fit_linear_through_origin, golden_rule_gate_error,
                                           golden_rule_pumping_rate, r_squared, saturation_model)


class Test_fit_linear_through_origin(object):

    def test_exact(self):
        fit = fit_linear_through_origin([1, 2, 3, 4], [2, 4, 6, 8])
        assert fit.slope == pytest.approx(2.0)
        assert fit.stderr == pytest.approx(0.0)
        assert fit.r_squared == 1.0
        assert fit.ci_low == pytest.approx(2.0) and fit.ci_high == pytest.approx(2.0)
        assert fit.through_origin

    def test_noisy(self):
        rng = np.random.default_rng(0)
        x = np.linspace(1, 10, 30)
        fit = fit_linear_through_origin(x, 3 * x + rng.normal(0, 0.1, x.shape))

        assert fit.slope == pytest.approx(3.0, rel=0.01)
        assert fit.ci_low < 3.0 < fit.ci_high
        assert fit.r_squared > 0.99
        assert fit.n_points == 30

    @pytest.mark.parametrize('x, y', [
        ([1, 2], [1, 2]),
        ([0, 0, 0], [1, 2, 3]),
        ([1, 2, np.nan], [1, 2, 3]),
        ([1, 2, 3], [1, 2]),
    ])
    def test_bad_data(self, x, y):
        with pytest.raises(FitError):
            fit_linear_through_origin(x, y)


class Test_fit_linear(object):

    def test_intercept(self):
        fit = fit_linear([2, 3, 4, 5], [5, 7, 9, 11])
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert not fit.through_origin
        assert np.allclose(fit.predict([0, 10]), [1, 21])

    def test_constant_x(self):
        with pytest.raises(FitError):
            fit_linear([1, 1, 1], [1, 2, 3])

    def test_to_dict(self):
        fit = fit_linear([2, 3, 4, 5], [5, 7, 9, 11])
        assert fit.to_dict()['ci95'] == [fit.ci_low, fit.ci_high]


class Test_r_squared(object):

    def test_constant_data(self):
        y = np.ones(4)
        assert r_squared(y, np.zeros(4)) == 1.0
        assert r_squared(y, np.full(4, 0.1)) == 0.0


class Test_fit_exponential_saturation(object):

    def test_recovers_rate(self):
        rng = np.random.default_rng(1)
        times = np.linspace(0, 1e-3, 60)
        values = saturation_model(times, 3000.0) + rng.normal(0, 1e-3, times.shape)

        fit = fit_exponential_saturation(times, values)

        assert fit.gamma == pytest.approx(3000.0, rel=0.02)
        assert 0 < fit.gamma_stderr < 100
        assert fit.r_squared > 0.99

    def test_equal_times(self):
        with pytest.raises(FitError):
            fit_exponential_saturation([1e-3] * 4, [0.1, 0.2, 0.3, 0.4])

    def test_negative_rate(self):
        with pytest.raises(FitError):
            PumpingFit(-1.0, 0.1, 0.9)


class Test_fit_damped_rabi(object):

    def test_recovers_decay(self):
        times = np.linspace(0, 500e-6, 501)
        values = damped_rabi_model(times, 2000.0, 10e3)

        fit = fit_damped_rabi(times, values, 10e3)

        assert fit.decay_rate == pytest.approx(2000.0, rel=1e-3)
        assert fit.frequency == pytest.approx(10e3, rel=1e-6)


class TestGoldenRule(object):

    def test_pumping(self):
        assert golden_rule_pumping_rate(2.0) == pytest.approx(4.0)

    def test_gate_error(self):
        assert golden_rule_gate_error(1.0, 100e-6) == pytest.approx(1e-4)
