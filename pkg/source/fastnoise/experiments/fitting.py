##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Fits of the empirical error laws.

"""
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit
from scipy.stats import linregress
from scipy.stats import t as student_t

from fastnoise import FitError

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95


def _check_points(x, y, n_params=1):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError(f"x and y must be 1-D and the same length, got {x.shape} and {y.shape}")
    if len(x) < 3 or len(x) <= n_params:
        raise FitError(f"at least 3 points are needed, got {len(x)}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError("fit data must be finite")
    return x, y


def r_squared(y: np.ndarray, residuals: np.ndarray) -> float:
    """Coefficient of determination about the mean of y; exactly 1 for a perfect fit of constant data."""
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_res == 0:
        return 1.0
    if ss_tot == 0:
        return 0.0
    return 1.0 - ss_res / ss_tot


@dataclass(frozen=True)
class LinearFit:
    """
    A straight line fit with its 95% confidence interval on the slope.

    """
    slope: float
    stderr: float
    r_squared: float
    ci_low: float
    ci_high: float
    n_points: int
    intercept: float = 0.0
    through_origin: bool = True

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def to_dict(self) -> Dict:
        return {'slope': self.slope, 'stderr': self.stderr, 'r_squared': self.r_squared,
                'ci95': [self.ci_low, self.ci_high], 'n_points': self.n_points, 'intercept': self.intercept,
                'through_origin': self.through_origin}


def fit_linear_through_origin(x, y) -> LinearFit:
    """
    Least squares y = slope·x, in closed form slope = Σxy/Σx².

    """
    x, y = _check_points(x, y)
    sxx = float(np.sum(x * x))
    if sxx == 0:
        raise FitError("all x are zero, the slope is undetermined")

    slope = float(np.sum(x * y)) / sxx
    residuals = y - slope * x
    dof = len(x) - 1
    stderr = math.sqrt(float(np.sum(residuals ** 2)) / dof / sxx)
    half_width = student_t.ppf(0.5 + CONFIDENCE / 2, dof) * stderr
    return LinearFit(slope, stderr, r_squared(y, residuals), slope - half_width, slope + half_width, len(x))


def fit_linear(x, y) -> LinearFit:
    """Ordinary least squares with an intercept."""
    x, y = _check_points(x, y, n_params=2)
    if np.all(x == x[0]):
        raise FitError("all x are equal, the slope is undetermined")

    result = linregress(x, y)
    residuals = y - (result.intercept + result.slope * x)
    half_width = student_t.ppf(0.5 + CONFIDENCE / 2, len(x) - 2) * result.stderr
    return LinearFit(float(result.slope), float(result.stderr), r_squared(y, residuals),
                     float(result.slope - half_width), float(result.slope + half_width), len(x),
                     intercept=float(result.intercept), through_origin=False)


@dataclass(frozen=True)
class PumpingFit:
    """
    The rate Γ of P_e = 0.5·(1 - exp(-Γt)).

    """
    gamma: float
    gamma_stderr: float
    r_squared: float

    def __post_init__(self):
        if self.gamma < 0:
            raise FitError(f"negative pumping rate {self.gamma}")

    def to_dict(self) -> Dict:
        return {'gamma': self.gamma, 'gamma_stderr': self.gamma_stderr, 'r_squared': self.r_squared}


def saturation_model(t, gamma):
    return 0.5 * (1.0 - np.exp(-gamma * t))


def _initial_rate(times, values):
    # invert the model point by point, keeping away from the log singularity at saturation
    mask = times > 0
    if not np.any(mask):
        return 0.0
    fraction = np.clip(2 * values[mask], 0.0, 0.99)
    return float(np.median(-np.log1p(-fraction) / times[mask]))


def _curve_fit(model, times, values, p0, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter('error', OptimizeWarning)
        try:
            return curve_fit(model, times, values, p0=p0, **kwargs)
        except (RuntimeError, OptimizeWarning, ValueError) as err:
            raise FitError(f"fit did not converge: {err}")


def fit_exponential_saturation(times, values) -> PumpingFit:
    """
    Damped least squares (Levenberg-Marquardt) fit of 0.5·(1 - exp(-Γt)).

    A negative Γ from the unconstrained fit is refitted with Γ ≥ 0.

    """
    times, values = _check_points(times, values)
    if np.all(times == times[0]):
        raise FitError("all times are equal")

    p0 = [_initial_rate(times, values)]
    popt, pcov = _curve_fit(saturation_model, times, values, p0, method='lm', maxfev=10000)
    if popt[0] < 0:
        popt, pcov = _curve_fit(saturation_model, times, values, [0.0], bounds=(0.0, np.inf), method='trf')

    stderr = float(np.sqrt(pcov[0, 0]))
    if not math.isfinite(stderr):
        raise FitError("degenerate data, the rate's uncertainty is undefined")
    gamma = max(0.0, float(popt[0]))
    residuals = values - saturation_model(times, gamma)
    return PumpingFit(gamma, stderr, r_squared(values, residuals))


@dataclass(frozen=True)
class DampedRabiFit:
    """Envelope decay rate γ (1/s) and frequency (Hz) of 0.5 - 0.5·exp(-γt)·cos(2πft)."""
    decay_rate: float
    decay_stderr: float
    frequency: float
    r_squared: float

    def to_dict(self) -> Dict:
        return {'decay_rate': self.decay_rate, 'decay_stderr': self.decay_stderr, 'frequency': self.frequency,
                'r_squared': self.r_squared}


def damped_rabi_model(t, decay_rate, frequency):
    return 0.5 - 0.5 * np.exp(-decay_rate * t) * np.cos(2 * np.pi * frequency * t)


def fit_damped_rabi(times, values, rabi_hz: float) -> DampedRabiFit:
    """
    Fit the decaying Rabi oscillation, starting from the nominal Rabi frequency.

    """
    times, values = _check_points(times, values, n_params=2)
    popt, pcov = _curve_fit(damped_rabi_model, times, values, [1.0 / (10 * times[-1]), rabi_hz],
                            bounds=([0.0, 0.5 * rabi_hz], [np.inf, 2.0 * rabi_hz]), method='trf')
    residuals = values - damped_rabi_model(times, *popt)
    return DampedRabiFit(float(popt[0]), float(np.sqrt(pcov[0, 0])), float(popt[1]), r_squared(values, residuals))


def golden_rule_pumping_rate(coupling_psd: float) -> float:
    """Γ = 2·S(Δ), S the coupling PSD of :func:`~fastnoise.experiments.reference.coupling_psd`, one rate each way."""
    return 2.0 * coupling_psd


def golden_rule_gate_error(angular_rpsd: float, gate_time: float) -> float:
    """
    1 - F = RPSD(ν)·T for the RPSD with Ω in rad/s.

    Each of the two ions flips at RPSD/4 from each of the two tones.

    """
    return angular_rpsd * gate_time
