##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Incoherent spin pumping by noise at the carrier, under a far detuned drive.

"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fastnoise import FitError, ParameterError
from fastnoise.experiments import step
from fastnoise.experiments.ensemble import EnsembleConfig, run_ensemble
from fastnoise.experiments.fitting import (LinearFit, PumpingFit, fit_exponential_saturation,
                                           fit_linear_through_origin, golden_rule_pumping_rate)
from fastnoise.experiments.reference import SpectralSettings, coupling_psd, reference_spectra, rpsd_values
from fastnoise.experiments.results import ExperimentOutput, SeriesTable, TimeSeriesResult, seed_summary
from fastnoise.experiments.single_qubit import CarrierTask, check_trace_covers, effective_ensemble
from fastnoise.noise import NoiseConfig
from fastnoise.quantum import DriveKind, DriveSpec, PropagationConfig

logger = logging.getLogger(__name__)

# the drive must be this many Rabi frequencies off resonance
MIN_DETUNING_RATIO = 5


@dataclass(frozen=True, eq=False)
class PumpingResult:
    """
    P_e(t) at one noise amplitude, its fitted rate, and the RPSD (Hz²/Hz) at the detuning.

    ``fit`` is None when the fit did not converge; the series is kept either way.

    """
    series: TimeSeriesResult
    fit: Optional[PumpingFit]
    rpsd_at_detuning: float
    amplitude: float = 1.0

    @property
    def psd_at_detuning(self) -> float:
        return coupling_psd(self.rpsd_at_detuning)

    @property
    def golden_rule_gamma(self) -> float:
        return golden_rule_pumping_rate(self.psd_at_detuning)


def _check_drive(rabi_hz, detuning_hz):
    if abs(detuning_hz) < MIN_DETUNING_RATIO * rabi_hz:
        raise ParameterError(f"pumping needs |detuning| >= {MIN_DETUNING_RATIO}·rabi, got {detuning_hz} Hz "
                             f"for {rabi_hz} Hz")
    return DriveSpec(DriveKind.CARRIER, rabi_hz, detuning_hz)


def _fit(times, means, label) -> Tuple[Optional[PumpingFit], List[str]]:
    try:
        fit = fit_exponential_saturation(times, means)
    except FitError as err:
        logger.warning(f"{label}: {err}")
        return None, [f"{label}: {err}"]
    logger.info(f"{label}: Γ = {fit.gamma:.4g} ± {fit.gamma_stderr:.2g} /s")
    return fit, []


def _pumping_ensemble(noise, spec, duration, amplitudes, ensemble, cfg, keep_state):
    check_trace_covers(noise, duration)
    task = CarrierTask(noise, spec, duration, cfg, tuple(amplitudes),
                       keep_state_seed=ensemble.base_seed if keep_state else None)
    task_result = run_ensemble(task, ensemble)
    return task_result, task_result.reduce('P_e'), task_result.records[0].values['times']


@step
def run_pumping(noise: NoiseConfig, rabi_hz: float, detuning_hz: float, duration: float,
                ensemble: EnsembleConfig, cfg: Optional[PropagationConfig] = None,
                settings: Optional[SpectralSettings] = None, amplitude: float = 1.0,
                keep_state: bool = False) -> PumpingResult:
    """
    Ensemble P_e(t) under a carrier drive detuned by Δ, fitted with P_e = 0.5·(1 - exp(-Γt)).

    """
    spec = _check_drive(rabi_hz, detuning_hz)
    cfg = cfg or PropagationConfig()
    settings = settings or SpectralSettings()
    ensemble = effective_ensemble(noise, ensemble, [amplitude])

    task_result, stats, times = _pumping_ensemble(noise, spec, duration, [amplitude], ensemble, cfg, keep_state)
    fit, warnings = _fit(times, stats.mean[0], 'pumping fit')
    rpsd, = rpsd_values(reference_spectra(noise, ensemble.seeds, rabi_hz, [amplitude], settings),
                        detuning_hz, settings)

    series = TimeSeriesResult(times, stats.mean[0], stats.stderr[0], 'P_e', stats.n, stats.seeds,
                              stats.failed_seeds, tuple(warnings), fit, task_result.first_state())
    return PumpingResult(series, fit, rpsd, amplitude)


def pumping_output(result: PumpingResult, name: str, rabi_hz: float, detuning_hz: float) -> ExperimentOutput:
    series = result.series
    fit = {'model': 'P_e = 0.5*(1 - exp(-gamma*t))', 'rabi_hz': rabi_hz, 'detuning_hz': detuning_hz,
           'fit': result.fit.to_dict() if result.fit else None, 'converged': result.fit is not None,
           'rpsd_at_detuning': result.rpsd_at_detuning, 'psd_at_detuning': result.psd_at_detuning,
           'golden_rule_gamma': result.golden_rule_gamma,
           'gamma_per_psd': result.fit.gamma / result.psd_at_detuning if result.fit and result.psd_at_detuning
           else None,
           'coherent_bound': rabi_hz ** 2 / (rabi_hz ** 2 + detuning_hz ** 2),
           **seed_summary(series.seeds, series.failed_seeds)}
    plotdata = {'t_s': series.times, 'P_e': series.means, 'stderr': series.stderrs}
    return ExperimentOutput(name, SeriesTable.single(series.times, series.means, series.stderrs, series.n), fit,
                            plotdata, series.warnings, final_state=series.final_state)


@dataclass(frozen=True, eq=False)
class PumpingScanResult:
    """
    Per amplitude: P_e(t), the fitted rate and the RPSD at the detuning; and the rate law Γ = slope·S(Δ)
    through the origin, S the coupling PSD.

    """
    amplitudes: np.ndarray
    times: np.ndarray
    means: np.ndarray
    stderrs: np.ndarray
    n: int
    rpsd: np.ndarray
    fits: Tuple[Optional[PumpingFit], ...]
    law: Optional[LinearFit]
    seeds: Tuple[int, ...]
    failed_seeds: Tuple[int, ...] = ()
    warnings: Tuple[str, ...] = ()
    final_state: Optional[np.ndarray] = None

    @property
    def psd(self) -> np.ndarray:
        return coupling_psd(self.rpsd)

    @property
    def gammas(self) -> np.ndarray:
        return np.array([f.gamma if f else np.nan for f in self.fits])

    @property
    def gamma_stderrs(self) -> np.ndarray:
        return np.array([f.gamma_stderr if f else np.nan for f in self.fits])


@step
def scan_pumping_rate(noise: NoiseConfig, amplitudes: Sequence[float], rabi_hz: float, detuning_hz: float,
                      duration: float, ensemble: EnsembleConfig, cfg: Optional[PropagationConfig] = None,
                      settings: Optional[SpectralSettings] = None, keep_state: bool = False) -> PumpingScanResult:
    """
    Fit Γ at each noise amplitude and the line Γ = slope·S(Δ) through the origin, S the coupling PSD of
    :func:`~fastnoise.experiments.reference.coupling_psd`.

    Amplitudes whose rate fit fails are left out of the line.

    """
    if len(amplitudes) < 3:
        raise ParameterError(f"at least 3 noise amplitudes are needed, got {len(amplitudes)}")
    spec = _check_drive(rabi_hz, detuning_hz)
    cfg = cfg or PropagationConfig()
    settings = settings or SpectralSettings()
    ensemble = effective_ensemble(noise, ensemble, amplitudes)

    task_result, stats, times = _pumping_ensemble(noise, spec, duration, amplitudes, ensemble, cfg, keep_state)
    fits, warnings = [], []
    for amplitude, means in zip(amplitudes, stats.mean):
        fit, fit_warnings = _fit(times, means, f"pumping fit at amplitude {amplitude}")
        fits.append(fit)
        warnings.extend(fit_warnings)

    rpsd = np.array(rpsd_values(reference_spectra(noise, ensemble.seeds, rabi_hz, amplitudes, settings),
                                detuning_hz, settings))
    gammas = np.array([f.gamma if f else np.nan for f in fits])
    usable = np.isfinite(gammas)
    try:
        law = fit_linear_through_origin(coupling_psd(rpsd[usable]), gammas[usable])
        logger.info(f"Γ per coupling PSD(Δ): slope {law.slope:.3g} ± {law.stderr:.2g}, r² {law.r_squared:.3f}")
    except FitError as err:
        logger.warning(f"pumping rate law: {err}")
        warnings.append(f"pumping rate law: {err}")
        law = None

    return PumpingScanResult(np.asarray(amplitudes, dtype=float), times, stats.mean, stats.stderr, stats.n, rpsd,
                             tuple(fits), law, stats.seeds, stats.failed_seeds, tuple(warnings),
                             task_result.first_state())


def pumping_scan_output(scan: PumpingScanResult, name: str, rabi_hz: float, detuning_hz: float) -> ExperimentOutput:
    fit = {'model': 'gamma = slope * psd(detuning), psd = (2 pi)^2 * rpsd / 4',
           'rabi_hz': rabi_hz, 'detuning_hz': detuning_hz,
           'law': scan.law.to_dict() if scan.law else None,
           'points': [{'amplitude': a, 'rpsd_at_detuning': r, 'psd_at_detuning': s,
                       'fit': f.to_dict() if f else None, 'golden_rule_gamma': golden_rule_pumping_rate(s)}
                      for a, r, s, f in zip(scan.amplitudes, scan.rpsd, scan.psd, scan.fits)],
           **seed_summary(scan.seeds, scan.failed_seeds)}
    plotdata = {'amplitude': scan.amplitudes, 'rpsd_at_detuning': scan.rpsd, 'psd_at_detuning': scan.psd,
                'gamma': scan.gammas, 'gamma_stderr': scan.gamma_stderrs, 't_s': scan.times, 'P_e': scan.means}
    table = SeriesTable.stacked('amplitude', scan.amplitudes, scan.times, scan.means, scan.stderrs, scan.n)
    return ExperimentOutput(name, table, fit, plotdata, scan.warnings, final_state=scan.final_state)
