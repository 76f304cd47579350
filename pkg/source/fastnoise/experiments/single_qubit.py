##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Resonant carrier drives: Rabi decay and π-pulse infidelity scans.

"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fastnoise import FitError, ParameterError
from fastnoise.experiments import step
from fastnoise.experiments.ensemble import EnsembleConfig, EnsembleRun, RealizationTask, run_ensemble
from fastnoise.experiments.fitting import LinearFit, fit_damped_rabi, fit_linear_through_origin
from fastnoise.experiments.reference import SpectralSettings, angular_rpsd, reference_spectra, rpsd_values
from fastnoise.experiments.results import ExperimentOutput, SeriesTable, TimeSeriesResult, seed_summary
from fastnoise.noise import NoiseConfig
from fastnoise.quantum import (DriveKind, DriveSpec, PropagationConfig, excited_population, initial_state,
                               propagate)

logger = logging.getLogger(__name__)


def pi_time(rabi_hz: float) -> float:
    """t_π = 1/(2Ω), with Ω in Hz."""
    return 1.0 / (2.0 * rabi_hz)


def effective_ensemble(noise: NoiseConfig, ensemble: EnsembleConfig, amplitudes: Sequence[float] = (1.0,)):
    """Without noise every realization is the same, so only one is run."""
    if noise.is_silent or not any(amplitudes):
        return ensemble.single()
    return ensemble


def check_trace_covers(noise: NoiseConfig, duration: float):
    span = (noise.params.n_samples - 1) * noise.params.dt
    if duration > span * (1 + 1e-9):
        raise ParameterError(f"a {duration} s drive needs a longer trace than the {span} s from n_samples")


@dataclass(frozen=True)
class CarrierTask(RealizationTask):
    """P_e(t) of a carrier drive, at each noise amplitude."""
    noise: NoiseConfig
    spec: DriveSpec
    duration: float
    cfg: PropagationConfig
    amplitudes: Tuple[float, ...] = (1.0,)
    keep_state_seed: Optional[int] = None

    label = 'carrier drive'

    def run(self, seed: int) -> Dict[str, np.ndarray]:
        trace = self.noise.synthesize(seed)
        observable = excited_population(self.spec)
        populations = []
        final_state = None
        for amplitude in self.amplitudes:
            trajectory = propagate(initial_state(self.spec), self.spec, trace.scaled(amplitude), self.duration,
                                   self.cfg, [observable])
            populations.append(trajectory[observable.name])
            if final_state is None:
                final_state = trajectory.final_state.amplitudes

        values = {'times': trajectory.times, 'P_e': np.array(populations)}
        if seed == self.keep_state_seed:
            values['final_state'] = final_state
        return values


@dataclass(frozen=True)
class PiPulseTask(RealizationTask):
    """Final P_e after a resonant π pulse, for every Rabi frequency and amplitude, on one trace."""
    noise: NoiseConfig
    rabi_list: Tuple[float, ...]
    cfg: PropagationConfig
    amplitudes: Tuple[float, ...] = (1.0,)
    keep_state_seed: Optional[int] = None

    label = 'pi pulses'

    def run(self, seed: int) -> Dict[str, np.ndarray]:
        trace = self.noise.synthesize(seed)
        populations = np.empty((len(self.amplitudes), len(self.rabi_list)))
        final_state = None
        for j, rabi_hz in enumerate(self.rabi_list):
            spec = DriveSpec(DriveKind.CARRIER, rabi_hz)
            observable = excited_population(spec)
            for i, amplitude in enumerate(self.amplitudes):
                state = propagate(initial_state(spec), spec, trace.scaled(amplitude), pi_time(rabi_hz),
                                  self.cfg).final_state
                populations[i, j] = observable.expectation(state.amplitudes)
                if final_state is None:
                    final_state = state.amplitudes

        values = {'P_e': populations}
        if seed == self.keep_state_seed:
            values['final_state'] = final_state
        return values


@step
def run_rabi_decay(noise: NoiseConfig, rabi_hz: float, duration: float, ensemble: EnsembleConfig,
                   cfg: Optional[PropagationConfig] = None, keep_state: bool = False) -> TimeSeriesResult:
    """
    Ensemble P_e(t) of a resonant carrier drive, with a fresh noise realization per seed.

    The series carries a :class:`~fastnoise.experiments.fitting.DampedRabiFit` of its decay, or None when the fit
    fails.

    """
    cfg = cfg or PropagationConfig()
    check_trace_covers(noise, duration)
    spec = DriveSpec(DriveKind.CARRIER, rabi_hz)
    ensemble = effective_ensemble(noise, ensemble)

    task = CarrierTask(noise, spec, duration, cfg, keep_state_seed=ensemble.base_seed if keep_state else None)
    result = run_ensemble(task, ensemble)
    stats = result.reduce('P_e')
    times = result.records[0].values['times']

    warnings = []
    try:
        fit = fit_damped_rabi(times, stats.mean[0], rabi_hz)
    except FitError as err:
        logger.warning(f"damped Rabi fit failed: {err}")
        warnings.append(f"damped Rabi fit failed: {err}")
        fit = None

    return TimeSeriesResult(times, stats.mean[0], stats.stderr[0], 'P_e', stats.n, stats.seeds, stats.failed_seeds,
                            tuple(warnings), fit, result.first_state())


def rabi_output(series: TimeSeriesResult, name: str) -> ExperimentOutput:
    fit = {'model': '0.5 - 0.5*exp(-decay_rate*t)*cos(2*pi*frequency*t)',
           'fit': series.fit.to_dict() if series.fit else None,
           **seed_summary(series.seeds, series.failed_seeds)}
    plotdata = {'t_s': series.times, 'P_e': series.means, 'stderr': series.stderrs}
    return ExperimentOutput(name, SeriesTable.single(series.times, series.means, series.stderrs, series.n), fit,
                            plotdata, series.warnings, final_state=series.final_state)


@dataclass(frozen=True, eq=False)
class PiScanResult:
    """
    π-pulse infidelities, indexed [amplitude, Rabi frequency].

    """
    rabi_hz: np.ndarray
    amplitudes: np.ndarray
    infidelity: np.ndarray
    stderr: np.ndarray
    n: int
    seeds: Tuple[int, ...]
    failed_seeds: Tuple[int, ...] = ()
    rpsd: Optional[np.ndarray] = None
    fit: Optional[LinearFit] = None
    final_state: Optional[np.ndarray] = None

    @property
    def worst_rabi_hz(self) -> float:
        """The Rabi frequency with the largest infidelity at the first amplitude."""
        return float(self.rabi_hz[np.argmax(self.infidelity[0])])

    @property
    def scaling_x(self) -> Optional[np.ndarray]:
        """RPSD(Ω)·t_π per amplitude, the RPSD in rad²/s²/Hz."""
        if self.rpsd is None:
            return None
        return angular_rpsd(self.rpsd) * pi_time(self.rabi_hz[0])


def _pi_scan(noise, rabi_list, amplitudes, ensemble, cfg, keep_state) -> Tuple[EnsembleRun, np.ndarray, np.ndarray]:
    for rabi_hz in rabi_list:
        if not rabi_hz > 0:
            raise ParameterError(f"Rabi frequencies must be > 0, got {rabi_hz}")
        if rabi_hz >= noise.params.sample_rate / 8:
            raise ParameterError(f"Rabi frequency {rabi_hz} Hz must be below a quarter of the trace's Nyquist "
                                 f"frequency ({noise.params.sample_rate / 8} Hz)")
    check_trace_covers(noise, pi_time(min(rabi_list)))

    task = PiPulseTask(noise, tuple(rabi_list), cfg, tuple(amplitudes),
                       keep_state_seed=ensemble.base_seed if keep_state else None)
    result = run_ensemble(task, ensemble)
    stats = result.reduce('P_e')
    return result, 1.0 - stats.mean, stats.stderr


@step
def scan_pi_error_vs_rabi(noise: NoiseConfig, rabi_list: Sequence[float], ensemble: EnsembleConfig,
                          cfg: Optional[PropagationConfig] = None, keep_state: bool = False) -> PiScanResult:
    """
    1 - P_e(t_π) for each Rabi frequency, every frequency seeing the same realizations.

    """
    cfg = cfg or PropagationConfig()
    ensemble = effective_ensemble(noise, ensemble)
    result, infidelity, stderr = _pi_scan(noise, rabi_list, (1.0,), ensemble, cfg, keep_state)
    return PiScanResult(np.asarray(rabi_list, dtype=float), np.array([1.0]), infidelity, stderr, len(result.records),
                        tuple(result.seeds), tuple(result.failed_seeds), final_state=result.first_state())


def pi_scan_rabi_output(scan: PiScanResult, name: str, noise: NoiseConfig) -> ExperimentOutput:
    fit = {'worst_rabi_hz': scan.worst_rabi_hz,
           'bump_peak_hz': noise.bump_peak() if noise.shape.enabled and not noise.is_silent else None,
           **seed_summary(scan.seeds, scan.failed_seeds)}
    if fit['bump_peak_hz']:
        fit['worst_below_bump'] = bool(scan.worst_rabi_hz < fit['bump_peak_hz'])
    plotdata = {'rabi_hz': scan.rabi_hz, 'infidelity': scan.infidelity[0], 'stderr': scan.stderr[0]}
    table = SeriesTable.single(scan.rabi_hz, scan.infidelity[0], scan.stderr[0], scan.n)
    return ExperimentOutput(name, table, fit, plotdata, final_state=scan.final_state)


@step
def scan_pi_error_vs_rpsd(noise: NoiseConfig, amplitudes: Sequence[float], rabi_hz: float,
                          ensemble: EnsembleConfig, cfg: Optional[PropagationConfig] = None,
                          settings: Optional[SpectralSettings] = None, keep_state: bool = False) -> PiScanResult:
    """
    π-pulse infidelity against RPSD(Ω)·t_π over a set of noise amplitudes, with a fit through the origin.

    """
    if len(amplitudes) < 3:
        raise ParameterError(f"at least 3 noise amplitudes are needed, got {len(amplitudes)}")
    cfg = cfg or PropagationConfig()
    settings = settings or SpectralSettings()
    ensemble = effective_ensemble(noise, ensemble, amplitudes)

    result, infidelity, stderr = _pi_scan(noise, [rabi_hz], amplitudes, ensemble, cfg, keep_state)
    spectra = reference_spectra(noise, ensemble.seeds, rabi_hz, amplitudes, settings)
    rpsd = np.array(rpsd_values(spectra, rabi_hz, settings))

    scan = PiScanResult(np.array([rabi_hz]), np.asarray(amplitudes, dtype=float), infidelity, stderr,
                        len(result.records), tuple(result.seeds), tuple(result.failed_seeds), rpsd,
                        final_state=result.first_state())
    fit = fit_linear_through_origin(scan.scaling_x, infidelity[:, 0])
    logger.info(f"pi pulse infidelity per RPSD·t_π: slope {fit.slope:.3g} ± {fit.stderr:.2g}, r² {fit.r_squared:.3f}")
    return replace(scan, fit=fit)


def pi_scan_rpsd_output(scan: PiScanResult, name: str) -> ExperimentOutput:
    x = scan.scaling_x
    y = scan.infidelity[:, 0]
    fit = {'model': 'infidelity = slope * (2 pi)^2 * rpsd(rabi) * t_pi',
           'rabi_hz': float(scan.rabi_hz[0]), 't_pi_s': pi_time(scan.rabi_hz[0]),
           'fit': scan.fit.to_dict() if scan.fit else None,
           'residuals': y - scan.fit.predict(x) if scan.fit else None,
           **seed_summary(scan.seeds, scan.failed_seeds)}
    plotdata = {'amplitude': scan.amplitudes, 'rpsd_at_rabi': scan.rpsd, 'x': x, 'infidelity': y,
                'stderr': scan.stderr[:, 0]}
    table = SeriesTable.stacked('amplitude', scan.amplitudes, x[:, None], y[:, None], scan.stderr, scan.n)
    return ExperimentOutput(name, table, fit, plotdata, final_state=scan.final_state)


def rabi_oscillation(rabi_hz: float, times, detuning_hz: float = 0.0) -> np.ndarray:
    """P_e(t) of the noise-free drive from |g⟩, Ω²/W²·sin²(πWt) with W = sqrt(Ω² + Δ²)."""
    general = math.hypot(rabi_hz, detuning_hz)
    return (rabi_hz / general) ** 2 * np.sin(np.pi * general * np.asarray(times)) ** 2
