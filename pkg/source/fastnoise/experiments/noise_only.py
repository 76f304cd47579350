##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Noise characterisation without any quantum propagation.

"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from fastnoise.constants import PSD_SUFFIX, RPSD_SUFFIX
from fastnoise.experiments import step
from fastnoise.experiments.ensemble import EnsembleConfig, RealizationTask, run_ensemble
from fastnoise.experiments.reference import SpectralSettings
from fastnoise.experiments.results import ExperimentOutput, SeriesTable, seed_summary
from fastnoise.experiments.single_qubit import effective_ensemble
from fastnoise.noise import NoiseConfig, PhaseTrace
from fastnoise.spectral import (PowerSpectrum, RabiSpectrum, compute_rabi_psd, estimate_psd, servo_bump_fraction,
                                to_dbc_per_hz)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumTask(RealizationTask):
    """Phase PSD, RPSD and RMS of one realization."""
    noise: NoiseConfig
    settings: SpectralSettings
    amplitude: float = 1.0
    rabi_hz: Optional[float] = None
    keep_state_seed: Optional[int] = None

    label = 'noise spectra'

    def run(self, seed: int) -> Dict[str, np.ndarray]:
        trace = self.noise.synthesize(seed, self.amplitude)
        psd = estimate_psd(trace, self.settings.segment_len, self.settings.overlap_frac)
        values = {'freqs': psd.freqs, 'psd': psd.values, 'df': np.array(psd.resolution_df),
                  'segments': np.array(psd.n_averages), 'rms': np.array(np.std(trace.samples))}
        if self.rabi_hz:
            rpsd = compute_rabi_psd(trace, self.rabi_hz, self.settings.carrier_band, self.settings.segment_len,
                                    self.settings.overlap_frac, self.settings.normalization)
            values.update({'rpsd_freqs': rpsd.freqs, 'rpsd': rpsd.values, 'carrier_band': np.array(rpsd.carrier_band)})
        return values


@dataclass(frozen=True, eq=False)
class NoiseOnlyResult:
    """
    Ensemble spectra of the configured noise, with the model PSD on the same grid.

    """
    psd: PowerSpectrum
    psd_stderr: np.ndarray
    model_psd: np.ndarray
    rms: float
    rms_stderr: float
    bump_peak_hz: Optional[float]
    rpsd: Optional[RabiSpectrum]
    first_trace: PhaseTrace
    seeds: Tuple[int, ...]
    failed_seeds: Tuple[int, ...] = ()

    @property
    def measured_peak_hz(self) -> Optional[float]:
        """The largest estimated PSD value above a hundredth of the unity-gain frequency."""
        if self.bump_peak_hz is None:
            return None
        return self.psd.peak_frequency(self.bump_peak_hz / 100)


@step
def run_noise_only(noise: NoiseConfig, ensemble: EnsembleConfig, settings: Optional[SpectralSettings] = None,
                   rabi_hz: Optional[float] = None, amplitude: float = 1.0) -> NoiseOnlyResult:
    """
    Synthesize the ensemble's traces and average their spectra.

    :param rabi_hz:
        When given, the RPSD for this Rabi frequency is estimated as well.

    """
    settings = settings or SpectralSettings()
    ensemble = effective_ensemble(noise, ensemble, [amplitude])
    task_result = run_ensemble(SpectrumTask(noise, settings, amplitude, rabi_hz), ensemble)
    first = task_result.records[0].values
    seeds = tuple(task_result.seeds)

    psd_stats = task_result.reduce('psd')
    n_segments = int(first['segments']) * psd_stats.n
    psd = PowerSpectrum(first['freqs'], psd_stats.mean, float(first['df']), n_segments, seeds)
    rms = task_result.reduce('rms')

    rpsd = None
    if rabi_hz:
        rpsd_stats = task_result.reduce('rpsd')
        rpsd = RabiSpectrum(first['rpsd_freqs'], rpsd_stats.mean, rabi_hz, float(first['carrier_band']),
                            float(first['df']), n_segments, seeds)

    bump_peak = noise.bump_peak() if noise.shape.enabled and not noise.is_silent else None
    logger.info(f"noise: rms {float(rms.mean):.4g} rad" + (f", servo bump at {bump_peak:.4g} Hz" if bump_peak else ""))

    return NoiseOnlyResult(psd, psd_stats.stderr, noise.model_psd(psd.freqs, amplitude), float(rms.mean),
                           float(rms.stderr), bump_peak, rpsd, noise.synthesize(ensemble.base_seed, amplitude),
                           seeds, tuple(task_result.failed_seeds))


def noise_only_output(result: NoiseOnlyResult, name: str, noise: NoiseConfig,
                      settings: SpectralSettings) -> ExperimentOutput:
    n = len(result.seeds)
    fit = {'rms_rad': result.rms, 'rms_stderr': result.rms_stderr, 'variance_rad2': result.rms ** 2,
           'psd_integral_rad2': result.psd.total_power(), 'resolution_df_hz': result.psd.resolution_df,
           'bump_peak_hz': result.bump_peak_hz, 'measured_peak_hz': result.measured_peak_hz,
           **seed_summary(result.seeds, result.failed_seeds)}
    plotdata = {'freq_hz': result.psd.freqs, 'psd': result.psd.values, 'model_psd': result.model_psd}

    if result.rpsd is not None:
        rpsd = result.rpsd
        fit['rpsd'] = {'rabi_hz': rpsd.carrier_rabi, 'carrier_band_hz': rpsd.carrier_band,
                       'total_power': rpsd.total_power(), 'carrier_power': rpsd.carrier_power()}
        if result.bump_peak_hz and result.bump_peak_hz <= rpsd.freqs[-1]:
            fit['rpsd'].update({
                'dbc_per_hz_at_bump': to_dbc_per_hz(rpsd, result.bump_peak_hz, settings.band_hz),
                'bump_power_fraction': servo_bump_fraction(rpsd, result.bump_peak_hz / 2, 2 * result.bump_peak_hz)})
        plotdata.update({'rpsd_freq_hz': rpsd.freqs, 'rpsd': rpsd.values})

    spectra = {PSD_SUFFIX: result.psd}
    if result.rpsd is not None:
        spectra[RPSD_SUFFIX] = result.rpsd
    table = SeriesTable.single(result.psd.freqs, result.psd.values, result.psd_stderr, n)
    return ExperimentOutput(name, table, fit, plotdata, spectra=spectra, trace=result.first_trace, noise=noise)
