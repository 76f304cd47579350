##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
The RPSD of an ensemble's own noise, which gives the x axis of every scaling law.

Spectra are kept in Hz²/Hz per side. The laws are fitted against the RPSD with Ω in rad/s,
:func:`angular_rpsd`, and the pumping rate against the PSD of the coupling term (Ω/2)·e^{iφ},
:func:`coupling_psd`. Both are per Hz of offset and per side.

"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from fastnoise import ParameterError
from fastnoise.constants import SCALING_BAND_HZ
from fastnoise.noise import NoiseConfig
from fastnoise.spectral import RabiSpectrum, ensemble_rabi_psd, rpsd_at
from fastnoise.spectral.rabi import NORMALIZATIONS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectralSettings:
    """
    :param segment_len:
        Welch segment length, default an eighth of the trace.
    :param overlap_frac:
        Welch overlap.
    :param carrier_band:
        Half width of the carrier peak in Hz, default five bins.
    :param normalization:
        'total' or 'carrier'.
    :param band_hz:
        Half width of the band the RPSD is averaged over at a response frequency.
    :param n_reference:
        Realizations, taken from the start of the ensemble, whose spectra are averaged.

    """
    segment_len: Optional[int] = None
    overlap_frac: float = 0.5
    carrier_band: Optional[float] = None
    normalization: str = 'total'
    band_hz: float = SCALING_BAND_HZ
    n_reference: int = 32

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ParameterError(f"normalization must be one of {NORMALIZATIONS}, got '{self.normalization}'")
        if not self.band_hz >= 0:
            raise ParameterError(f"band_hz must be >= 0, got {self.band_hz}")
        if int(self.n_reference) != self.n_reference or self.n_reference < 1:
            raise ParameterError(f"n_reference must be a positive integer, got {self.n_reference}")

    def to_dict(self) -> Dict:
        return {'segment_len': self.segment_len, 'overlap_frac': self.overlap_frac,
                'carrier_band': self.carrier_band, 'normalization': self.normalization, 'band_hz': self.band_hz,
                'n_reference': self.n_reference}


def reference_spectra(noise: NoiseConfig, seeds: Sequence[int], rabi_hz: float, amplitudes: Sequence[float],
                      settings: SpectralSettings) -> List[RabiSpectrum]:
    """
    Ensemble RPSD for each amplitude, from the first realizations of the ensemble.

    The traces are the same ones the realizations use, scaled by each amplitude.

    """
    traces = [noise.synthesize(seed) for seed in list(seeds)[:settings.n_reference]]
    logger.debug(f"reference RPSD from {len(traces)} trace(s) at {len(amplitudes)} amplitude(s)")
    return [ensemble_rabi_psd([t.scaled(a) for t in traces], rabi_hz, settings.carrier_band, settings.segment_len,
                              settings.overlap_frac, settings.normalization)
            for a in amplitudes]


def rpsd_values(spectra: Sequence[RabiSpectrum], freq_hz: float, settings: SpectralSettings) -> List[float]:
    return [rpsd_at(s, freq_hz, settings.band_hz) for s in spectra]


def angular_rpsd(rpsd):
    """Hz²/Hz to rad²/s²/Hz, the x axis of the gate error laws."""
    return (2 * math.pi) ** 2 * rpsd


def coupling_psd(rpsd):
    """PSD of the coupling (Ω/2)·e^{iφ} in rad²/s²/Hz, the x axis of the pumping rate law."""
    return angular_rpsd(rpsd) / 4
