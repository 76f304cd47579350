##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Welch estimates of one-sided phase PSDs.

"""
import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.signal import welch

from fastnoise import ParameterError
from fastnoise.noise import PhaseTrace

logger = logging.getLogger(__name__)

MIN_SEGMENT_LEN = 8


@dataclass(frozen=True, eq=False)
class PowerSpectrum:
    """
    A one-sided PSD, rad²/Hz for phase spectra.

    """
    freqs: np.ndarray
    values: np.ndarray
    resolution_df: float
    n_averages: int = 1
    seeds: Tuple[int, ...] = ()

    def __post_init__(self):
        check_spectrum(self.freqs, self.values)

    def total_power(self) -> float:
        return float(np.sum(self.values) * self.resolution_df)

    def band_power(self, f_lo: float, f_hi: float) -> float:
        """Sum of the bins whose centres lie in [f_lo, f_hi], times df."""
        mask = (self.freqs >= f_lo) & (self.freqs <= f_hi)
        return float(np.sum(self.values[mask]) * self.resolution_df)

    def peak_frequency(self, f_min: float = 0.0) -> float:
        mask = self.freqs >= f_min
        return float(self.freqs[mask][np.argmax(self.values[mask])])


def check_spectrum(freqs, values):
    if len(freqs) != len(values):
        raise ParameterError(f"{len(freqs)} frequencies for {len(values)} values")
    if np.any(np.diff(freqs) <= 0):
        raise ParameterError("spectrum frequencies must be strictly ascending")
    if not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ParameterError("spectrum values must be finite and non-negative")


def welch_layout(n_samples: int, sample_rate: float,
                 segment_len: Optional[int], overlap_frac: float) -> Tuple[int, int, int]:
    """
    Resolve the Welch segment length and overlap.

    :returns:
        segment length, overlapping samples, number of segments.

    """
    segment_len = n_samples // 8 if segment_len is None else int(segment_len)
    if segment_len < MIN_SEGMENT_LEN:
        raise ParameterError(f"segment_len must be at least {MIN_SEGMENT_LEN}, got {segment_len}")
    if segment_len > n_samples:
        raise ParameterError(f"segment_len {segment_len} exceeds the trace length {n_samples}")
    if not 0 <= overlap_frac < 1:
        raise ParameterError(f"overlap_frac must be in [0, 1), got {overlap_frac}")

    n_overlap = int(overlap_frac * segment_len)
    n_segments = 1 + (n_samples - segment_len) // (segment_len - n_overlap)
    return segment_len, n_overlap, n_segments


def estimate_psd(trace: PhaseTrace, segment_len: Optional[int] = None, overlap_frac: float = 0.5) -> PowerSpectrum:
    """
    One-sided Welch PSD with a Hann window.

    The trace mean is removed first and segments are not detrended. With scipy's density scaling the window
    compensation constant is one: the integral of the estimate is the window-weighted mean square of the
    segments, whose expectation is the trace variance.

    :param trace:
        The phase trace.
    :param segment_len:
        Samples per segment, default a eighth of the trace. df = sample_rate / segment_len exactly.
    :param overlap_frac:
        Fraction of a segment shared with the next one.

    """
    segment_len, n_overlap, n_segments = welch_layout(len(trace), trace.sample_rate, segment_len, overlap_frac)

    freqs, values = welch(trace.samples - np.mean(trace.samples), fs=trace.sample_rate, window='hann',
                          nperseg=segment_len, noverlap=n_overlap, detrend=False,
                          return_onesided=True, scaling='density')

    return PowerSpectrum(freqs, values, trace.sample_rate / segment_len, n_segments, (trace.seed,))


def average_spectra(spectra: Sequence):
    """
    Average estimates sharing one frequency grid, e.g. one per realization.

    Works for :class:`PowerSpectrum` and :class:`~fastnoise.spectral.rabi.RabiSpectrum`.

    """
    if not spectra:
        raise ParameterError("nothing to average")
    first = spectra[0]
    for other in spectra[1:]:
        if len(other.freqs) != len(first.freqs) or not np.allclose(other.freqs, first.freqs):
            raise ParameterError("cannot average spectra with different frequency grids")

    values = np.mean([s.values for s in spectra], axis=0)
    seeds = tuple(seed for s in spectra for seed in s.seeds)
    return replace(first, values=values, n_averages=sum(s.n_averages for s in spectra), seeds=seeds)


def ensemble_psd(traces: Sequence[PhaseTrace], segment_len: Optional[int] = None,
                 overlap_frac: float = 0.5) -> PowerSpectrum:
    return average_spectra([estimate_psd(t, segment_len, overlap_frac) for t in traces])
