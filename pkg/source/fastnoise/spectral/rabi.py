##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
The Rabi PSD (RPSD): the spectrum of the drive field e^{iφ(t)}, scaled so the field carries Ω².

Offsets are measured from the carrier. The field spectrum of a real phase is symmetric, so a
:class:`RabiSpectrum` holds the density on one side, the mean of the two-sided densities at +f and -f,
and its power integrals count both sides.

"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import welch

from fastnoise import ParameterError, RangeError
from fastnoise.noise import PhaseTrace
from fastnoise.spectral.estimate import average_spectra, check_spectrum, welch_layout

logger = logging.getLogger(__name__)

NORMALIZATIONS = ('total', 'carrier')


@dataclass(frozen=True, eq=False)
class RabiSpectrum:
    """
    Carrier-normalised field spectrum in Hz²/Hz against offset from the carrier.

    """
    freqs: np.ndarray
    values: np.ndarray
    carrier_rabi: float
    carrier_band: float
    resolution_df: float
    n_averages: int = 1
    seeds: Tuple[int, ...] = ()

    def __post_init__(self):
        check_spectrum(self.freqs, self.values)
        if self.carrier_rabi <= 0:
            raise ParameterError(f"carrier_rabi must be > 0, got {self.carrier_rabi}")

    def total_power(self) -> float:
        return self.band_power(0.0, float(self.freqs[-1]))

    def carrier_power(self) -> float:
        """Power within the carrier band, in Hz²."""
        return self.band_power(0.0, self.carrier_band)

    def band_power(self, f_lo: float, f_hi: float) -> float:
        """Power at offsets ±f for f in [f_lo, f_hi], in Hz²."""
        mask = (self.freqs >= f_lo) & (self.freqs <= f_hi)
        return float(np.sum(self.values[mask] * _side_weights(self.freqs)[mask]) * self.resolution_df)


def _side_weights(freqs: np.ndarray) -> np.ndarray:
    # every offset but zero stands for two bins
    return np.where(freqs > 0, 2.0, 1.0)


def _per_side(two_sided: np.ndarray) -> np.ndarray:
    # two_sided is in fft order: 0, df, ..., then the negative offsets
    n = len(two_sided)
    half = n // 2
    per_side = np.empty(half + 1)
    per_side[0] = two_sided[0]
    per_side[1:half] = (two_sided[1:half] + two_sided[n - 1:n - half:-1]) / 2
    if n % 2:
        per_side[half] = (two_sided[half] + two_sided[n - half]) / 2
    else:
        # the nyquist bin is shared between the two sides
        per_side[half] = two_sided[half] / 2
    return per_side


def compute_rabi_psd(trace: PhaseTrace, rabi_hz: float, carrier_band: Optional[float] = None,
                     segment_len: Optional[int] = None, overlap_frac: float = 0.5,
                     normalization: str = 'total') -> RabiSpectrum:
    """
    Estimate the RPSD of the unit field e^{iφ(t)}.

    :param trace:
        The phase trace.
    :param rabi_hz:
        Ω, in Hz.
    :param carrier_band:
        Half width of the carrier peak, default five bins.
    :param segment_len:
        Welch segment length, default an eighth of the trace.
    :param overlap_frac:
        Welch overlap.
    :param normalization:
        'total' scales the whole spectrum to Ω², 'carrier' scales the carrier band alone to Ω².

    """
    if not (math.isfinite(rabi_hz) and rabi_hz > 0):
        raise ParameterError(f"rabi_hz must be > 0, got {rabi_hz}")
    if normalization not in NORMALIZATIONS:
        raise ParameterError(f"normalization must be one of {NORMALIZATIONS}, got '{normalization}'")

    segment_len, n_overlap, n_segments = welch_layout(len(trace), trace.sample_rate, segment_len, overlap_frac)
    df = trace.sample_rate / segment_len
    carrier_band = 5 * df if carrier_band is None else carrier_band
    if carrier_band < df:
        raise ParameterError(
            f"trace too short for the requested resolution: carrier band {carrier_band} Hz is narrower than "
            f"the {df} Hz bins")

    _, two_sided = welch(np.exp(1j * trace.samples), fs=trace.sample_rate, window='hann',
                         nperseg=segment_len, noverlap=n_overlap, detrend=False,
                         return_onesided=False, scaling='density')
    per_side = _per_side(two_sided.real)
    offsets = np.arange(len(per_side)) * df
    weighted = per_side * _side_weights(offsets)

    if normalization == 'total':
        reference = np.sum(weighted) * df
    else:
        reference = np.sum(weighted[offsets <= carrier_band]) * df
    if reference <= 0:
        raise ParameterError("the field carries no power in the normalisation band")

    values = per_side * (rabi_hz ** 2 / reference)
    return RabiSpectrum(offsets, values, rabi_hz, carrier_band, df, n_segments, (trace.seed,))


def ensemble_rabi_psd(traces: Sequence[PhaseTrace], rabi_hz: float, carrier_band: Optional[float] = None,
                      segment_len: Optional[int] = None, overlap_frac: float = 0.5,
                      normalization: str = 'total') -> RabiSpectrum:
    return average_spectra([compute_rabi_psd(t, rabi_hz, carrier_band, segment_len, overlap_frac, normalization)
                            for t in traces])


def rpsd_at(spectrum: RabiSpectrum, f: float, band: Optional[float] = None) -> float:
    """
    The RPSD at offset f, in Hz²/Hz.

    The spectrum is linearly interpolated between bins and averaged over [f - band, f + band],
    clipped to the spectral range.

    :param spectrum:
        The RPSD.
    :param f:
        Offset from the carrier; the spectrum is symmetric so the sign is ignored.
    :param band:
        Half width of the smoothing band, default two bins. Zero gives the plain interpolation.

    """
    f = abs(f)
    f_max = spectrum.freqs[-1]
    if f > f_max:
        raise RangeError(f"offset {f} Hz lies beyond the spectrum's {f_max} Hz")

    band = 2 * spectrum.resolution_df if band is None else band
    if band < 0:
        raise ParameterError(f"band must be >= 0, got {band}")

    lo, hi = max(0.0, f - band), min(f_max, f + band)
    if hi <= lo:
        return float(np.interp(f, spectrum.freqs, spectrum.values))

    # the interpolant is piecewise linear, so the trapezoid rule over the band and the inner bins is exact
    inner = spectrum.freqs[(spectrum.freqs > lo) & (spectrum.freqs < hi)]
    xs = np.concatenate(([lo], inner, [hi]))
    ys = np.interp(xs, spectrum.freqs, spectrum.values)
    return float(trapezoid(ys, xs) / (hi - lo))


def dbc_per_hz(rpsd: float, rabi_hz: float) -> float:
    """10·log10(rpsd/Ω²), or -inf for zero."""
    if rpsd == 0:
        return -math.inf
    return 10 * math.log10(rpsd / rabi_hz ** 2)


def rpsd_from_dbc(dbc: float, rabi_hz: float) -> float:
    return rabi_hz ** 2 * 10 ** (dbc / 10)


def to_dbc_per_hz(spectrum: RabiSpectrum, f: float, band: Optional[float] = None) -> float:
    """
    The RPSD at f relative to the carrier power, in dBc/Hz.

    """
    return dbc_per_hz(rpsd_at(spectrum, f, band), spectrum.carrier_rabi)


def servo_bump_fraction(spectrum: RabiSpectrum, f_lo: float, f_hi: float) -> float:
    """
    Fraction of the field's power at offsets within [f_lo, f_hi].

    """
    total = spectrum.total_power()
    if total <= 0:
        return 0.0
    return spectrum.band_power(f_lo, f_hi) / total
