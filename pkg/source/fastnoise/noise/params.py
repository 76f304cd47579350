##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Parameter and data types for phase noise synthesis.

"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from fastnoise import ParameterError


@dataclass(frozen=True)
class NoiseModelParams:
    """
    Gauss-Markov phase noise with a brown (1/f²) spectrum.

    :param h0:
        White frequency noise level in Hz²/Hz, so the phase PSD is h0/f² above the mean-reversion corner.
    :param leak:
        Mean reversion per sample. The corner of the spectrum sits near leak·sample_rate/2π.
    :param sample_rate:
        In Hz.
    :param n_samples:
        Length of every synthesised trace.
    :param rms_target:
        Optional stationary RMS phase in rad, replacing the h0 scaling.

    """
    h0: float = 0.0
    leak: float = 1e-4
    sample_rate: float = 10e6
    n_samples: int = 65536
    rms_target: Optional[float] = None

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not (math.isfinite(self.h0) and self.h0 >= 0):
            raise ParameterError(f"h0 must be >= 0, got {self.h0}")
        if not 0 <= self.leak < 1:
            raise ParameterError(f"leak must be in [0, 1), got {self.leak}")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ParameterError(f"sample_rate must be > 0, got {self.sample_rate}")
        if int(self.n_samples) != self.n_samples or self.n_samples < 2:
            raise ParameterError(f"n_samples must be an integer >= 2, got {self.n_samples}")
        if self.rms_target is not None:
            if not (math.isfinite(self.rms_target) and self.rms_target > 0):
                raise ParameterError(f"rms_target must be > 0, got {self.rms_target}")
            if self.leak == 0:
                raise ParameterError("rms_target needs leak > 0, a pure random walk has no stationary RMS")

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def is_silent(self) -> bool:
        return self.h0 == 0 and self.rms_target is None

    @property
    def increment_std(self) -> float:
        """
        Standard deviation of the per-sample Gaussian increment.

        For a random walk sampled at f_s the one-sided phase PSD is 2σ²f_s/(2πf)², so h0/f² needs σ² = 2π²h0/f_s.

        """
        if self.rms_target is not None:
            a = 1.0 - self.leak
            return self.rms_target * math.sqrt(1.0 - a * a)
        return math.pi * math.sqrt(2.0 * self.h0 / self.sample_rate)

    def to_dict(self) -> Dict:
        return {'h0': self.h0, 'leak': self.leak, 'sample_rate': self.sample_rate,
                'n_samples': int(self.n_samples), 'rms_target': self.rms_target}


@dataclass(frozen=True)
class ServoShape:
    """
    The frequency lock which shapes the base noise.

    The loop gain is a type-2 (proportional-integral on an integrator) loop whose integrators leak just enough
    to give the requested DC gain, multiplied by the extra zeros and poles. That product is normalised to unit
    magnitude at the unity-gain frequency so the extra terms reshape the low frequency suppression without moving
    the bump. The bump height is set by the damping ζ = 1/(2·bump_quality) and its full width is roughly
    unity_gain_freq / bump_quality.

    :param enabled:
        When false, shaping is the identity.
    :param unity_gain_freq:
        In Hz.
    :param gain_db:
        Loop gain at DC.
    :param poles:
        Extra pole frequencies in Hz. None gives one pole at unity_gain_freq/10.
    :param zeros:
        Extra zero frequencies in Hz. None gives one zero at unity_gain_freq/3.
    :param bump_quality:
        Resonance factor; the error transfer has magnitude close to this value at the unity-gain frequency.

    """
    enabled: bool = True
    unity_gain_freq: float = 200e3
    gain_db: float = 80.0
    poles: Optional[List[float]] = None
    zeros: Optional[List[float]] = None
    bump_quality: float = 2.0

    def __post_init__(self):
        self.validate()

    def validate(self, sample_rate: Optional[float] = None):
        if not self.enabled:
            return
        if not (math.isfinite(self.unity_gain_freq) and self.unity_gain_freq > 0):
            raise ParameterError(f"unity_gain_freq must be > 0, got {self.unity_gain_freq}")
        if sample_rate is not None and self.unity_gain_freq >= sample_rate / 2:
            raise ParameterError(
                f"unity_gain_freq {self.unity_gain_freq} Hz must be below Nyquist ({sample_rate / 2} Hz)")
        for freq in self.pole_freqs + self.zero_freqs:
            if not (math.isfinite(freq) and freq > 0):
                raise ParameterError(f"pole and zero frequencies must be > 0, got {freq}")
        if not (math.isfinite(self.bump_quality) and self.bump_quality >= 0):
            raise ParameterError(f"bump_quality must be >= 0, got {self.bump_quality}")
        if not math.isfinite(self.gain_db):
            raise ParameterError(f"gain_db must be finite, got {self.gain_db}")
        if 10 ** (self.gain_db / 20) <= self._extra_dc_gain():
            raise ParameterError(f"gain_db {self.gain_db} is too low for the loop to reach unity gain")

    @property
    def pole_freqs(self) -> List[float]:
        return [self.unity_gain_freq / 10] if self.poles is None else list(self.poles)

    @property
    def zero_freqs(self) -> List[float]:
        return [self.unity_gain_freq / 3] if self.zeros is None else list(self.zeros)

    @property
    def damping(self) -> float:
        if self.bump_quality <= 0.5:
            return 1.0
        return 1.0 / (2.0 * self.bump_quality)

    def _extra_terms(self, s):
        extra = np.ones_like(s)
        for zero in self.zero_freqs:
            extra = extra * (1 + s / (2 * np.pi * zero))
        for pole in self.pole_freqs:
            extra = extra / (1 + s / (2 * np.pi * pole))
        return extra

    def _extra_dc_gain(self) -> float:
        # the extra terms are scaled to unit magnitude at unity gain, so at DC they give 1/|raw(iω_u)|
        s_u = np.array([2j * np.pi * self.unity_gain_freq])
        return float(1.0 / np.abs(self._extra_terms(s_u))[0])

    def open_loop(self, freqs) -> np.ndarray:
        """
        The complex loop gain L(i2πf).

        """
        s = 2j * np.pi * np.asarray(freqs, dtype=float)
        w_u = 2 * np.pi * self.unity_gain_freq
        extra_dc = self._extra_dc_gain()
        w_leak = w_u * math.sqrt(extra_dc / 10 ** (self.gain_db / 20))
        core = (w_u ** 2 + 2 * self.damping * w_u * s) / (s + w_leak) ** 2
        return core * self._extra_terms(s) * extra_dc

    def error_transfer(self, freqs) -> np.ndarray:
        """
        The closed-loop error transfer function H_err = 1/(1 + L) at the given frequencies.

        """
        if not self.enabled:
            return np.ones(np.shape(freqs), dtype=complex)
        return 1.0 / (1.0 + self.open_loop(freqs))

    def to_dict(self) -> Dict:
        return {'enabled': self.enabled, 'unity_gain_freq': self.unity_gain_freq, 'gain_db': self.gain_db,
                'poles': self.poles, 'zeros': self.zeros, 'bump_quality': self.bump_quality}


@dataclass(frozen=True, eq=False)
class PhaseTrace:
    """
    One realization of the laser phase φ(t), sampled every dt from t=0.

    """
    samples: np.ndarray
    dt: float
    seed: int = 0
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, 'samples', samples)
        if samples.ndim != 1 or len(samples) < 2:
            raise ParameterError(f"a phase trace needs at least 2 samples, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ParameterError("phase trace contains non-finite samples")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError(f"dt must be > 0, got {self.dt}")

    def __len__(self):
        return len(self.samples)

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.dt

    @property
    def duration(self) -> float:
        """The time span covered by the samples."""
        return (len(self.samples) - 1) * self.dt

    def scaled(self, alpha: float) -> 'PhaseTrace':
        return PhaseTrace(self.samples * alpha, self.dt, self.seed, dict(self.metadata, amplitude=alpha))


def silent_trace(n_samples: int, dt: float) -> PhaseTrace:
    """A noise-free trace, φ ≡ 0."""
    return PhaseTrace(np.zeros(n_samples), dt, seed=0)
