##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Synthesis of seedable laser phase noise: brown base noise reshaped by a servo loop.

"""
import math
from dataclasses import dataclass, field, replace
from typing import Dict

import numpy as np

from fastnoise import ParameterError
from fastnoise.constants import EDGE_PAD_FRACTION
from fastnoise.noise.generate import base_model_psd, derive_seed, generate_base_trace
from fastnoise.noise.params import NoiseModelParams, PhaseTrace, ServoShape, silent_trace
from fastnoise.noise.servo import apply_servo_shaping

__all__ = ['NoiseConfig', 'NoiseModelParams', 'PhaseTrace', 'ServoShape', 'apply_servo_shaping', 'base_model_psd',
           'derive_seed', 'generate_base_trace', 'model_psd', 'silent_trace', 'synthesize']


def synthesize(params: NoiseModelParams, shape: ServoShape, seed: int) -> PhaseTrace:
    """
    Generate a base trace and shape it.

    A margin of 1% of the length is generated on either side and discarded after shaping, which removes the
    wraparound of the periodic filter.

    """
    pad = math.ceil(params.n_samples * EDGE_PAD_FRACTION / 2) if shape.enabled else 0
    padded = replace(params, n_samples=int(params.n_samples) + 2 * pad)

    shaped = apply_servo_shaping(generate_base_trace(padded, seed), shape)
    if pad:
        shaped = PhaseTrace(shaped.samples[pad:-pad], shaped.dt, shaped.seed, shaped.metadata)
    return shaped


def model_psd(params: NoiseModelParams, shape: ServoShape, freqs) -> np.ndarray:
    """
    Expected one-sided phase PSD of :func:`synthesize`, in rad²/Hz.

    """
    return base_model_psd(params, freqs) * np.abs(shape.error_transfer(freqs)) ** 2


@dataclass(frozen=True)
class NoiseConfig:
    """
    Everything needed to draw a realization: the base model and the servo shape.

    """
    params: NoiseModelParams = field(default_factory=NoiseModelParams)
    shape: ServoShape = field(default_factory=ServoShape)

    def __post_init__(self):
        self.shape.validate(sample_rate=self.params.sample_rate)

    @property
    def is_silent(self) -> bool:
        return self.params.is_silent

    def synthesize(self, seed: int, amplitude: float = 1.0) -> PhaseTrace:
        """The realization for this seed, with its samples multiplied by amplitude."""
        trace = synthesize(self.params, self.shape, seed)
        return trace if amplitude == 1.0 else trace.scaled(amplitude)

    def model_psd(self, freqs, amplitude: float = 1.0) -> np.ndarray:
        return model_psd(self.params, self.shape, freqs) * amplitude ** 2

    def bump_peak(self) -> float:
        """
        Frequency of the model PSD maximum between a hundredth of the unity-gain frequency and a quarter of the
        sample rate.

        """
        if not self.shape.enabled:
            raise ParameterError("an unshaped spectrum has no servo bump")
        freqs = np.geomspace(self.shape.unity_gain_freq / 100, self.params.sample_rate / 4, 4000)
        return float(freqs[np.argmax(model_psd(self.params, self.shape, freqs))])

    def to_dict(self) -> Dict:
        return {'noise': self.params.to_dict(), 'servo': self.shape.to_dict()}
