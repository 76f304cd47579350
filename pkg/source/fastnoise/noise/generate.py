##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Seeded Gauss-Markov phase traces.

Realizations come from numpy's PCG64 generator seeded through a :class:`numpy.random.SeedSequence`,
so a (params, seed) pair gives bit-identical samples on every platform numpy supports.

"""
import logging
import math

import numpy as np
from scipy.signal import lfilter

from fastnoise import ParameterError
from fastnoise.noise.params import NoiseModelParams, PhaseTrace

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


def check_seed(seed: int) -> int:
    if int(seed) != seed or not 0 <= seed < SEED_LIMIT:
        raise ParameterError(f"seed must be an integer in [0, 2**64), got {seed}")
    return int(seed)


def derive_seed(seed: int, stream: int) -> int:
    """
    A seed for an independent stream belonging to the same realization, e.g. the second tone of a gate.

    """
    state = np.random.SeedSequence([check_seed(seed), stream]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def generate_base_trace(params: NoiseModelParams, seed: int) -> PhaseTrace:
    """
    Accumulate white Gaussian frequency increments with a per-sample mean reversion.

    The recursion is φ[k] = (1 - leak)·φ[k-1] + σ·w[k]. For leak > 0 the first sample is drawn from the
    stationary distribution, so traces have no start-up transient.

    :param params:
        The noise model.
    :param seed:
        64-bit seed recorded in the returned trace.

    """
    params.validate()
    seed = check_seed(seed)
    n = int(params.n_samples)

    if params.is_silent:
        return PhaseTrace(np.zeros(n), params.dt, seed)

    rng = np.random.default_rng(seed)
    a = 1.0 - params.leak
    sigma = params.increment_std

    if params.leak > 0:
        previous = rng.standard_normal() * sigma / math.sqrt(1.0 - a * a)
    else:
        previous = 0.0
    increments = rng.standard_normal(n)

    samples = lfilter([sigma], [1.0, -a], increments, zi=[a * previous])[0]
    logger.debug(f"base trace seed {seed}: {n} samples, rms {np.std(samples):.3g} rad")
    return PhaseTrace(samples, params.dt, seed)


def base_model_psd(params: NoiseModelParams, freqs) -> np.ndarray:
    """
    Expected one-sided PSD (rad²/Hz) of :func:`generate_base_trace` at the given frequencies.

    This is the exact spectrum of the discrete recursion, 2σ²/f_s / |1 - a·exp(-i2πf/f_s)|²,
    which tends to h0/f² well above the corner and below Nyquist.

    """
    freqs = np.asarray(freqs, dtype=float)
    if params.is_silent:
        return np.zeros_like(freqs)
    a = 1.0 - params.leak
    sigma = params.increment_std
    denominator = np.abs(1.0 - a * np.exp(-2j * np.pi * freqs / params.sample_rate)) ** 2
    with np.errstate(divide='ignore'):
        return 2.0 * sigma ** 2 / params.sample_rate / denominator
