##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Reshape phase traces with the closed-loop error response of a frequency lock.

Shaping happens in the frequency domain with the trace treated as periodic, so callers who care about
wraparound synthesise a little extra and trim, see :func:`fastnoise.noise.synthesize`.

"""
import logging

from scipy import fft

from fastnoise.noise.params import PhaseTrace, ServoShape

logger = logging.getLogger(__name__)


def apply_servo_shaping(trace: PhaseTrace, shape: ServoShape) -> PhaseTrace:
    """
    Multiply the trace's spectrum by the complex error transfer function H_err(f).

    The output PSD is the input PSD times |H_err(f)|². Shaping is linear and preserves the length.

    :param trace:
        The unshaped trace.
    :param shape:
        The servo loop. A disabled shape returns the input unchanged.

    """
    if not shape.enabled:
        return trace
    shape.validate(sample_rate=trace.sample_rate)

    n = len(trace)
    spectrum = fft.rfft(trace.samples)
    response = shape.error_transfer(fft.rfftfreq(n, trace.dt))
    shaped = fft.irfft(spectrum * response, n)

    return PhaseTrace(shaped, trace.dt, trace.seed, dict(trace.metadata))
