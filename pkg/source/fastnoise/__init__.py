##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Simulate how fast laser phase noise degrades trapped-ion gate fidelities.

"""
import logging
import sys
from typing import Optional

__version__ = '0.1.dev0'

logger = logging.getLogger(__name__)
logger.addHandler(logging.StreamHandler(sys.stdout))
logger.setLevel(logging.INFO)


class FastNoiseException(Exception):
    pass


class ParameterError(FastNoiseException, ValueError):
    """A parameter lies outside its physical or numerical domain."""
    pass


class RangeError(ParameterError):
    """A frequency or time lies outside the range covered by the data."""
    pass


class ContractError(FastNoiseException):
    """A state or operator does not fit the drive it is used with."""
    pass


class NumericalFailure(FastNoiseException):
    """
    Propagation produced non-finite amplitudes.

    """
    def __init__(self, message, step: Optional[int] = None):
        super().__init__(message if step is None else f"{message} (step {step})")
        self.step = step


class FitError(FastNoiseException):
    pass


class ConfigError(FastNoiseException):
    """
    A run configuration could not be parsed or validated.

    """
    def __init__(self, message, key: Optional[str] = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key
