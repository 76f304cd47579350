# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################

'''This file is read by pytest and provides common fixtures.
'''

import pytest

from fastnoise.experiments.ensemble import EnsembleConfig
from fastnoise.noise import NoiseConfig, NoiseModelParams, ServoShape
from fastnoise.quantum import DriveKind, DriveSpec


# This avoids pylint warnings about Redefining names from outer scope
@pytest.fixture(name="silent_noise")
def fixture_silent_noise():
    '''Provides noise-free traces of 1 ms at 10 MHz.'''
    return NoiseConfig(NoiseModelParams(h0=0.0, sample_rate=10e6, n_samples=10001), ServoShape(enabled=False))


@pytest.fixture(name="brown_noise")
def fixture_brown_noise():
    '''Provides unshaped 1/f² noise, 16k samples at 1 MHz.'''
    return NoiseConfig(NoiseModelParams(h0=100.0, leak=1e-6, sample_rate=1e6, n_samples=2 ** 14),
                       ServoShape(enabled=False))


@pytest.fixture(name="servo_noise")
def fixture_servo_noise():
    '''Provides 1/f² noise shaped by a 200 kHz servo loop, 64k samples at 10 MHz.'''
    return NoiseConfig(NoiseModelParams(h0=1000.0, leak=1e-4, sample_rate=10e6, n_samples=2 ** 16),
                       ServoShape(unity_gain_freq=200e3, gain_db=80.0, bump_quality=2.0))


@pytest.fixture(name="carrier_spec")
def fixture_carrier_spec():
    return DriveSpec(DriveKind.CARRIER, rabi_hz=100e3)


@pytest.fixture(name="sideband_spec")
def fixture_sideband_spec():
    return DriveSpec(DriveKind.SIDEBAND_ION, rabi_hz=20e3, detuning_hz=200e3, trap_hz=200e3, lamb_dicke=0.15,
                     fock_cutoff=6)


@pytest.fixture(name="ms_spec")
def fixture_ms_spec():
    return DriveSpec(DriveKind.MOLMER_SORENSEN, rabi_hz=20e3, detuning_hz=200e3 / 33, trap_hz=200e3,
                     lamb_dicke=0.15, fock_cutoff=8, n_qubits=2)


@pytest.fixture(name="small_ensemble")
def fixture_small_ensemble():
    '''Provides a few realizations run in this process.'''
    return EnsembleConfig(n_realizations=4, base_seed=11, max_parallel=1)
