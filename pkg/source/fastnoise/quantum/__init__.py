##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Truncated Hilbert spaces, drive Hamiltonians and pure-state propagation through a noisy laser phase.

"""
from fastnoise.quantum.drive import (DriveKind, DriveSpec, blue_sideband_detuning, build_hamiltonian,
                                     ms_gate_detuning, sideband_cycle_time)
from fastnoise.quantum.propagate import PropagationConfig, Trajectory, propagate
from fastnoise.quantum.state import (Observable, StateVector, basis_state, bell_fidelity, calibrate_bell_phase,
                                     excited_population, initial_state, mean_phonons, phonon_number, projector,
                                     read_state, write_state)

__all__ = ['DriveKind', 'DriveSpec', 'Observable', 'PropagationConfig', 'StateVector', 'Trajectory', 'basis_state',
           'bell_fidelity', 'blue_sideband_detuning', 'build_hamiltonian', 'calibrate_bell_phase',
           'excited_population', 'initial_state', 'mean_phonons', 'ms_gate_detuning', 'phonon_number', 'projector',
           'propagate', 'read_state', 'sideband_cycle_time', 'write_state']
