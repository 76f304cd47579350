import cmath
import math

import numpy as np
import pytest

from fastnoise import ContractError, ParameterError
from fastnoise.quantum import (StateVector, basis_state, bell_fidelity, calibrate_bell_phase, excited_population,
                               initial_state, mean_phonons, phonon_number, projector, read_state, write_state)
from fastnoise.quantum.state import basis_index


def bell_state(theta, fock_cutoff=3):
    amplitudes = np.zeros(4 * fock_cutoff, dtype=complex)
    amplitudes[basis_index('ee', 0, fock_cutoff)] = 1 / math.sqrt(2)
    amplitudes[basis_index('gg', 0, fock_cutoff)] = cmath.exp(1j * theta) / math.sqrt(2)
    return StateVector(amplitudes, 2, fock_cutoff)


class Test_basis_index(object):

    def test_qubits_slow(self):
        assert basis_index('eg', 1, 15) == 31
        assert basis_index('e') == 1

    def test_aliases(self):
        assert basis_index('uu', 0, 4) == basis_index('ee', 0, 4) == basis_index('↑↑', 0, 4)
        assert basis_index('d', 0, 4) == 0

    def test_invalid(self):
        with pytest.raises(ParameterError):
            basis_index('x')
        with pytest.raises(ParameterError):
            basis_index('g', 5, 5)


class TestStateVector(object):

    def test_wrong_length(self):
        with pytest.raises(ContractError):
            StateVector(np.ones(3), 1, None)

    def test_fits(self, sideband_spec, carrier_spec):
        state = initial_state(sideband_spec)
        assert state.fits(sideband_spec)
        assert not state.fits(carrier_spec)

    def test_normalized(self):
        state = StateVector(np.array([3.0, 4.0]))
        assert state.normalized().norm() == pytest.approx(1.0)


class Test_initial_state(object):

    def test_carrier(self, carrier_spec):
        assert np.array_equal(initial_state(carrier_spec).amplitudes, [1, 0])

    def test_ms(self, ms_spec):
        state = initial_state(ms_spec)
        assert state.amplitudes[basis_index('ee', 0, ms_spec.fock_cutoff)] == 1
        assert state.norm() == 1


class TestObservables(object):

    def test_excited_population(self, carrier_spec):
        observable = excited_population(carrier_spec)
        assert observable.name == 'P_e'
        assert observable.expectation(np.array([0.6, 0.8])) == pytest.approx(0.64)

    def test_excited_population_per_qubit(self, ms_spec):
        observable = excited_population(ms_spec, 1)
        assert observable.name == 'P_e[1]'
        state = basis_state('ge', 2, ms_spec.fock_cutoff)
        assert observable.expectation(state.amplitudes) == 1

    def test_missing_qubit(self, carrier_spec):
        with pytest.raises(ContractError):
            excited_population(carrier_spec, 1)

    def test_phonon_number(self, sideband_spec):
        state = basis_state('e', 3, sideband_spec.fock_cutoff)
        assert phonon_number(sideband_spec).expectation(state.amplitudes) == 3

    def test_phonon_number_needs_motion(self, carrier_spec):
        with pytest.raises(ContractError):
            phonon_number(carrier_spec)

    def test_projector(self):
        target = StateVector(np.array([1.0, 1.0j]))
        assert projector('plus_y', target).expectation(target.normalized().amplitudes) == pytest.approx(1.0)


class Test_mean_phonons(object):

    def test_superposition(self):
        amplitudes = np.zeros(8, dtype=complex)
        amplitudes[[1, 7]] = 1 / math.sqrt(2)
        # |g,1> and |e,3>
        assert mean_phonons(StateVector(amplitudes, 1, 4)) == pytest.approx(2.0)

    def test_needs_motion(self):
        with pytest.raises(ContractError):
            mean_phonons(StateVector(np.array([1.0, 0.0])))


class TestBellFidelity(object):

    def test_ideal(self):
        assert bell_fidelity(bell_state(0.7), 0.7) == pytest.approx(1.0)

    def test_wrong_phase(self):
        assert bell_fidelity(bell_state(0.7), 0.7 + math.pi) == pytest.approx(0.0, abs=1e-12)

    def test_calibrate(self):
        assert calibrate_bell_phase(bell_state(-1.2)) == pytest.approx(-1.2)

    def test_motion_traced(self):
        # the spin pair entangled with different Fock states keeps half the fidelity
        amplitudes = np.zeros(12, dtype=complex)
        amplitudes[basis_index('ee', 0, 3)] = 1 / math.sqrt(2)
        amplitudes[basis_index('gg', 1, 3)] = 1 / math.sqrt(2)
        assert bell_fidelity(StateVector(amplitudes, 2, 3), 0.0) == pytest.approx(0.5)

    def test_needs_two_qubits(self):
        with pytest.raises(ContractError):
            bell_fidelity(StateVector(np.array([1.0, 0.0])), 0.0)


class Test_write_state(object):

    def test_read_back(self, tmp_path, sideband_spec):
        state = basis_state('e', 2, sideband_spec.fock_cutoff)
        path = write_state(state, tmp_path / 'state.json', sideband_spec, extra={'seed': 3})

        loaded = read_state(path)
        assert np.array_equal(loaded.amplitudes, state.amplitudes)
        assert loaded.fock_cutoff == sideband_spec.fock_cutoff
