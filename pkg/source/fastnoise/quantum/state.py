##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Pure states, observables and the figures of merit read from them.

"""
import cmath
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from fastnoise import ContractError, ParameterError
from fastnoise.quantum.drive import DriveKind, DriveSpec
from fastnoise.quantum.operators import fock_labels, qubit_labels

logger = logging.getLogger(__name__)

LEVELS = {'g': 0, 'e': 1, 'd': 0, 'u': 1, '↓': 0, '↑': 1}


@dataclass(frozen=True, eq=False)
class StateVector:
    """
    Amplitudes over qubits ⊗ Fock states, qubits slow and Fock number fast.

    A state without a fock_cutoff belongs to a drive without motion.

    """
    amplitudes: np.ndarray
    n_qubits: int = 1
    fock_cutoff: Optional[int] = None

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, 'amplitudes', amplitudes)
        if amplitudes.ndim != 1 or len(amplitudes) != self.dim:
            raise ContractError(f"expected {self.dim} amplitudes for {self.n_qubits} qubit(s) and "
                                f"fock_cutoff {self.fock_cutoff}, got shape {amplitudes.shape}")

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits * (self.fock_cutoff or 1)

    @property
    def has_motion(self) -> bool:
        return self.fock_cutoff is not None

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> 'StateVector':
        return StateVector(self.amplitudes / self.norm(), self.n_qubits, self.fock_cutoff)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def fits(self, spec: DriveSpec) -> bool:
        return self.n_qubits == spec.n_qubits and self.fock_cutoff == spec.modes


def basis_index(qubits: str, fock: int = 0, fock_cutoff: Optional[int] = None) -> int:
    """
    Index of a basis state, e.g. ``basis_index('eg', 1, 15)``.

    Qubit levels are written g/e, or equivalently d/u or ↓/↑.

    """
    try:
        levels = [LEVELS[q] for q in qubits]
    except KeyError:
        raise ParameterError(f"qubit levels must be written with g/e, got '{qubits}'")
    modes = fock_cutoff or 1
    if not 0 <= fock < modes:
        raise ParameterError(f"Fock state {fock} outside a cutoff of {modes}")
    qubit_index = int(''.join(map(str, levels)), 2)
    return qubit_index * modes + fock


def basis_state(qubits: str, fock: int = 0, fock_cutoff: Optional[int] = None) -> StateVector:
    amplitudes = np.zeros(2 ** len(qubits) * (fock_cutoff or 1), dtype=complex)
    amplitudes[basis_index(qubits, fock, fock_cutoff)] = 1
    return StateVector(amplitudes, len(qubits), fock_cutoff)


def initial_state(spec: DriveSpec) -> StateVector:
    """
    |g⟩ (⊗|0⟩) for single-ion drives, |↑↑⟩⊗|0⟩ for Mølmer-Sørensen.

    """
    if spec.kind is DriveKind.MOLMER_SORENSEN:
        return basis_state('ee', 0, spec.modes)
    return basis_state('g', 0, spec.modes)


@dataclass(frozen=True, eq=False)
class Observable:
    """
    A named Hermitian operator; a 1-D array stands for a diagonal one.

    """
    name: str
    operator: np.ndarray

    def expectation(self, amplitudes: np.ndarray) -> float:
        if self.operator.ndim == 1:
            return float(np.dot(self.operator, np.abs(amplitudes) ** 2))
        return float(np.real(np.vdot(amplitudes, self.operator @ amplitudes)))


def excited_population(spec: DriveSpec, qubit: int = 0) -> Observable:
    """P_e of one qubit."""
    if not 0 <= qubit < spec.n_qubits:
        raise ContractError(f"qubit {qubit} does not exist in a {spec.n_qubits} qubit drive")
    labels = qubit_labels(spec.n_qubits, spec.modes)
    name = 'P_e' if spec.n_qubits == 1 else f'P_e[{qubit}]'
    return Observable(name, labels[:, qubit].astype(float))


def phonon_number(spec: DriveSpec) -> Observable:
    """⟨a†a⟩ of the shared mode."""
    if not spec.kind.has_motion:
        raise ContractError(f"{spec.kind} drive has no motional mode")
    return Observable('n', fock_labels(spec.n_qubits, spec.modes).astype(float))


def projector(name: str, state: StateVector) -> Observable:
    """The projector |s⟩⟨s| onto a normalised copy of the given state."""
    vector = state.normalized().amplitudes
    return Observable(name, np.outer(vector, vector.conj()))


def mean_phonons(state: StateVector) -> float:
    """
    ⟨a†a⟩, the sum over the basis of n·|amplitude|².

    """
    if not state.has_motion:
        raise ContractError("a state without a motional mode has no phonons")
    populations = state.probabilities().reshape(-1, state.fock_cutoff)
    return float(np.sum(populations.sum(axis=0) * np.arange(state.fock_cutoff)))


def _bell_components(state: StateVector):
    if state.n_qubits != 2:
        raise ContractError(f"Bell fidelity needs a 2 qubit state, got {state.n_qubits}")
    spins = state.amplitudes.reshape(2, 2, state.fock_cutoff or 1)
    return spins[1, 1], spins[0, 0]


def bell_fidelity(state: StateVector, target_phase: float) -> float:
    """
    Overlap of the motion-traced spin state with (|↑↑⟩ + e^{iθ}|↓↓⟩)/√2.

    :param state:
        A two qubit state.
    :param target_phase:
        θ in rad.

    """
    up, down = _bell_components(state)
    overlaps = (up + cmath.exp(-1j * target_phase) * down) / np.sqrt(2)
    return float(np.sum(np.abs(overlaps) ** 2))


def calibrate_bell_phase(state: StateVector) -> float:
    """
    The θ maximising :func:`bell_fidelity`, arg Σ_n conj(u_n)·d_n.

    """
    up, down = _bell_components(state)
    return float(np.angle(np.vdot(up, down)))


def write_state(state: StateVector, path: Union[str, Path], spec: Optional[DriveSpec] = None,
                extra: Optional[dict] = None) -> Path:
    """
    Dump amplitudes as JSON [re, im] pairs with the basis ordering.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {
        'basis': 'qubits slow (0 = g/↓, 1 = e/↑), Fock number fast',
        'n_qubits': state.n_qubits,
        'fock_cutoff': state.fock_cutoff,
        'dim': state.dim,
        'drive': spec.to_dict() if spec else None,
        'amplitudes': [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }
    if extra:
        data.update(extra)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    logger.info(f"wrote final state to {path}")
    return path


def read_state(path: Union[str, Path]) -> StateVector:
    data = json.loads(Path(path).read_text())
    amplitudes = np.array([complex(re, im) for re, im in data['amplitudes']])
    return StateVector(amplitudes, data['n_qubits'], data['fock_cutoff'])
