##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Drive descriptions and their Hamiltonians.

Every Hamiltonian has the form H(t) = H0 + c(t)·A + c*(t)·A†, in rad/s, where only the complex
coefficient c depends on time and on the laser phase.

"""
import math
from dataclasses import dataclass
from enum import Enum, auto
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from fastnoise import ParameterError
from fastnoise.quantum.operators import SIGMA_PLUS, SIGMA_Z, embed, lamb_dicke_kernel, number, single_qubit


class DriveKind(Enum):
    """The supported drive geometries."""

    CARRIER = auto()
    SIDEBAND_ION = auto()
    MOLMER_SORENSEN = auto()

    def __str__(self):
        return str(self.name)

    @property
    def has_motion(self) -> bool:
        return self is not DriveKind.CARRIER

    @classmethod
    def from_name(cls, name: str) -> 'DriveKind':
        key = name.strip().upper().replace('-', '_')
        aliases = {'SIDEBAND': 'SIDEBAND_ION', 'MS': 'MOLMER_SORENSEN'}
        try:
            return cls[aliases.get(key, key)]
        except KeyError:
            raise ParameterError(f"unknown drive kind '{name}'")


@dataclass(frozen=True)
class DriveSpec:
    """
    A laser drive on one or two ions.

    :param kind:
        The drive geometry.
    :param rabi_hz:
        Ω in Hz.
    :param detuning_hz:
        Δ in Hz, laser minus atomic frequency, so the blue sideband is at +trap_hz. For Mølmer-Sørensen this
        is the gate detuning δ_g of each tone from its sideband.
    :param trap_hz:
        ν in Hz.
    :param lamb_dicke:
        η.
    :param fock_cutoff:
        Number of Fock states kept.
    :param n_qubits:
        1, or 2 for Mølmer-Sørensen.
    :param independent_tone_noise:
        Mølmer-Sørensen only: each tone carries its own phase noise.

    """
    kind: DriveKind = DriveKind.CARRIER
    rabi_hz: float = 100e3
    detuning_hz: float = 0.0
    trap_hz: float = 200e3
    lamb_dicke: float = 0.15
    fock_cutoff: int = 15
    n_qubits: int = 1
    independent_tone_noise: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not (math.isfinite(self.rabi_hz) and self.rabi_hz > 0):
            raise ParameterError(f"rabi_hz must be > 0, got {self.rabi_hz}")
        if not math.isfinite(self.detuning_hz):
            raise ParameterError(f"detuning_hz must be finite, got {self.detuning_hz}")
        if self.kind is DriveKind.MOLMER_SORENSEN and self.n_qubits != 2:
            raise ParameterError("MolmerSorensen requires n_qubits=2")
        if self.kind is not DriveKind.MOLMER_SORENSEN and self.n_qubits != 1:
            raise ParameterError(f"{self.kind} drives act on one qubit, got n_qubits={self.n_qubits}")
        if self.independent_tone_noise and self.kind is not DriveKind.MOLMER_SORENSEN:
            raise ParameterError("independent_tone_noise only applies to MolmerSorensen")
        if self.kind.has_motion:
            if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 2:
                raise ParameterError(f"fock_cutoff must be an integer >= 2, got {self.fock_cutoff}")
            if not 0 < self.lamb_dicke < 0.5:
                raise ParameterError(f"lamb_dicke must be in (0, 0.5), got {self.lamb_dicke}")
            if not (math.isfinite(self.trap_hz) and self.trap_hz > 0):
                raise ParameterError(f"trap_hz must be > 0, got {self.trap_hz}")

    @property
    def modes(self) -> Optional[int]:
        """The Fock cutoff, or None for a drive without motion."""
        return int(self.fock_cutoff) if self.kind.has_motion else None

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits * (self.modes or 1)

    def to_dict(self) -> Dict:
        return {'kind': self.kind.name, 'rabi_hz': self.rabi_hz, 'detuning_hz': self.detuning_hz,
                'trap_hz': self.trap_hz, 'lamb_dicke': self.lamb_dicke, 'fock_cutoff': int(self.fock_cutoff),
                'n_qubits': self.n_qubits, 'independent_tone_noise': self.independent_tone_noise}


def _frozen(*arrays):
    for array in arrays:
        array.flags.writeable = False
    return arrays


@lru_cache(maxsize=16)
def hamiltonian_terms(spec: DriveSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    The static part H0 and the coupling A, both in rad/s.

    """
    two_pi = 2 * np.pi
    if spec.kind is DriveKind.CARRIER:
        static = -two_pi * spec.detuning_hz / 2 * SIGMA_Z
        coupling = two_pi * spec.rabi_hz / 2 * SIGMA_PLUS
        return _frozen(static, coupling)

    kernel = lamb_dicke_kernel(spec.modes, spec.lamb_dicke)
    motion = two_pi * spec.trap_hz * embed([None] * spec.n_qubits, number(spec.modes), spec.modes)

    if spec.kind is DriveKind.SIDEBAND_ION:
        static = motion - two_pi * spec.detuning_hz / 2 * single_qubit(SIGMA_Z, 0, 1, spec.modes)
        coupling = two_pi * spec.rabi_hz / 2 * embed([SIGMA_PLUS], kernel, spec.modes)
        return _frozen(static, coupling)

    # the tone amplitude lives in the coefficient, see drive_coefficient
    coupling = sum(two_pi * embed([SIGMA_PLUS if j == q else None for j in range(spec.n_qubits)], kernel, spec.modes)
                   for q in range(spec.n_qubits))
    return _frozen(motion, coupling)


def drive_coefficient(spec: DriveSpec, phase, t, second_phase=None) -> np.ndarray:
    """
    The coefficient c of the coupling A, vectorised over phase and t.

    For Mølmer-Sørensen this is Ω·cos(2π(ν+δ)t)·e^{iφ}, or the sum of the two tones
    (Ω/2)·e^{i(φ1 + 2π(ν+δ)t)} + (Ω/2)·e^{i(φ2 - 2π(ν+δ)t)} when they carry independent noise.

    """
    phase = np.asarray(phase, dtype=float)
    if spec.kind is not DriveKind.MOLMER_SORENSEN:
        return np.exp(1j * phase)

    beat = 2 * np.pi * (spec.trap_hz + spec.detuning_hz) * np.asarray(t, dtype=float)
    if second_phase is None:
        return spec.rabi_hz * np.cos(beat) * np.exp(1j * phase)
    second_phase = np.asarray(second_phase, dtype=float)
    return spec.rabi_hz / 2 * (np.exp(1j * (phase + beat)) + np.exp(1j * (second_phase - beat)))


def build_hamiltonian(spec: DriveSpec, phase: float, t: float, second_phase: Optional[float] = None) -> np.ndarray:
    """
    H(t)/ħ in rad/s for the given laser phase.

    :param spec:
        The drive.
    :param phase:
        Laser phase φ(t) in rad.
    :param t:
        Time in s, which only the Mølmer-Sørensen beat depends on.
    :param second_phase:
        Phase of the second Mølmer-Sørensen tone when the tones carry independent noise.

    """
    static, coupling = hamiltonian_terms(spec)
    c = complex(drive_coefficient(spec, phase, t, second_phase))
    return static + c * coupling + np.conj(c) * coupling.conj().T


def blue_sideband_detuning(rabi_hz: float, trap_hz: float, light_shift: bool = True) -> float:
    """
    Laser detuning putting |g,n⟩ ↔ |e,n+1⟩ on resonance.

    The carrier dresses both levels, so the resonance moves from ν to sqrt(ν² - Ω²). Without ``light_shift``
    this is the bare sideband, Δ = +ν.

    """
    if not light_shift:
        return trap_hz
    if rabi_hz >= trap_hz:
        raise ParameterError(f"rabi_hz {rabi_hz} must be below trap_hz {trap_hz} to resolve the sideband")
    return math.sqrt(trap_hz ** 2 - rabi_hz ** 2)


def ms_gate_detuning(rabi_hz: float, lamb_dicke: float, trap_hz: float, commensurate: bool = True) -> float:
    """
    Gate detuning δ_g closing one phase-space loop at T = 1/δ_g with a maximally entangling phase.

    The single loop value is 2ηΩ. When commensurate, it is moved to the nearest ν/k so the gate lasts a whole
    number of tone beat periods and the carrier term returns to zero at the end: ν/33 for Ω = 20 kHz, η = 0.15,
    ν = 200 kHz.

    """
    detuning = 2 * lamb_dicke * rabi_hz
    if not commensurate:
        return detuning
    k = max(1, round(trap_hz / detuning))
    return trap_hz / k


def sideband_cycle_time(spec: DriveSpec) -> float:
    """One full |g,0⟩ → |e,1⟩ → |g,0⟩ period, 1/(ηΩ)."""
    return 1.0 / (spec.lamb_dicke * spec.rabi_hz)
