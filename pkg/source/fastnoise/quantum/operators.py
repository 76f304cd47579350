##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Dense operators on qubits ⊗ one truncated oscillator.

Qubit index 0 is |g⟩ (↓) and 1 is |e⟩ (↑). Qubits are the slow indices and the Fock number the fast one,
so full operators are Kronecker products in the order qubit 0, qubit 1, ..., mode.

"""
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = SIGMA_PLUS.T.copy()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
EXCITED = np.diag([0.0, 1.0]).astype(complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def annihilation(fock_cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, fock_cutoff)), k=1).astype(complex)


def number(fock_cutoff: int) -> np.ndarray:
    return np.diag(np.arange(fock_cutoff)).astype(complex)


def lamb_dicke_kernel(fock_cutoff: int, lamb_dicke: float) -> np.ndarray:
    """First-order expansion of the motional kernel, 1 + iη(a + a†)."""
    a = annihilation(fock_cutoff)
    return np.eye(fock_cutoff, dtype=complex) + 1j * lamb_dicke * (a + a.conj().T)


def embed(qubit_ops: Sequence[Optional[np.ndarray]], mode_op: Optional[np.ndarray] = None,
          fock_cutoff: Optional[int] = None) -> np.ndarray:
    """
    Kronecker product over the qubits then the mode, with None standing for the identity.

    Without a fock_cutoff the result acts on the qubits alone.

    """
    result = np.ones((1, 1), dtype=complex)
    for op in qubit_ops:
        result = np.kron(result, IDENTITY_2 if op is None else op)
    if fock_cutoff:
        result = np.kron(result, np.eye(fock_cutoff, dtype=complex) if mode_op is None else mode_op)
    return result


def single_qubit(op: np.ndarray, qubit: int, n_qubits: int, fock_cutoff: Optional[int] = None) -> np.ndarray:
    ops = [None] * n_qubits
    ops[qubit] = op
    return embed(ops, None, fock_cutoff)


@lru_cache(maxsize=32)
def qubit_labels(n_qubits: int, fock_cutoff: Optional[int]) -> np.ndarray:
    """
    Per basis index, the qubit levels as an (dim, n_qubits) array of 0 (g) and 1 (e).

    """
    levels = np.array(np.unravel_index(np.arange(2 ** n_qubits), (2,) * n_qubits)).T
    labels = np.repeat(levels, fock_cutoff or 1, axis=0)
    labels.flags.writeable = False
    return labels


@lru_cache(maxsize=32)
def fock_labels(n_qubits: int, fock_cutoff: int) -> np.ndarray:
    labels = np.tile(np.arange(fock_cutoff), 2 ** n_qubits)
    labels.flags.writeable = False
    return labels
