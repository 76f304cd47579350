##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Step a pure state through one noise realization.

Each step applies exp(-i·H(t_mid)·dt) with the laser phase linearly interpolated at the step midpoint.
Step propagators are exponentiated in batches, then applied one after another.

"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from fastnoise import ContractError, NumericalFailure, ParameterError, RangeError
from fastnoise.constants import NORM_TOLERANCE
from fastnoise.noise import PhaseTrace
from fastnoise.quantum.drive import DriveKind, DriveSpec, drive_coefficient, hamiltonian_terms
from fastnoise.quantum.state import Observable, StateVector

logger = logging.getLogger(__name__)

METHODS = ('midpoint-exponential', )

# relative slack when comparing times against step and trace grids
TIME_SLACK = 1e-9


@dataclass(frozen=True)
class PropagationConfig:
    """
    :param dt:
        Integration step in s. None uses the trace interval; otherwise it must divide it.
    :param method:
        Only 'midpoint-exponential'.
    :param norm_check_every:
        Steps between norm checks.
    :param record_every:
        Trace samples between recorded observables.
    :param chunk_steps:
        Propagators exponentiated per batch.
    :param norm_tolerance:
        Renormalise when the norm drifts further than this from one.

    """
    dt: Optional[float] = None
    method: str = 'midpoint-exponential'
    norm_check_every: int = 100
    record_every: int = 1
    chunk_steps: int = 512
    norm_tolerance: float = NORM_TOLERANCE

    def __post_init__(self):
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise ParameterError(f"dt must be > 0, got {self.dt}")
        if self.method not in METHODS:
            raise ParameterError(f"method must be one of {METHODS}, got '{self.method}'")
        for name in ('norm_check_every', 'record_every', 'chunk_steps'):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ParameterError(f"{name} must be a positive integer, got {value}")
        if not self.norm_tolerance > 0:
            raise ParameterError(f"norm_tolerance must be > 0, got {self.norm_tolerance}")

    def steps_per_sample(self, trace_dt: float) -> int:
        """How many integration steps fit in one trace interval."""
        if self.dt is None:
            return 1
        ratio = trace_dt / self.dt
        steps = round(ratio)
        if steps < 1 or abs(ratio - steps) > 1e-6 * ratio:
            raise ParameterError(f"dt {self.dt} s does not divide the trace interval {trace_dt} s")
        return steps

    def to_dict(self) -> Dict:
        return {'dt': self.dt, 'method': self.method, 'norm_check_every': self.norm_check_every,
                'record_every': self.record_every, 'chunk_steps': self.chunk_steps,
                'norm_tolerance': self.norm_tolerance}


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Recorded expectation values and the final state of one propagation.

    ``times`` are measured from the start of the propagation.

    """
    times: np.ndarray
    values: Dict[str, np.ndarray]
    final_state: StateVector
    n_steps: int
    renormalizations: int

    def __getitem__(self, name) -> np.ndarray:
        return self.values[name]


def step_edges(t0: float, duration: float, dt: float) -> np.ndarray:
    """Step boundaries from t0 to t0 + duration; the last step is shortened to fit."""
    n_full = int(math.floor(duration / dt + TIME_SLACK))
    edges = t0 + np.arange(n_full + 1) * dt
    if duration - n_full * dt > TIME_SLACK * dt:
        edges = np.append(edges, t0 + duration)
    else:
        edges[-1] = t0 + duration
    return edges


def su2_exponential(hamiltonians: np.ndarray, dts: np.ndarray) -> np.ndarray:
    """
    exp(-i·H·dt) for a stack of 2×2 Hermitian matrices, in closed form.

    With H = h0·I + B, B traceless, the result is e^{-i·h0·dt}·(cos(|b|dt)·I - i·sin(|b|dt)/|b|·B).

    """
    h0 = 0.5 * np.real(hamiltonians[:, 0, 0] + hamiltonians[:, 1, 1])
    traceless = hamiltonians - h0[:, None, None] * np.eye(2)
    b = np.sqrt(np.real(traceless[:, 0, 0]) ** 2 + np.abs(traceless[:, 0, 1]) ** 2)
    angle = b * dts
    # sin(|b|dt)/|b| without dividing by zero
    sin_over_b = dts * np.sinc(angle / np.pi)
    unitaries = np.cos(angle)[:, None, None] * np.eye(2) - 1j * sin_over_b[:, None, None] * traceless
    return np.exp(-1j * h0 * dts)[:, None, None] * unitaries


def step_propagators(spec: DriveSpec, phases: np.ndarray, times: np.ndarray, dts: np.ndarray,
                     second_phases: Optional[np.ndarray] = None) -> np.ndarray:
    static, coupling = hamiltonian_terms(spec)
    c = drive_coefficient(spec, phases, times, second_phases)
    hamiltonians = (static[None] + c[:, None, None] * coupling[None]
                    + np.conj(c)[:, None, None] * coupling.conj().T[None])
    if spec.dim == 2:
        return su2_exponential(hamiltonians, dts)
    return expm(-1j * hamiltonians * dts[:, None, None])


def propagate(state: StateVector, spec: DriveSpec, trace: PhaseTrace, duration: float,
              cfg: Optional[PropagationConfig] = None, observables: Sequence[Observable] = (),
              t0: float = 0.0, second_trace: Optional[PhaseTrace] = None) -> Trajectory:
    """
    Evolve a state under the drive with the laser phase taken from a trace.

    :param state:
        Initial state, which must fit the drive.
    :param spec:
        The drive.
    :param trace:
        Laser phase realization covering [t0, t0 + duration].
    :param duration:
        In s.
    :param cfg:
        Step size and bookkeeping.
    :param observables:
        Recorded every cfg.record_every trace samples and at the end.
    :param t0:
        Start time within the trace, used to continue a propagation.
    :param second_trace:
        Phase of the second Mølmer-Sørensen tone when the drive has independent tone noise.

    """
    cfg = cfg or PropagationConfig()
    if not state.fits(spec):
        raise ContractError(f"state of dimension {state.dim} does not fit a {spec.kind} drive of dimension {spec.dim}")
    if spec.independent_tone_noise and second_trace is None:
        raise ContractError("independent tone noise needs a second trace")
    if not (math.isfinite(duration) and duration > 0):
        raise ParameterError(f"duration must be > 0, got {duration}")
    if t0 < 0 or t0 + duration > trace.duration * (1 + TIME_SLACK):
        raise RangeError(f"window [{t0}, {t0 + duration}] s exceeds the {trace.duration} s trace")
    if second_trace is not None and t0 + duration > second_trace.duration * (1 + TIME_SLACK):
        raise RangeError(f"window [{t0}, {t0 + duration}] s exceeds the second trace")
    if not np.all(np.isfinite(state.amplitudes)):
        raise NumericalFailure("initial state is not finite", step=0)

    steps_per_sample = cfg.steps_per_sample(trace.dt)
    dt = trace.dt / steps_per_sample
    edges = step_edges(t0, duration, dt)
    n_steps = len(edges) - 1

    midpoints = 0.5 * (edges[:-1] + edges[1:])
    dts = np.diff(edges)
    phases = np.interp(midpoints, trace.times, trace.samples)
    second_phases = None
    if spec.kind is DriveKind.MOLMER_SORENSEN and second_trace is not None and spec.independent_tone_noise:
        second_phases = np.interp(midpoints, second_trace.times, second_trace.samples)

    stride = steps_per_sample * cfg.record_every
    record_steps = list(range(0, n_steps + 1, stride))
    if record_steps[-1] != n_steps:
        record_steps.append(n_steps)
    record_set = set(record_steps)

    recorded: Dict[str, List[float]] = {o.name: [] for o in observables}

    def record(psi):
        for o in observables:
            recorded[o.name].append(o.expectation(psi))

    psi = state.amplitudes.copy()
    record(psi)
    renormalizations = 0

    for start in range(0, n_steps, cfg.chunk_steps):
        stop = min(n_steps, start + cfg.chunk_steps)
        second = None if second_phases is None else second_phases[start:stop]
        unitaries = step_propagators(spec, phases[start:stop], midpoints[start:stop], dts[start:stop], second)

        for offset, unitary in enumerate(unitaries):
            psi = unitary @ psi
            step = start + offset + 1

            if step % cfg.norm_check_every == 0 or step == n_steps:
                norm = np.linalg.norm(psi)
                if not np.isfinite(norm):
                    raise NumericalFailure("non-finite amplitudes", step=step)
                if abs(norm - 1) > cfg.norm_tolerance:
                    psi = psi / norm
                    renormalizations += 1
                    logger.debug(f"renormalised at step {step}, norm was {norm!r}")

            if step in record_set:
                record(psi)

    times = edges[record_steps] - t0
    values = {name: np.array(v) for name, v in recorded.items()}
    return Trajectory(times, values, StateVector(psi, state.n_qubits, state.fock_cutoff), n_steps, renormalizations)
