##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Mølmer-Sørensen gate infidelity against the RPSD at the trap frequency.

"""
import logging
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from fastnoise import ParameterError
from fastnoise.experiments import step
from fastnoise.experiments.ensemble import EnsembleConfig, RealizationTask, noise_traces, run_ensemble
from fastnoise.experiments.fitting import LinearFit, fit_linear_through_origin, golden_rule_gate_error
from fastnoise.experiments.reference import SpectralSettings, angular_rpsd, reference_spectra, rpsd_values
from fastnoise.experiments.results import ExperimentOutput, GateResult, SeriesTable, seed_summary
from fastnoise.experiments.single_qubit import check_trace_covers, effective_ensemble
from fastnoise.noise import NoiseConfig, silent_trace
from fastnoise.quantum import (DriveKind, DriveSpec, PropagationConfig, StateVector, bell_fidelity,
                               calibrate_bell_phase, initial_state, mean_phonons, propagate)

logger = logging.getLogger(__name__)

# gate time and RPSD, with Ω in rad/s, of the error budget check
BUDGET_GATE_TIME = 100e-6
BUDGET_RPSD = 1.0

FOCK_CHECK_STEP = 5
FOCK_CHECK_TOLERANCE = 1e-4


def gate_time(spec: DriveSpec) -> float:
    """T = 1/δ_g."""
    if not spec.detuning_hz > 0:
        raise ParameterError(f"the gate detuning must be > 0, got {spec.detuning_hz}")
    return 1.0 / spec.detuning_hz


def noise_free_gate(noise: NoiseConfig, spec: DriveSpec, cfg: PropagationConfig) -> StateVector:
    """The final state with φ ≡ 0."""
    duration = gate_time(spec)
    trace = silent_trace(noise.params.n_samples, noise.params.dt)
    return propagate(initial_state(spec), spec, trace, duration, cfg, second_trace=trace).final_state


@dataclass(frozen=True)
class MsGateTask(RealizationTask):
    """Bell fidelity and n̄ at the end of the gate, per noise amplitude, on one realization."""
    noise: NoiseConfig
    spec: DriveSpec
    amplitudes: Tuple[float, ...]
    target_phase: float
    cfg: PropagationConfig
    keep_state_seed: Optional[int] = None

    label = 'ms gates'

    def run(self, seed: int) -> Dict[str, np.ndarray]:
        trace, second = noise_traces(self.noise, seed, self.spec.independent_tone_noise)
        duration = gate_time(self.spec)
        fidelities, phonons = [], []
        final_state = None
        for amplitude in self.amplitudes:
            state = propagate(initial_state(self.spec), self.spec, trace.scaled(amplitude), duration, self.cfg,
                              second_trace=None if second is None else second.scaled(amplitude)).final_state
            fidelities.append(bell_fidelity(state, self.target_phase))
            phonons.append(mean_phonons(state))
            if final_state is None:
                final_state = state.amplitudes

        values = {'fidelity': np.array(fidelities), 'n': np.array(phonons)}
        if seed == self.keep_state_seed:
            values['final_state'] = final_state
        return values


@dataclass(frozen=True, eq=False)
class MsGateResult:
    """
    Per amplitude gate results, the noise-free reference and the law (1 - F) - (1 - F₀) = slope·T·RPSD.

    The law's RPSD is in rad²/s²/Hz, see :func:`~fastnoise.experiments.reference.angular_rpsd`.

    """
    gates: Tuple[GateResult, ...]
    reference_fidelity: float
    target_phase: float
    law: Optional[LinearFit]
    response_hz: float
    seeds: Tuple[int, ...]
    failed_seeds: Tuple[int, ...] = ()
    fock_check: Optional[Dict] = None
    warnings: Tuple[str, ...] = ()
    final_state: Optional[np.ndarray] = None

    @property
    def scaling_x(self) -> np.ndarray:
        return np.array([g.gate_time * angular_rpsd(g.rpsd_at_response) for g in self.gates])

    @property
    def excess_infidelity(self) -> np.ndarray:
        return np.array([g.infidelity - (1 - self.reference_fidelity) for g in self.gates])

    @property
    def budget_infidelity(self) -> Optional[float]:
        """The law evaluated for a 100 μs gate and an RPSD of 1 rad²/s²/Hz, i.e. (2π)⁻² Hz²/Hz."""
        if self.law is None:
            return None
        return float(self.law.predict(BUDGET_GATE_TIME * BUDGET_RPSD))


def fock_convergence(noise: NoiseConfig, spec: DriveSpec, cfg: PropagationConfig, reference_fidelity: float) -> Dict:
    """Noise-free fidelity with FOCK_CHECK_STEP more Fock states."""
    larger = replace(spec, fock_cutoff=spec.fock_cutoff + FOCK_CHECK_STEP)
    state = noise_free_gate(noise, larger, cfg)
    fidelity = bell_fidelity(state, calibrate_bell_phase(state))
    change = abs(fidelity - reference_fidelity)
    return {'fock_cutoff': spec.fock_cutoff, 'larger_cutoff': larger.fock_cutoff, 'fidelity': reference_fidelity,
            'larger_fidelity': fidelity, 'change': change, 'converged': change < FOCK_CHECK_TOLERANCE}


@step
def run_ms_gate(noise: NoiseConfig, amplitudes: Sequence[float], spec: DriveSpec, ensemble: EnsembleConfig,
                cfg: Optional[PropagationConfig] = None, settings: Optional[SpectralSettings] = None,
                response_hz: Optional[float] = None, check_fock: bool = False,
                keep_state: bool = False) -> MsGateResult:
    """
    Ensemble Bell fidelity of the gate at each noise amplitude.

    The Bell phase is calibrated once on the noise-free gate and frozen for all realizations.

    :param noise:
        Noise of unit amplitude.
    :param amplitudes:
        Multipliers of the noise trace.
    :param spec:
        A Mølmer-Sørensen drive whose detuning is the gate detuning, see
        :func:`~fastnoise.quantum.drive.ms_gate_detuning`.
    :param response_hz:
        Offset at which the RPSD is read, default the trap frequency.
    :param check_fock:
        Also run the noise-free gate with more Fock states and record the change in fidelity.

    """
    if spec.kind is not DriveKind.MOLMER_SORENSEN:
        raise ParameterError(f"the gate needs a MolmerSorensen drive, got {spec.kind}")
    if not amplitudes:
        raise ParameterError("at least one noise amplitude is needed")
    cfg = cfg or PropagationConfig()
    settings = settings or SpectralSettings()
    response_hz = spec.trap_hz if response_hz is None else response_hz
    duration = gate_time(spec)
    check_trace_covers(noise, duration)

    reference = noise_free_gate(noise, spec, cfg)
    target_phase = calibrate_bell_phase(reference)
    reference_fidelity = bell_fidelity(reference, target_phase)
    logger.info(f"noise-free gate: T = {duration * 1e6:.2f} μs, F₀ = {reference_fidelity:.6f}, "
                f"θ = {target_phase:.4f} rad")

    warnings: List[str] = []
    fock_check = None
    if check_fock:
        fock_check = fock_convergence(noise, spec, cfg, reference_fidelity)
        if not fock_check['converged']:
            warnings.append(f"noise-free fidelity changes by {fock_check['change']:.2g} with "
                            f"{FOCK_CHECK_STEP} more Fock states")
            logger.warning(warnings[-1])

    ensemble = effective_ensemble(noise, ensemble, amplitudes)
    task = MsGateTask(noise, spec, tuple(amplitudes), target_phase, cfg,
                      keep_state_seed=ensemble.base_seed if keep_state else None)
    task_result = run_ensemble(task, ensemble)
    fidelity = task_result.reduce('fidelity')
    phonons = task_result.reduce('n')

    if np.max(phonons.mean) >= spec.fock_cutoff / 2:
        warnings.append(f"n̄ reached {np.max(phonons.mean):.3g}, at least half the Fock cutoff of {spec.fock_cutoff}")
        logger.warning(warnings[-1])

    rpsd = rpsd_values(reference_spectra(noise, ensemble.seeds, spec.rabi_hz, amplitudes, settings),
                       response_hz, settings)
    per_seed = task_result.stack('fidelity')
    gates = tuple(GateResult(float(np.clip(fidelity.mean[i], 0.0, 1.0)), float(fidelity.stderr[i]), duration,
                             rpsd[i], per_seed[:, i], float(a))
                  for i, a in enumerate(amplitudes))

    result = MsGateResult(gates, reference_fidelity, target_phase, None, response_hz, fidelity.seeds,
                          fidelity.failed_seeds, fock_check, tuple(warnings), task_result.first_state())
    law = None
    if len(gates) >= 3:
        law = fit_linear_through_origin(result.scaling_x, result.excess_infidelity)
        logger.info(f"gate error per T·RPSD: slope {law.slope:.3g} ± {law.stderr:.2g}, r² {law.r_squared:.3f}")
    return replace(result, law=law)


def ms_gate_output(result: MsGateResult, name: str, spec: DriveSpec) -> ExperimentOutput:
    fit = {'model': '(1 - F) - (1 - F0) = slope * T * (2 pi)^2 * rpsd(response)',
           'gate_time_s': gate_time(spec), 'gate_detuning_hz': spec.detuning_hz, 'response_hz': result.response_hz,
           'reference_fidelity': result.reference_fidelity, 'target_phase': result.target_phase,
           'law': result.law.to_dict() if result.law else None,
           'budget': {'gate_time_s': BUDGET_GATE_TIME, 'rpsd': BUDGET_RPSD,
                      'rpsd_hz2_per_hz': BUDGET_RPSD / angular_rpsd(1.0),
                      'infidelity': result.budget_infidelity},
           'fock_check': result.fock_check,
           'points': [dict(g.to_dict(), infidelity=g.infidelity, excess_infidelity=e,
                           golden_rule_infidelity=golden_rule_gate_error(angular_rpsd(g.rpsd_at_response),
                                                                          g.gate_time))
                      for g, e in zip(result.gates, result.excess_infidelity)],
           **seed_summary(result.seeds, result.failed_seeds)}
    amplitudes = np.array([g.amplitude for g in result.gates])
    plotdata = {'amplitude': amplitudes, 'x': result.scaling_x, 'infidelity': [g.infidelity for g in result.gates],
                'excess_infidelity': result.excess_infidelity,
                'stderr': [g.fidelity_stderr for g in result.gates],
                'per_seed_fidelities': [g.per_seed_fidelities for g in result.gates]}
    table = SeriesTable.stacked('amplitude', amplitudes, result.scaling_x[:, None],
                                np.array([[g.infidelity] for g in result.gates]),
                                np.array([[g.fidelity_stderr] for g in result.gates]), len(result.seeds))
    return ExperimentOutput(name, table, fit, plotdata, result.warnings, final_state=result.final_state)
