##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Motional heating under repeated blue sideband cycles.

"""
import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fastnoise import FitError, ParameterError
from fastnoise.experiments import step
from fastnoise.experiments.ensemble import EnsembleConfig, RealizationTask, run_ensemble
from fastnoise.experiments.fitting import LinearFit, fit_linear
from fastnoise.experiments.results import ExperimentOutput, SeriesTable, seed_summary
from fastnoise.experiments.single_qubit import check_trace_covers, effective_ensemble
from fastnoise.noise import NoiseConfig
from fastnoise.quantum import DriveKind, DriveSpec, PropagationConfig, initial_state, mean_phonons, propagate
from fastnoise.quantum.drive import sideband_cycle_time

logger = logging.getLogger(__name__)

# the growth fit ignores the cycles before this one
FIT_FROM_CYCLE = 2


@dataclass(frozen=True)
class HeatingTask(RealizationTask):
    """n̄ after each requested number of sideband cycles, continuing one propagation along one trace."""
    noise: NoiseConfig
    spec: DriveSpec
    cycles: Tuple[int, ...]
    cfg: PropagationConfig
    keep_state_seed: Optional[int] = None

    label = 'sideband cycles'

    def run(self, seed: int) -> Dict[str, np.ndarray]:
        trace = self.noise.synthesize(seed)
        period = sideband_cycle_time(self.spec)
        state = initial_state(self.spec)
        phonons = []
        done = 0
        for cycle in self.cycles:
            if cycle > done:
                state = propagate(state, self.spec, trace, (cycle - done) * period, self.cfg,
                                  t0=done * period).final_state
                done = cycle
            phonons.append(mean_phonons(state))

        values = {'n': np.array(phonons)}
        if seed == self.keep_state_seed:
            values['final_state'] = state.amplitudes
        return values


@dataclass(frozen=True, eq=False)
class HeatingResult:
    """
    Ensemble n̄ per cycle count, and a straight line fitted from the second cycle on.

    """
    cycles: np.ndarray
    mean_phonons: np.ndarray
    stderr: np.ndarray
    n: int
    growth: Optional[LinearFit]
    seeds: Tuple[int, ...]
    failed_seeds: Tuple[int, ...] = ()
    warnings: Tuple[str, ...] = ()
    final_state: Optional[np.ndarray] = None


@step
def run_heating(noise: NoiseConfig, spec: DriveSpec, n_cycles: Sequence[int], ensemble: EnsembleConfig,
                cfg: Optional[PropagationConfig] = None, keep_state: bool = False) -> HeatingResult:
    """
    Drive whole blue sideband cycles of 1/(ηΩ) from |g,0⟩ and read n̄ after each requested count.

    :param spec:
        A sideband drive, normally detuned by :func:`~fastnoise.quantum.drive.blue_sideband_detuning`.
    :param n_cycles:
        Cycle counts at which n̄ is recorded.

    """
    if spec.kind is not DriveKind.SIDEBAND_ION:
        raise ParameterError(f"heating needs a sideband drive, got {spec.kind}")
    cycles = tuple(sorted({int(k) for k in n_cycles}))
    if not cycles or cycles[0] < 0:
        raise ParameterError(f"cycle counts must be >= 0, got {list(n_cycles)}")
    if abs(spec.detuning_hz - spec.trap_hz) > spec.lamb_dicke * spec.rabi_hz:
        logger.warning(f"detuning {spec.detuning_hz} Hz is more than a sideband linewidth from the blue sideband")

    cfg = cfg or PropagationConfig()
    check_trace_covers(noise, cycles[-1] * sideband_cycle_time(spec))
    ensemble = effective_ensemble(noise, ensemble)

    task = HeatingTask(noise, spec, cycles, cfg, keep_state_seed=ensemble.base_seed if keep_state else None)
    task_result = run_ensemble(task, ensemble)
    stats = task_result.reduce('n')

    warnings = []
    if np.max(stats.mean) >= spec.fock_cutoff / 2:
        message = (f"n̄ reached {np.max(stats.mean):.3g}, at least half the Fock cutoff of {spec.fock_cutoff}; "
                   f"results are affected by truncation")
        logger.warning(message)
        warnings.append(message)

    cycle_array = np.array(cycles, dtype=float)
    late = cycle_array >= FIT_FROM_CYCLE
    growth = None
    if np.count_nonzero(late) >= 3:
        try:
            growth = fit_linear(cycle_array[late], stats.mean[late])
            logger.info(f"heating: {growth.slope:.4g} phonons per cycle, r² {growth.r_squared:.3f}")
        except FitError as err:
            warnings.append(f"heating growth fit: {err}")

    return HeatingResult(cycle_array, stats.mean, stats.stderr, stats.n, growth, stats.seeds, stats.failed_seeds,
                         tuple(warnings), task_result.first_state())


def heating_output(result: HeatingResult, name: str, spec: DriveSpec) -> ExperimentOutput:
    fit = {'model': 'n = intercept + slope * cycle, for cycle >= 2',
           'cycle_time_s': sideband_cycle_time(spec), 'detuning_hz': spec.detuning_hz,
           'fit': result.growth.to_dict() if result.growth else None,
           **seed_summary(result.seeds, result.failed_seeds)}
    plotdata = {'cycle': result.cycles, 'n_mean': result.mean_phonons, 'stderr': result.stderr}
    table = SeriesTable.single(result.cycles, result.mean_phonons, result.stderr, result.n)
    return ExperimentOutput(name, table, fit, plotdata, result.warnings, final_state=result.final_state)
