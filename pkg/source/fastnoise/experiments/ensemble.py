##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Seed ensembles: run one task per realization and reduce the results in seed order.

"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from fastnoise import FastNoiseException, ParameterError
from fastnoise.constants import DESK_REALIZATIONS
from fastnoise.experiments import check_for_errors, run_mp
from fastnoise.metrics import send_metric
from fastnoise.noise import NoiseConfig, PhaseTrace, derive_seed
from fastnoise.noise.generate import SEED_LIMIT
from fastnoise.util import Timer, available_cores, log_or_dot, log_or_dot_finish

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnsembleConfig:
    """
    :param n_realizations:
        Number of noise realizations.
    :param base_seed:
        Realization k uses seed base_seed + k.
    :param max_parallel:
        Maximum worker processes, default all available cores.

    """
    n_realizations: int = DESK_REALIZATIONS
    base_seed: int = 0
    max_parallel: Optional[int] = None

    def __post_init__(self):
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise ParameterError(f"n_realizations must be an integer >= 1, got {self.n_realizations}")
        if int(self.base_seed) != self.base_seed or not 0 <= self.base_seed <= SEED_LIMIT - self.n_realizations:
            raise ParameterError(f"base_seed must leave room for {self.n_realizations} seeds below 2**64, "
                                 f"got {self.base_seed}")
        if self.max_parallel is not None and (int(self.max_parallel) != self.max_parallel or self.max_parallel < 1):
            raise ParameterError(f"max_parallel must be an integer >= 1, got {self.max_parallel}")

    @property
    def seeds(self) -> List[int]:
        return [int(self.base_seed) + k for k in range(int(self.n_realizations))]

    @property
    def n_procs(self) -> int:
        return int(self.max_parallel) if self.max_parallel else available_cores()

    def single(self) -> 'EnsembleConfig':
        """The first realization alone, for deterministic (noise-free) runs."""
        return replace(self, n_realizations=1)

    def to_dict(self) -> Dict:
        return {'n_realizations': int(self.n_realizations), 'base_seed': int(self.base_seed),
                'max_parallel': self.max_parallel}


@dataclass(frozen=True)
class RealizationFailure:
    """
    A realization which raised, returned by the worker instead of the exception.

    """
    seed: int
    error_type: str
    message: str
    step: Optional[int] = None

    def __str__(self):
        return f"seed {self.seed}: {self.error_type}: {self.message}"

    def to_dict(self) -> Dict:
        return {'seed': self.seed, 'error_type': self.error_type, 'message': self.message, 'step': self.step}


@dataclass(frozen=True, eq=False)
class RealizationRecord:
    seed: int
    values: Dict[str, np.ndarray]
    elapsed: float
    final_state: Optional[np.ndarray] = None


class RealizationTask(ABC):
    """
    The work for one seed. Subclasses must be picklable, so they can be sent to worker processes.

    """
    label = 'realization'

    #: seed whose final state is kept for ``--dump-state``
    keep_state_seed: Optional[int] = None

    @abstractmethod
    def run(self, seed: int) -> Dict[str, np.ndarray]:
        """
        The observables of one realization; a 'final_state' entry is moved into the record.

        """
        raise NotImplementedError

    def __call__(self, seed: int):
        try:
            with Timer() as timer:
                values = self.run(seed)
        except (FastNoiseException, ArithmeticError, np.linalg.LinAlgError) as err:
            return RealizationFailure(seed, type(err).__name__, str(err), getattr(err, 'step', None))

        final_state = values.pop('final_state', None)
        log_or_dot(logger, f"{self.label}: seed {seed} took {timer.taken:.3f}s")
        return RealizationRecord(seed, values, timer.taken, final_state)


def noise_traces(noise: NoiseConfig, seed: int, second: bool = False) -> Tuple[PhaseTrace, Optional[PhaseTrace]]:
    """The realization's trace, plus an independent one from a derived seed when asked."""
    trace = noise.synthesize(seed)
    if not second:
        return trace, None
    return trace, noise.synthesize(derive_seed(seed, 1))


@dataclass(frozen=True, eq=False)
class EnsembleRun:
    """The records of the successful realizations in seed order, and the failures."""
    records: List[RealizationRecord]
    failures: List[RealizationFailure] = field(default_factory=list)

    @property
    def seeds(self) -> List[int]:
        return [r.seed for r in self.records]

    @property
    def failed_seeds(self) -> List[int]:
        return [f.seed for f in self.failures]

    def first_state(self) -> Optional[np.ndarray]:
        for record in self.records:
            if record.final_state is not None:
                return record.final_state
        return None

    def stack(self, key: str) -> np.ndarray:
        """Per-seed values with the seed along axis 0."""
        return np.stack([np.asarray(r.values[key]) for r in self.records])

    def reduce(self, key: str) -> 'EnsembleStats':
        return reduce_values(self.stack(key), self.seeds, self.failed_seeds)


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """
    Mean and standard error over realizations. The standard error is zero for a single realization.

    """
    mean: np.ndarray
    stderr: np.ndarray
    n: int
    seeds: Tuple[int, ...] = ()
    failed_seeds: Tuple[int, ...] = ()


def reduce_values(values: np.ndarray, seeds: Sequence[int] = (), failed_seeds: Sequence[int] = ()) -> EnsembleStats:
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    mean = np.mean(values, axis=0)
    if n > 1:
        stderr = np.std(values, axis=0, ddof=1) / np.sqrt(n)
    else:
        stderr = np.zeros_like(mean)
    return EnsembleStats(mean, stderr, n, tuple(seeds), tuple(failed_seeds))


def run_ensemble(task: RealizationTask, ensemble: EnsembleConfig) -> EnsembleRun:
    """
    Run the task for every seed of the ensemble, in parallel when allowed.

    Failed realizations are logged and excluded; a :class:`RuntimeError` is raised if every one failed.

    """
    seeds = ensemble.seeds
    logger.info(f"{task.label}: {len(seeds)} realization(s), seeds {seeds[0]}..{seeds[-1]}, "
                f"up to {min(ensemble.n_procs, len(seeds))} process(es)")

    results = run_mp(ensemble.n_procs, seeds, task)
    log_or_dot_finish(logger)

    failures = check_for_errors(results, RealizationFailure, caller_label=task.label)
    records = [r for r in results if isinstance(r, RealizationRecord)]
    for record in records:
        send_metric('realizations', f"{task.label} seed {record.seed}", record.elapsed)

    return EnsembleRun(records, failures)
