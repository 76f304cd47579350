##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Result types and the per-experiment files they are written to.

"""
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from fastnoise import ParameterError
from fastnoise.constants import FIT_SUFFIX, PLOTDATA_SUFFIX, SERIES_SUFFIX, TRACE_SUFFIX
from fastnoise.noise.export import write_trace
from fastnoise.spectral.export import write_spectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TimeSeriesResult:
    """
    Ensemble means of one observable against time.

    ``fit`` holds whatever model the experiment fits to the series, if any.

    """
    times: np.ndarray
    means: np.ndarray
    stderrs: np.ndarray
    observable_name: str
    n: int
    seeds: Tuple[int, ...] = ()
    failed_seeds: Tuple[int, ...] = ()
    warnings: Tuple[str, ...] = ()
    fit: Any = None
    final_state: Optional[np.ndarray] = None

    def __post_init__(self):
        if not len(self.times) == len(self.means) == len(self.stderrs):
            raise ParameterError("times, means and stderrs must have equal lengths")
        if np.any(np.diff(self.times) < 0):
            raise ParameterError("times must be ascending")


@dataclass(frozen=True, eq=False)
class GateResult:
    """
    Ensemble Bell fidelity of one noise amplitude.

    """
    fidelity: float
    fidelity_stderr: float
    gate_time: float
    rpsd_at_response: float
    per_seed_fidelities: np.ndarray
    amplitude: float = 1.0

    def __post_init__(self):
        if not 0 <= self.fidelity <= 1:
            raise ParameterError(f"fidelity {self.fidelity} outside [0, 1]")

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity

    def to_dict(self) -> Dict:
        return {'amplitude': self.amplitude, 'fidelity': self.fidelity, 'fidelity_stderr': self.fidelity_stderr,
                'gate_time': self.gate_time, 'rpsd_at_response': self.rpsd_at_response}


@dataclass(frozen=True, eq=False)
class SeriesTable:
    """
    Tidy long rows of (x, mean, stderr, n), optionally tagged with a numeric series value such as an amplitude.

    """
    x: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    n: np.ndarray
    series_name: Optional[str] = None
    series: Optional[np.ndarray] = None

    @classmethod
    def single(cls, x, mean, stderr, n) -> 'SeriesTable':
        x = np.asarray(x, dtype=float)
        return cls(x, np.asarray(mean, dtype=float), np.asarray(stderr, dtype=float), np.broadcast_to(n, x.shape))

    @classmethod
    def stacked(cls, series_name: str, series_values, x, means, stderrs, n) -> 'SeriesTable':
        """Rows for several curves; ``x`` may be shared or given per curve."""
        means = np.asarray(means, dtype=float)
        x = np.broadcast_to(np.asarray(x, dtype=float), means.shape)
        tags = np.broadcast_to(np.asarray(series_values, dtype=float)[:, None], means.shape)
        return cls(x.ravel(), means.ravel(), np.asarray(stderrs, dtype=float).ravel(),
                   np.broadcast_to(n, means.shape).ravel(), series_name, tags.ravel())

    def write(self, path: Path):
        columns = [self.x, self.mean, self.stderr, self.n]
        header = ['x', 'mean', 'stderr', 'n']
        fmt = ['%.17g', '%.17g', '%.17g', '%d']
        if self.series is not None:
            columns.insert(0, self.series)
            header.insert(0, self.series_name)
            fmt.insert(0, '%.17g')
        np.savetxt(path, np.column_stack(columns), delimiter=',', header=','.join(header), comments='', fmt=fmt)


def jsonable(obj):
    """
    Convert numpy values, paths and tuples for json; non-finite floats become None.

    """
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def canonical_json(obj) -> str:
    """Sorted keys and two-space indents, so equal content gives equal bytes."""
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


@dataclass(frozen=True, eq=False)
class ExperimentOutput:
    """
    What an experiment hands back for writing: its table, its fit document and its plot data.

    """
    name: str
    table: SeriesTable
    fit: Dict
    plotdata: Dict = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()
    spectra: Dict[str, Any] = field(default_factory=dict)
    trace: Any = None
    noise: Any = None
    final_state: Any = None

    def write(self, path_for: Callable[[str], Path]) -> List[Path]:
        """
        Write the files, asking *path_for* where each file name goes.

        :returns:
            The paths written, in a fixed order.

        """
        series_path = path_for(self.name + SERIES_SUFFIX)
        self.table.write(series_path)

        fit_path = path_for(self.name + FIT_SUFFIX)
        fit_path.write_text(canonical_json(dict(self.fit, warnings=list(self.warnings))))

        paths = [series_path, fit_path]
        if self.plotdata:
            plot_path = path_for(self.name + PLOTDATA_SUFFIX)
            plot_path.write_text(canonical_json(self.plotdata))
            paths.append(plot_path)

        for suffix, spectrum in self.spectra.items():
            paths.extend(write_spectrum(spectrum, path_for(self.name + suffix)))
        if self.trace is not None:
            params, shape = (self.noise.params, self.noise.shape) if self.noise else (None, None)
            paths.extend(write_trace(self.trace, path_for(self.name + TRACE_SUFFIX), params, shape))

        logger.info(f"wrote {len(paths)} {self.name} output file(s)")
        return paths


def seed_summary(seeds, failed_seeds=()) -> Dict:
    """The exact seeds behind a mean, and those excluded."""
    seeds = [int(s) for s in seeds]
    return {'n': len(seeds), 'seed_range': [min(seeds), max(seeds)] if seeds else None, 'seeds': seeds,
            'failed_seeds': [int(s) for s in failed_seeds]}
