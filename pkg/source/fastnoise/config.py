##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Contains the :class:`~fastnoise.config.RunConfig` and its parser.

A run configuration is a JSON or TOML document with the top level keys ``experiment``, ``output_dir`` and
``paper_scale`` and the tables ``noise``, ``servo``, ``drive``, ``ensemble``, ``propagation``, ``spectral`` and
``params``. Every number is in SI units (Hz, s, rad). Unknown keys are errors.

"""
import json
import logging
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

from fastnoise import ConfigError, ParameterError
from fastnoise.constants import (EXPERIMENTS, HEATING, MS_GATE, NOISE_ONLY, PAPER_FOCK_CUTOFF, PAPER_REALIZATIONS,
                                 PI_SCAN_RABI, PI_SCAN_RPSD, PUMPING, PUMPING_SCAN, RABI)
from fastnoise.experiments.ensemble import EnsembleConfig
from fastnoise.experiments.reference import SpectralSettings
from fastnoise.noise import NoiseConfig, NoiseModelParams, ServoShape
from fastnoise.quantum import DriveKind, DriveSpec, PropagationConfig, blue_sideband_detuning, ms_gate_detuning
from fastnoise.quantum.drive import sideband_cycle_time

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)


#
# value checkers, each returning the cleaned value or raising ConfigError naming the key
#

def _number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number in SI units, got {value!r}", key)
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {value!r}", key)
    return float(value)


def _integer(value, key):
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", key)
    return value


def _boolean(value, key):
    if not isinstance(value, bool):
        raise ConfigError(f"expected true or false, got {value!r}", key)
    return value


def _string(value, key):
    if not isinstance(value, str):
        raise ConfigError(f"expected a string, got {value!r}", key)
    return value


def _optional(check):
    def checker(value, key):
        return None if value is None else check(value, key)
    return checker


def _list_of(check):
    def checker(value, key):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"expected a list, got {value!r}", key)
        return [check(v, f"{key}[{i}]") for i, v in enumerate(value)]
    return checker


def _cycles(value, key):
    # a single count k means every cycle from 1 to k
    if isinstance(value, (list, tuple)):
        return _list_of(_integer)(value, key)
    return list(range(1, _integer(value, key) + 1))


SCHEMA: Dict[str, Dict[str, Callable]] = {
    'noise': {'h0': _number, 'leak': _number, 'sample_rate': _number, 'n_samples': _integer,
              'rms_target': _optional(_number)},
    'servo': {'enabled': _boolean, 'unity_gain_freq': _number, 'gain_db': _number,
              'poles': _optional(_list_of(_number)), 'zeros': _optional(_list_of(_number)),
              'bump_quality': _number},
    'drive': {'kind': _string, 'rabi_hz': _number, 'detuning_hz': _optional(_number), 'trap_hz': _number,
              'lamb_dicke': _number, 'fock_cutoff': _integer, 'n_qubits': _integer,
              'independent_tone_noise': _boolean},
    'ensemble': {'n_realizations': _integer, 'base_seed': _integer, 'max_parallel': _optional(_integer)},
    'propagation': {'dt': _optional(_number), 'method': _string, 'norm_check_every': _integer,
                    'record_every': _integer, 'chunk_steps': _integer, 'norm_tolerance': _number},
    'spectral': {'segment_len': _optional(_integer), 'overlap_frac': _number, 'carrier_band': _optional(_number),
                 'normalization': _string, 'band_hz': _number, 'n_reference': _integer},
}

# experiment parameters: checker and default, where a default of REQUIRED must be given
REQUIRED = object()

PARAMS: Dict[str, Dict[str, Any]] = {
    RABI: {'duration': (_number, REQUIRED)},
    PI_SCAN_RABI: {'rabi_list': (_list_of(_number), REQUIRED)},
    PI_SCAN_RPSD: {'amplitudes': (_list_of(_number), REQUIRED)},
    PUMPING: {'duration': (_number, REQUIRED), 'amplitude': (_number, 1.0)},
    PUMPING_SCAN: {'duration': (_number, REQUIRED), 'amplitudes': (_list_of(_number), REQUIRED)},
    HEATING: {'n_cycles': (_cycles, REQUIRED), 'light_shift': (_boolean, True)},
    MS_GATE: {'amplitudes': (_list_of(_number), REQUIRED), 'commensurate': (_boolean, True),
              'check_fock': (_boolean, False), 'response_hz': (_optional(_number), None)},
    NOISE_ONLY: {'amplitude': (_number, 1.0), 'rpsd': (_boolean, True)},
}

DRIVE_KINDS = {HEATING: DriveKind.SIDEBAND_ION, MS_GATE: DriveKind.MOLMER_SORENSEN}

# Ω, ν and η of the sideband experiments
MOTIONAL_DRIVE_DEFAULTS = {'rabi_hz': 20e3, 'trap_hz': 200e3, 'lamb_dicke': 0.15}

TOP_LEVEL = {'experiment', 'output_dir', 'paper_scale', 'params'} | set(SCHEMA)


@dataclass(frozen=True)
class RunConfig:
    """
    A fully validated run. Build it with :func:`parse_config`.

    """
    experiment: str
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    drive: DriveSpec = field(default_factory=DriveSpec)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    spectral: SpectralSettings = field(default_factory=SpectralSettings)
    params: Dict[str, Any] = field(default_factory=dict)
    output_dir: Optional[Path] = None
    paper_scale: bool = False

    def to_dict(self) -> Dict:
        """
        The resolved configuration. Parsing it again gives the same configuration.

        """
        return {
            'experiment': self.experiment,
            'output_dir': str(self.output_dir) if self.output_dir else None,
            'paper_scale': self.paper_scale,
            'noise': self.noise.params.to_dict(),
            'servo': self.noise.shape.to_dict(),
            'drive': self.drive.to_dict(),
            'ensemble': self.ensemble.to_dict(),
            'propagation': self.propagation.to_dict(),
            'spectral': self.spectral.to_dict(),
            'params': dict(self.params),
        }

    def science_dict(self) -> Dict:
        """
        :meth:`to_dict` without the output folder and worker count, which cannot change any result.

        """
        echo = self.to_dict()
        del echo['output_dir']
        echo['ensemble'] = {k: v for k, v in echo['ensemble'].items() if k != 'max_parallel'}
        return echo

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'


def load_document(path: Union[str, Path]) -> Dict:
    """
    Read a JSON or TOML configuration, chosen by the file extension.

    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read configuration: {err}")

    try:
        if path.suffix.lower() == '.toml':
            return tomllib.loads(text)
        return json.loads(text)
    except (ValueError, tomllib.TOMLDecodeError) as err:
        raise ConfigError(f"cannot parse {path.name}: {err}")


def _section(document: Dict, name: str) -> Dict:
    values = document.get(name) or {}
    if not isinstance(values, dict):
        raise ConfigError("expected a table", name)

    schema = SCHEMA[name]
    clean = {}
    for key, value in values.items():
        if key not in schema:
            raise ConfigError(f"unknown key, expected one of {sorted(schema)}", f"{name}.{key}")
        clean[key] = schema[key](value, f"{name}.{key}")
    return clean


def _params(document: Dict, experiment: str) -> Dict:
    values = document.get('params') or {}
    if not isinstance(values, dict):
        raise ConfigError("expected a table", 'params')

    schema = PARAMS[experiment]
    for key in values:
        if key not in schema:
            raise ConfigError(f"unknown key for {experiment}, expected one of {sorted(schema)}", f"params.{key}")

    clean = {}
    for key, (check, default) in schema.items():
        if key in values:
            clean[key] = check(values[key], f"params.{key}")
        elif default is REQUIRED:
            raise ConfigError(f"required for {experiment}", f"params.{key}")
        else:
            clean[key] = default
    return clean


def _build(section: str, factory, values: Dict):
    """Construct a section's object, attributing a parameter error to the key it mentions."""
    try:
        return factory(**values)
    except ParameterError as err:
        raise ConfigError(str(err), _guess_key(section, str(err)))


def _guess_key(section: str, message: str) -> str:
    for key in sorted(SCHEMA.get(section, {}), key=len, reverse=True):
        if re.search(rf'\b{key}\b', message):
            return f"{section}.{key}"
    return section


def _drive(experiment: str, values: Dict, params: Dict) -> DriveSpec:
    kind = DRIVE_KINDS.get(experiment, DriveKind.CARRIER)
    if 'kind' in values:
        try:
            named = DriveKind.from_name(values.pop('kind'))
        except ParameterError as err:
            raise ConfigError(str(err), 'drive.kind')
        if named is not kind:
            raise ConfigError(f"{experiment} uses a {kind} drive, got {named}", 'drive.kind')

    if kind.has_motion:
        values = {**MOTIONAL_DRIVE_DEFAULTS, **values}
    if kind is DriveKind.MOLMER_SORENSEN:
        values.setdefault('n_qubits', 2)

    detuning = values.pop('detuning_hz', None)
    if detuning is None:
        if experiment in (PUMPING, PUMPING_SCAN):
            raise ConfigError(f"required for {experiment}", 'drive.detuning_hz')
        spec = _build('drive', DriveSpec, {'kind': kind, **values})
        if kind is DriveKind.SIDEBAND_ION:
            detuning = _derived('drive', lambda: blue_sideband_detuning(spec.rabi_hz, spec.trap_hz,
                                                                         params['light_shift']))
        elif kind is DriveKind.MOLMER_SORENSEN:
            detuning = ms_gate_detuning(spec.rabi_hz, spec.lamb_dicke, spec.trap_hz, params['commensurate'])
        else:
            detuning = 0.0

    return _build('drive', DriveSpec, {'kind': kind, 'detuning_hz': detuning, **values})


def _derived(section, func):
    try:
        return func()
    except ParameterError as err:
        raise ConfigError(str(err), _guess_key(section, str(err)))


def required_duration(config: RunConfig) -> float:
    """The longest stretch of trace the experiment propagates through."""
    params, drive = config.params, config.drive
    if config.experiment in (RABI, PUMPING, PUMPING_SCAN):
        return params['duration']
    if config.experiment == PI_SCAN_RABI:
        return 1.0 / (2.0 * min(params['rabi_list']))
    if config.experiment == PI_SCAN_RPSD:
        return 1.0 / (2.0 * drive.rabi_hz)
    if config.experiment == HEATING:
        return max(params['n_cycles']) * sideband_cycle_time(drive)
    if config.experiment == MS_GATE:
        return 1.0 / drive.detuning_hz if drive.detuning_hz > 0 else math.inf
    return 0.0


def parse_config(source: Union[str, Path, Dict, None] = None, experiment: Optional[str] = None,
                 output_dir: Optional[Path] = None, jobs: Optional[int] = None, seed: Optional[int] = None,
                 paper_scale: bool = False) -> RunConfig:
    """
    Validate a configuration document, applying command line overrides.

    :param source:
        A path to a JSON or TOML file, an already loaded document, or None for all defaults.
    :param experiment:
        Overrides the document's experiment.
    :param output_dir:
        Overrides the document's output folder.
    :param jobs:
        Overrides ``ensemble.max_parallel``.
    :param seed:
        Overrides ``ensemble.base_seed``.
    :param paper_scale:
        When true, overrides the document's flag: 1000 realizations and 30 Fock states.

    """
    if source is None:
        document: Dict = {}
    elif isinstance(source, dict):
        document = source
    else:
        document = load_document(source)

    for key in document:
        if key not in TOP_LEVEL:
            raise ConfigError(f"unknown key, expected one of {sorted(TOP_LEVEL)}", key)

    experiment = experiment or document.get('experiment')
    if experiment is None:
        raise ConfigError("required", 'experiment')
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"expected one of {list(EXPERIMENTS)}, got {experiment!r}", 'experiment')

    paper_scale = paper_scale or _boolean(document.get('paper_scale', False), 'paper_scale')
    if output_dir is None and document.get('output_dir') is not None:
        output_dir = Path(_string(document['output_dir'], 'output_dir'))

    sections = {name: _section(document, name) for name in SCHEMA}
    params = _params(document, experiment)

    if jobs is not None:
        sections['ensemble']['max_parallel'] = jobs
    if seed is not None:
        sections['ensemble']['base_seed'] = seed
    if paper_scale:
        sections['ensemble']['n_realizations'] = PAPER_REALIZATIONS
        sections['drive']['fock_cutoff'] = PAPER_FOCK_CUTOFF

    noise_params = _build('noise', NoiseModelParams, sections['noise'])
    shape = _build('servo', ServoShape, sections['servo'])
    noise = _build('servo', lambda: NoiseConfig(noise_params, shape), {})

    config = RunConfig(
        experiment=experiment,
        noise=noise,
        drive=_drive(experiment, dict(sections['drive']), params),
        ensemble=_build('ensemble', EnsembleConfig, sections['ensemble']),
        propagation=_build('propagation', PropagationConfig, sections['propagation']),
        spectral=_build('spectral', SpectralSettings, sections['spectral']),
        params=params,
        output_dir=output_dir,
        paper_scale=paper_scale,
    )
    _check_consistency(config)
    return config


def _check_consistency(config: RunConfig):
    params = config.params
    for key in ('amplitudes', 'rabi_list', 'n_cycles'):
        if key in params and not params[key]:
            raise ConfigError("must not be empty", f"params.{key}")
    if config.experiment == PI_SCAN_RABI:
        for i, rabi_hz in enumerate(params['rabi_list']):
            if not 0 < rabi_hz < config.noise.params.sample_rate / 8:
                raise ConfigError(f"must lie in (0, sample_rate/8), got {rabi_hz}", f"params.rabi_list[{i}]")

    span = (config.noise.params.n_samples - 1) * config.noise.params.dt
    needed = required_duration(config)
    if needed > span * (1 + 1e-9):
        raise ConfigError(f"the experiment needs {needed} s of trace but n_samples gives {span} s", 'noise.n_samples')

    if config.experiment in (PI_SCAN_RPSD, PUMPING_SCAN) and len(params['amplitudes']) < 3:
        raise ConfigError("at least 3 noise amplitudes are needed", 'params.amplitudes')
    if config.experiment in (RABI, PUMPING, PUMPING_SCAN) and not params['duration'] > 0:
        raise ConfigError("must be > 0", 'params.duration')
    if config.experiment in (PUMPING, PUMPING_SCAN) and abs(config.drive.detuning_hz) < 5 * config.drive.rabi_hz:
        raise ConfigError("pumping needs |detuning_hz| >= 5·rabi_hz", 'drive.detuning_hz')
    if config.experiment == HEATING and min(params['n_cycles']) < 0:
        raise ConfigError("cycle counts must be >= 0", 'params.n_cycles')
