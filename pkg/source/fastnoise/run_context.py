##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Contains the :class:`~fastnoise.run_context.RunContext`, which owns a run folder.

"""
import getpass
import json
import logging
import os
import warnings
from datetime import datetime
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import fastnoise
from fastnoise import ConfigError, FastNoiseException, NumericalFailure
from fastnoise.artefacts import ArtefactStore
from fastnoise.config import RunConfig
from fastnoise.constants import (DIAGNOSTIC_FILES, ERROR_FILENAME, LOG_FILENAME, MANIFEST_FILENAME, OUTPUT_FILES,
                                 PARTIAL_SUFFIX)
from fastnoise.metrics import JSON_FILENAME, init_metrics, metrics_summary, send_metric, stop_metrics
from fastnoise.util import TimerLogger, available_cores, by_type, file_checksum, get_fastnoise_workspace

logger = logging.getLogger(__name__)


def final_path(path: Path) -> Path:
    """The name a partial file gets once the run succeeds."""
    path = Path(path)
    return path.with_name(path.name.replace(PARTIAL_SUFFIX, '', 1))


def error_record(err: BaseException) -> Dict:
    """
    A machine readable description of an exception, with whatever key, seed or step it carries.

    """
    record = {'error_type': type(err).__name__, 'message': str(err)}
    if isinstance(err, ConfigError) and err.key:
        record['key'] = err.key
    if isinstance(err, NumericalFailure) and err.step is not None:
        record['step'] = err.step
    for attr in ('seed', 'seeds'):
        if getattr(err, attr, None) is not None:
            record[attr] = getattr(err, attr)
    return record


class RunContext():
    """
    Prepares a run folder, writes the outputs of one experiment into it and declares them in the manifest.

    Use it as a context manager::

        with RunContext(config) as context:
            paths = output.write(context.path_for)
            context.artefact_store.add_outputs(paths)

    Every output is first written with a ``.partial`` suffix. Leaving the context without an error renames them.
    Leaving it with an error keeps the suffix and writes ``error.json`` instead.

    """
    def __init__(self, config: RunConfig, run_dir: Optional[Path] = None, verbose: bool = False):
        """
        :param config:
            The validated run configuration.
        :param run_dir:
            Overrides the configuration's output folder. Without either, the run goes into
            *<workspace>/<experiment>*, see :func:`~fastnoise.util.get_fastnoise_workspace`.
        :param verbose:
            DEBUG level logging.

        """
        self.config = config
        self.verbose = verbose
        self.run_dir: Path = Path(run_dir or config.output_dir or get_fastnoise_workspace() / config.experiment)
        self.metrics_folder: Path = self.run_dir / 'metrics'

        self._artefact_store = ArtefactStore()
        self._run_timer: Optional[TimerLogger] = None
        self._start_time: Optional[datetime] = None

        self.status: Optional[int] = None
        self.manifest: Optional[Dict] = None

    def __enter__(self):
        if self.verbose:
            logging.getLogger('fastnoise').setLevel(logging.DEBUG)

        self._start_time = datetime.now().replace(microsecond=0)
        self._run_prep()

        self._run_timer = TimerLogger(f'running {self.config.experiment}')
        self._run_timer.__enter__()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self._run_timer.__exit__(exc_type, exc_val, exc_tb)

        if exc_type is None:
            self._finalise_outputs()
            self.status = 0
        else:
            logger.error(f"{self.config.experiment} failed: {exc_val}")
            self._write_error(exc_val)
            self.status = 1

        logger.info(f"running '{self.config.experiment}' took {datetime.now() - self._start_time}")

        # always
        self._finalise_metrics(self._start_time, self._run_timer)
        self._finalise_logging()
        self.manifest = self._write_manifest(failed=exc_type is not None)

        # our own errors and whole-ensemble failures become an exit status, anything else is a bug
        return exc_type is not None and issubclass(exc_type, (FastNoiseException, RuntimeError))

    @property
    def artefact_store(self) -> ArtefactStore:
        return self._artefact_store

    def path_for(self, filename: str) -> Path:
        """
        Where to write an output file while the run is in progress.

        """
        return self.run_dir / (filename + PARTIAL_SUFFIX)

    def add_outputs(self, paths: Iterable[Path]):
        self.artefact_store.add_outputs(paths)

    def _run_prep(self):
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self._init_logging()
        init_metrics(metrics_folder=self.metrics_folder)

        # note: initialising here gives a new set of artefacts each run
        self.artefact_store.reset()

    def _init_logging(self):
        # add a file logger for our run
        log_file_handler = RotatingFileHandler(self.run_dir / LOG_FILENAME, backupCount=5, delay=True)
        log_file_handler.doRollover()
        logging.getLogger('fastnoise').addHandler(log_file_handler)

        logger.info(f"{datetime.now()}")
        logger.info(f'available cores: {available_cores()}')
        logger.info(f'using n_procs = {self.config.ensemble.n_procs}')
        logger.info(f"run folder is {self.run_dir}")

    def _finalise_logging(self):
        # remove our file logger
        fastnoise_logger = logging.getLogger('fastnoise')
        log_file_handlers = list(by_type(fastnoise_logger.handlers, RotatingFileHandler))
        if len(log_file_handlers) != 1:
            warnings.warn(f'expected to find 1 RotatingFileHandler for removal, found {len(log_file_handlers)}')
        for handler in log_file_handlers:
            handler.close()
            fastnoise_logger.removeHandler(handler)

    def _finalise_metrics(self, start_time, run_timer):
        send_metric('run', 'experiment', self.config.experiment)
        send_metric('run', 'datetime', start_time.isoformat())
        send_metric('run', 'time taken', run_timer.taken)
        send_metric('run', 'sysname', os.uname().sysname)
        send_metric('run', 'nodename', os.uname().nodename)
        send_metric('run', 'machine', os.uname().machine)
        send_metric('run', 'user', getpass.getuser())
        stop_metrics()
        metrics_summary(metrics_folder=self.metrics_folder)

    def _finalise_outputs(self):
        renamed = []
        for path in self.artefact_store[OUTPUT_FILES]:
            if PARTIAL_SUFFIX in path.name:
                target = final_path(path)
                path.replace(target)
                renamed.append(target)
            else:
                renamed.append(path)
        self.artefact_store[OUTPUT_FILES] = renamed

    def _write_error(self, err: BaseException):
        path = self.run_dir / ERROR_FILENAME
        path.write_text(json.dumps(error_record(err), indent=2, sort_keys=True) + '\n')
        self.artefact_store.add_diagnostics([path])

    def _diagnostics(self) -> List[Path]:
        found = [self.run_dir / LOG_FILENAME, self.metrics_folder / JSON_FILENAME]
        if self.metrics_folder.exists():
            found.extend(sorted(self.metrics_folder.glob('*.png')))
        return [p for p in found if p.exists()] + list(self.artefact_store[DIAGNOSTIC_FILES])

    def _relative(self, path: Path) -> str:
        try:
            return str(Path(path).relative_to(self.run_dir))
        except ValueError:
            return str(path)

    def _write_manifest(self, failed: bool) -> Dict:
        files = [{'path': self._relative(p), 'sha256': file_checksum(p).file_hash}
                 for p in self.artefact_store[OUTPUT_FILES] if Path(p).exists()]

        diagnostics = []
        for path in self._diagnostics():
            if self._relative(path) not in diagnostics:
                diagnostics.append(self._relative(path))

        manifest = {
            'experiment': self.config.experiment,
            'version': fastnoise.__version__,
            'status': 'failed' if failed else 'ok',
            'config': self.config.science_dict(),
            'base_seed': self.config.ensemble.base_seed,
            'files': files,
            'diagnostics': diagnostics,
            'timing': {'started': self._start_time.isoformat(),
                       'elapsed_s': self._run_timer.taken if self._run_timer else None},
        }
        if failed:
            manifest['error'] = ERROR_FILENAME

        (self.run_dir / MANIFEST_FILENAME).write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n')
        return manifest
