##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Run one experiment from a validated configuration.

"""
import logging
from dataclasses import replace
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

from fastnoise.config import RunConfig
from fastnoise.constants import (HEATING, MS_GATE, NOISE_ONLY, PI_SCAN_RABI, PI_SCAN_RPSD, PUMPING, PUMPING_SCAN,
                                 RABI)
from fastnoise.experiments.heating import heating_output, run_heating
from fastnoise.experiments.ms_gate import ms_gate_output, run_ms_gate
from fastnoise.experiments.noise_only import noise_only_output, run_noise_only
from fastnoise.experiments.pumping import pumping_output, pumping_scan_output, run_pumping, scan_pumping_rate
from fastnoise.experiments.results import ExperimentOutput
from fastnoise.experiments.single_qubit import (pi_scan_rabi_output, pi_scan_rpsd_output, rabi_output,
                                                run_rabi_decay, scan_pi_error_vs_rabi, scan_pi_error_vs_rpsd)
from fastnoise.noise.export import write_trace
from fastnoise.quantum import StateVector
from fastnoise.quantum.state import write_state
from fastnoise.run_context import RunContext

logger = logging.getLogger(__name__)


def _rabi(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    series = run_rabi_decay(config.noise, config.drive.rabi_hz, config.params['duration'], config.ensemble,
                            config.propagation, keep_state=keep_state)
    return rabi_output(series, config.experiment)


def _pi_scan_rabi(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    scan = scan_pi_error_vs_rabi(config.noise, config.params['rabi_list'], config.ensemble, config.propagation,
                                 keep_state=keep_state)
    return pi_scan_rabi_output(scan, config.experiment, config.noise)


def _pi_scan_rpsd(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    scan = scan_pi_error_vs_rpsd(config.noise, config.params['amplitudes'], config.drive.rabi_hz, config.ensemble,
                                 config.propagation, config.spectral, keep_state=keep_state)
    return pi_scan_rpsd_output(scan, config.experiment)


def _pumping(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    drive = config.drive
    result = run_pumping(config.noise, drive.rabi_hz, drive.detuning_hz, config.params['duration'],
                         config.ensemble, config.propagation, config.spectral,
                         amplitude=config.params['amplitude'], keep_state=keep_state)
    return pumping_output(result, config.experiment, drive.rabi_hz, drive.detuning_hz)


def _pumping_scan(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    drive = config.drive
    scan = scan_pumping_rate(config.noise, config.params['amplitudes'], drive.rabi_hz, drive.detuning_hz,
                             config.params['duration'], config.ensemble, config.propagation, config.spectral,
                             keep_state=keep_state)
    return pumping_scan_output(scan, config.experiment, drive.rabi_hz, drive.detuning_hz)


def _heating(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    result = run_heating(config.noise, config.drive, config.params['n_cycles'], config.ensemble,
                         config.propagation, keep_state=keep_state)
    return heating_output(result, config.experiment, config.drive)


def _ms_gate(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    params = config.params
    result = run_ms_gate(config.noise, params['amplitudes'], config.drive, config.ensemble, config.propagation,
                         config.spectral, response_hz=params['response_hz'], check_fock=params['check_fock'],
                         keep_state=keep_state)
    return ms_gate_output(result, config.experiment, config.drive)


def _noise_only(config: RunConfig, keep_state: bool) -> ExperimentOutput:
    if keep_state:
        logger.warning("noise-only propagates no state, --dump-state ignored")
    rabi_hz = config.drive.rabi_hz if config.params['rpsd'] else None
    result = run_noise_only(config.noise, config.ensemble, config.spectral, rabi_hz=rabi_hz,
                            amplitude=config.params['amplitude'])
    return noise_only_output(result, config.experiment, config.noise, config.spectral)


EXPERIMENT_RUNNERS: Dict[str, Callable[[RunConfig, bool], ExperimentOutput]] = {
    RABI: _rabi,
    PI_SCAN_RABI: _pi_scan_rabi,
    PI_SCAN_RPSD: _pi_scan_rpsd,
    PUMPING: _pumping,
    PUMPING_SCAN: _pumping_scan,
    HEATING: _heating,
    MS_GATE: _ms_gate,
    NOISE_ONLY: _noise_only,
}


def run_experiment(config: RunConfig, keep_state: bool = False) -> ExperimentOutput:
    """
    Compute the experiment's outputs without writing anything.

    The resolved configuration, minus the output folder and worker count, is echoed into the fit document.

    """
    output = EXPERIMENT_RUNNERS[config.experiment](config, keep_state)
    return replace(output, fit={**output.fit, 'config': config.science_dict()})


def run(config: RunConfig, dry_run: bool = False, dump_trace: Optional[Path] = None,
        dump_state: Optional[Path] = None, verbose: bool = False) -> Tuple[int, Optional[Dict]]:
    """
    Run the configured experiment into its run folder.

    :param config:
        A configuration from :func:`~fastnoise.config.parse_config`.
    :param dry_run:
        Print the resolved configuration and stop.
    :param dump_trace:
        Also write the base seed's phase trace here.
    :param dump_state:
        Also write the base seed's final state here.
    :param verbose:
        DEBUG level logging.

    :returns:
        The exit status and the manifest, which is None for a dry run.

    """
    if dry_run:
        print(config.to_json(), end='')
        return 0, None

    with RunContext(config, verbose=verbose) as context:
        output = run_experiment(config, keep_state=dump_state is not None)
        context.add_outputs(output.write(context.path_for))

        if dump_trace is not None:
            trace = config.noise.synthesize(config.ensemble.base_seed)
            context.artefact_store.add_diagnostics(
                write_trace(trace, dump_trace, config.noise.params, config.noise.shape))

        if dump_state is not None and output.final_state is not None:
            drive = config.drive
            state = StateVector(output.final_state, drive.n_qubits, drive.modes)
            context.artefact_store.add_diagnostics(
                [write_state(state, dump_state, drive, extra={'seed': config.ensemble.base_seed})])

    return context.status, context.manifest
