##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
A module for recording and summarising run metrics, with the following concepts:

init
    create pipe
    create reading process - daemonic, exits with main process

send
    group, name, value -> reading process
    overwrites any previous value for group[name]

reading process
    creates and adds to metrics dict
    pipe closes -> writes metrics.json

stop
    closes pipe & joins process

Only the orchestrating process sends metrics. Workers return their timings with their results.

"""
import datetime
import json
import logging
import warnings
from collections import defaultdict
from multiprocessing import Pipe, Process
from multiprocessing.connection import Connection
from pathlib import Path
from typing import Dict, Optional

JSON_FILENAME = 'metrics.json'

logger = logging.getLogger(__name__)

# the pipe for individual metrics
_metric_recv_conn: Optional[Connection] = None
_metric_send_conn: Optional[Connection] = None

# the process which receives individual metrics
_metric_recv_process: Optional[Process] = None


def init_metrics(metrics_folder: Path):
    """
    Create the pipe for sending metrics and the process to read them.

    Only one call to init_metrics can be made before calling stop_metrics.

    :param metrics_folder:
        The folder where we will write metrics.

    """
    global _metric_recv_conn, _metric_send_conn
    global _metric_recv_process

    if any([_metric_recv_conn, _metric_send_conn, _metric_recv_process]):
        raise ConnectionError('Metrics already initialised. Only one concurrent user of init_metrics is expected.')

    _metric_recv_conn, _metric_send_conn = Pipe(duplex=False)

    # the connections are passed explicitly so the reader works under any start method
    _metric_recv_process = Process(
        target=_read_metric,
        daemon=True,
        kwargs={'metrics_folder': metrics_folder, 'recv_conn': _metric_recv_conn, 'send_conn': _metric_send_conn},
    )
    _metric_recv_process.start()


def _read_metric(metrics_folder: Path, recv_conn: Connection, send_conn: Connection):
    """
    Intended to run as a child process, reading metrics until the pipe is closed, then writing them as json.

    """
    # e.g. metrics['realizations']['seed 42'] = seconds taken
    metrics: Dict[str, Dict[str, float]] = defaultdict(dict)

    # we hold a copy of the sending end, which would keep the pipe open after the parent closes its copy
    send_conn.close()

    logger.debug('read_metric: waiting for metrics')
    num_recorded = 0
    while True:
        try:
            metric = recv_conn.recv()
        except EOFError:
            break

        group, name, value = metric
        metrics[group][name] = value
        num_recorded += 1

    logger.debug(f"read_metric: recorded {num_recorded} metrics")

    metrics_folder.mkdir(parents=True, exist_ok=True)
    with open(metrics_folder / JSON_FILENAME, 'wt') as outfile:
        json.dump(metrics, outfile, indent='\t')


def send_metric(group: str, name: str, value):
    """
    Pass a metric to the reader process.

    Example::

        send_metric('steps', 'ms gate ensemble', 12.3)

    :param group:
        Name of the metrics group.
    :param name:
        Name of the metric.
    :param value:
        Value of the metric.

    """
    if not _metric_send_conn:
        warnings.warn('_metric_send_conn not set, cannot send metrics')
        return
    _metric_send_conn.send([group, name, value])


def stop_metrics():
    """
    Close the metrics pipe and wait for the reader process to write its file.

    """
    global _metric_recv_conn, _metric_send_conn
    global _metric_recv_process

    if _metric_send_conn:
        _metric_send_conn.close()
    if _metric_recv_process:
        _metric_recv_process.join(5)

    # set these to none so metrics can be initialised again
    _metric_recv_conn = _metric_send_conn = _metric_recv_process = None


def metrics_summary(metrics_folder: Path):
    """
    Create summary charts from the metrics json.

    """

    #
    # metrics['run']['time taken'] = total time taken
    # metrics['steps'][step name] = step time taken
    # metrics['realizations'][f'{label} seed {seed}'] = realization time taken
    #

    try:
        import matplotlib  # type: ignore
        matplotlib.use('Agg')
        import matplotlib.pyplot as plt  # type: ignore
    except ImportError:
        logger.warning('matplotlib not installed, no metrics summary charts produced')
        return

    json_path = metrics_folder / JSON_FILENAME
    if not json_path.exists():
        logger.warning(f'no metrics file at {json_path}')
        return
    with open(json_path, 'rt') as infile:
        metrics = json.load(infile)

    logger.info('creating metrics summary')
    logger.debug(f'metrics_summary: got metrics for: {metrics.keys()}')
    run = metrics.get('run', {})

    # histogram of realization times
    realization_times = list(metrics.get('realizations', {}).values())
    if realization_times:
        plt.hist(realization_times, 20)
        plt.figtext(0.99, 0.01, f"{run.get('datetime', '')}", horizontalalignment='right', fontsize='x-small')
        plt.xlabel('time per realization (s)')
        plt.savefig(metrics_folder / 'hist_realizations.png')
        plt.close()

    # overall pie chart of time taken by each step
    step_totals = metrics.get('steps')
    if step_totals and 'time taken' in run:
        time_taken = datetime.timedelta(seconds=int(run['time taken']))
        min_label_thresh = time_taken.seconds * 0.01
        step_times = list(step_totals.values())
        step_labels = [name if value > min_label_thresh else "" for name, value in step_totals.items()]

        plt.pie(step_times, labels=step_labels, normalize=True,
                wedgeprops={"linewidth": 1, "edgecolor": "white"})
        plt.suptitle(f"{run.get('label', '')} took {time_taken}\n"
                     f"on {run.get('sysname')}, {run.get('nodename')}, {run.get('machine')}")
        plt.savefig(metrics_folder / "pie.png")
        plt.close()
    else:
        logger.info("no metrics data 'steps' for step totals pie chart")
