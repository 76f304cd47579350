##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Ensemble experiments, and helpers for running their realizations in parallel.

"""
import logging
import multiprocessing
from functools import wraps
from typing import Callable, Iterable, List

from fastnoise.metrics import send_metric
from fastnoise.util import TimerLogger, by_type

logger = logging.getLogger(__name__)


def step(func):
    """Function decorator timing an experiment step and sending the time as a metric."""
    @wraps(func)
    def wrapper(*args, **kwargs):

        name = func.__name__

        with TimerLogger(name) as timer:
            result = func(*args, **kwargs)

        send_metric('steps', name, timer.taken)
        return result

    return wrapper


def run_mp(n_procs: int, items: Iterable, func: Callable) -> List:
    """
    Process items in parallel, returning the results in item order.

    The ordering makes reductions over the results independent of the number of processes.

    :param n_procs:
        Maximum number of worker processes. One runs everything in this process.
    :param items:
        An iterable of items to process in parallel.
    :param func:
        A picklable function to process a single item. Must accept a single argument.

    """
    items = list(items)
    if n_procs > 1 and len(items) > 1:
        with multiprocessing.Pool(min(n_procs, len(items))) as p:
            results = p.map(func, items)
    else:
        results = [func(i) for i in items]

    return results


def check_for_errors(results, failure_type, caller_label=None) -> List:
    """
    Pick the failure records out of a list of results, raising only if nothing succeeded.

    :param results:
        An iterable of results.
    :param failure_type:
        The record type workers return instead of raising.
    :param caller_label:
        Optional human-friendly name of the caller for logging.

    :returns:
        The failures, which the caller excludes from its averages.

    """
    caller_label = f'during {caller_label}' if caller_label else ''

    results = list(results)
    failures = list(by_type(results, failure_type))
    if failures and len(failures) == len(results):
        formatted_errors = "\n\n".join(map(str, failures))
        raise RuntimeError(
            f"{formatted_errors}\n\n{len(failures)} error(s) found {caller_label}"
        )
    for failure in failures:
        logger.warning(f"realization failed {caller_label}: {failure}")
    return failures
