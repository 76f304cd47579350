##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Various utility functions live here - until we give them a proper place to live!

"""

import datetime
import hashlib
import logging
import os
import sys
from argparse import ArgumentParser
from collections import namedtuple
from pathlib import Path
from time import perf_counter
from typing import Optional

import fastnoise
from fastnoise.constants import EXPERIMENTS

logger = logging.getLogger(__name__)


def log_or_dot(logger, msg):
    """
    Util function which prints a fullstop without a newline, except in debug logging where it logs a message.

    """
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug(msg)
    elif logger.isEnabledFor(logging.INFO):
        print('.', end='')
        sys.stdout.flush()


def log_or_dot_finish(logger):
    """
    Util function which completes the row of fullstops from :func:`~fastnoise.util.log_or_dot`,
    by printing a newline when not in debug logging.

    """
    if logger.isEnabledFor(logging.INFO):
        print('')


HashedFile = namedtuple("HashedFile", ['fpath', 'file_hash'])


def file_checksum(fpath):
    """
    Return the sha256 hex digest of the given file.

    This function is deterministic, returning the same result across Python invocations and platforms,
    which is what the run manifest relies on.

    """
    digest = hashlib.sha256()
    with open(fpath, "rb") as infile:
        for block in iter(lambda: infile.read(1 << 20), b''):
            digest.update(block)
    return HashedFile(Path(fpath), digest.hexdigest())


class Timer:
    """
    A simple timing context manager.

    """
    def __init__(self) -> None:
        self.start: Optional[float] = None
        self.taken: Optional[float] = None

    def __enter__(self):
        self.start = perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        assert self.start is not None
        self.taken = perf_counter() - self.start


class TimerLogger(Timer):
    """
    A labelled timing context manager which logs the label and the time taken.

    """
    def __init__(self, label, res=0.001):
        super().__init__()
        self.label = label
        self.res = res

    def __enter__(self):
        super().__enter__()
        logger.info("\n" + self.label)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        super().__exit__(exc_type, exc_val, exc_tb)

        # don't bother reporting trivial timings
        seconds = int(self.taken / self.res) * self.res
        if seconds >= self.res:

            if seconds > 60:
                # convert to timedelta for human-friendly str()
                td = datetime.timedelta(seconds=seconds)
                logger.info(f"{self.label} took {td}")
            else:
                logger.info(f"{self.label} took {seconds:.3f}s")


def by_type(iterable, cls):
    """
    Find all the elements of an iterable which are of a given type.

    :param iterable:
        The iterable to search.
    :param cls:
        The type of the elements we want.

    """
    return filter(lambda i: isinstance(i, cls), iterable)


def available_cores() -> int:
    """
    The number of cores this process may run on, falling back to the machine's count.

    """
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def get_fastnoise_workspace() -> Path:
    """
    Read the workspace from the `FASTNOISE_WORKSPACE` environment variable,
    defaulting to *~/fastnoise-workspace*.

    """
    if os.getenv("FASTNOISE_WORKSPACE"):
        workspace = Path(os.getenv("FASTNOISE_WORKSPACE"))  # type: ignore
    else:
        workspace = Path(os.path.expanduser("~/fastnoise-workspace"))
        logger.info(f"FASTNOISE_WORKSPACE not set, defaulting to {workspace}")
    return workspace


def common_arg_parser() -> ArgumentParser:
    """
    A helper function returning the argument parser for the `fastnoise` command line tool.

    The caller must call `parse_args` on the returned parser.

    """
    arg_parser = ArgumentParser(prog='fastnoise')
    arg_parser.add_argument('--verbose', action='store_true', help='DEBUG level logging')
    arg_parser.add_argument('--version', action='version', version=f'%(prog)s {fastnoise.__version__}')
    arg_parser.add_argument('experiment', choices=EXPERIMENTS, help='Experiment to run')
    arg_parser.add_argument('--config', type=Path, default=None, help='JSON or TOML run configuration')
    arg_parser.add_argument('--out', type=Path, default=None, help='Run folder for all outputs')

    group = arg_parser.add_argument_group(
        title='overrides',
        description='Values which take precedence over the configuration file.')
    group.add_argument('--jobs', type=int, default=None, help='Maximum number of worker processes')
    group.add_argument('--seed', type=int, default=None, help='Base seed; realization k uses seed + k')
    group.add_argument('--paper-scale', action='store_true',
                       help='1000 realizations and 30 Fock states instead of the desk-scale defaults')

    group = arg_parser.add_argument_group(title='diagnostics')
    group.add_argument('--dry-run', action='store_true', help='Print the resolved configuration and exit')
    group.add_argument('--dump-trace', type=Path, default=None,
                       help='Write the first realization\'s phase trace to this path')
    group.add_argument('--dump-state', type=Path, default=None,
                       help='Write the first realization\'s final state to this path')
    return arg_parser
