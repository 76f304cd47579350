# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################

'''Functions to run fastnoise from the command line.
'''

import logging
import sys
from pathlib import Path
from typing import Dict, Optional

from fastnoise import ConfigError
from fastnoise.config import parse_config
from fastnoise.run import run
from fastnoise.util import common_arg_parser

logger = logging.getLogger(__name__)


def cli_fastnoise(kwargs: Optional[Dict] = None) -> int:
    """
    Running fastnoise from the command line validates the configuration and runs one experiment.
    The parameter is used for testing. When run normally the arguments are read by a common_arg_parser.

    :param kwargs:
        parameters, as returned by the argument parser ( Testing Only )

    :returns:
        The exit status, also passed to sys.exit when called as `fastnoise`.

    """
    # We check if 'fastnoise' was called directly. As it can be called by other things like 'pytest',
    # the cli arguments may not apply to 'fastnoise' which will cause arg_parser to fail with an
    # invalid argument message.
    called_directly = Path(sys.argv[0]).parts[-1] == 'fastnoise'
    if called_directly:
        arg_parser = common_arg_parser()
        kwargs = vars(arg_parser.parse_args())
    else:
        # Required when testing
        assert kwargs is not None

    status = _run_cli(**kwargs)
    if called_directly:
        sys.exit(status)
    return status


def _run_cli(experiment: str, config: Optional[Path] = None, out: Optional[Path] = None,
             jobs: Optional[int] = None, seed: Optional[int] = None, paper_scale: bool = False,
             dry_run: bool = False, dump_trace: Optional[Path] = None, dump_state: Optional[Path] = None,
             verbose: bool = False) -> int:
    try:
        run_config = parse_config(config, experiment=experiment, output_dir=out, jobs=jobs, seed=seed,
                                  paper_scale=paper_scale)
    except ConfigError as err:
        logger.error(f"invalid configuration: {err}")
        return 2

    status, _ = run(run_config, dry_run=dry_run, dump_trace=dump_trace, dump_state=dump_state, verbose=verbose)
    return status
