#!/usr/bin/env python3
# ##############################################################################
#  (c) Crown copyright Met Office. All rights reserved.
#  For further details please refer to the file COPYRIGHT
#  which you should have received as part of this distribution
# ##############################################################################

'''A top-level script that runs every experiment configuration in this folder,
each into its own run folder under the workspace.
'''

import os
import sys
from pathlib import Path

from fastnoise.config import parse_config
from fastnoise.run import run
from fastnoise.util import get_fastnoise_workspace


def run_all(paper_scale=False):
    '''Run all example configurations here, returning the number which failed.
    '''
    configs_folder = Path(__file__).parent
    os.environ.setdefault('FASTNOISE_WORKSPACE', os.path.join(os.getcwd(), 'fastnoise_run_all'))
    workspace = get_fastnoise_workspace()

    # cheapest first
    configs = [
        'noise_only.toml',
        'rabi.toml',
        'pi_scan_rabi.toml',
        'pi_scan_rpsd.toml',
        'pumping.toml',
        'pumping_scan.toml',
        'heating.toml',
        'ms_gate.toml',
    ]

    failed = []
    for name in configs:
        config = parse_config(configs_folder / name, output_dir=workspace / Path(name).stem,
                              paper_scale=paper_scale)
        status, _ = run(config)
        if status:
            failed.append(name)

    if failed:
        print(f'failed: {", ".join(failed)}')
    return len(failed)


# =============================================================================
if __name__ == '__main__':
    sys.exit(run_all(paper_scale='--paper-scale' in sys.argv[1:]))
