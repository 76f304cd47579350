##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Binary trace dumps: little-endian float64 samples plus a JSON sidecar.

"""
import json
import logging
from pathlib import Path
from typing import List, Optional

import numpy as np

from fastnoise.noise.params import NoiseModelParams, PhaseTrace, ServoShape

logger = logging.getLogger(__name__)


def sidecar_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + '.json')


def write_trace(trace: PhaseTrace, path: Path,
                params: Optional[NoiseModelParams] = None, shape: Optional[ServoShape] = None) -> List[Path]:
    """
    Write the samples (rad) to *path* and the metadata to *path*.json.

    :returns:
        The two paths written.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trace.samples.astype('<f8').tofile(path)

    meta = {
        'dt_s': trace.dt,
        'seed': trace.seed,
        'n_samples': len(trace),
        'params': params.to_dict() if params else None,
        'shape': shape.to_dict() if shape else None,
    }
    if trace.metadata:
        meta['metadata'] = trace.metadata
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True))

    logger.info(f"wrote trace for seed {trace.seed} to {path}")
    return [path, sidecar]


def read_trace(path: Path) -> PhaseTrace:
    meta = json.loads(sidecar_path(path).read_text())
    samples = np.fromfile(path, dtype='<f8')
    return PhaseTrace(samples, meta['dt_s'], meta['seed'], meta.get('metadata', {}))
