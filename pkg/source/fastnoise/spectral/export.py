##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Spectrum files: a ``freq_hz,psd`` CSV with a JSON sidecar.

"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from fastnoise.noise.export import sidecar_path
from fastnoise.spectral.estimate import PowerSpectrum
from fastnoise.spectral.rabi import RabiSpectrum

logger = logging.getLogger(__name__)

CSV_HEADER = 'freq_hz,psd'


def write_spectrum(spectrum: Union[PowerSpectrum, RabiSpectrum], path: Path,
                   seeds: Optional[Sequence[int]] = None) -> List[Path]:
    """
    Write the spectrum as CSV plus sidecar.

    The carrier fields of the sidecar are null for a phase spectrum.

    :returns:
        The two paths written.

    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack([spectrum.freqs, spectrum.values]),
               delimiter=',', header=CSV_HEADER, comments='', fmt='%.17g')

    meta = {
        'kind': 'rpsd' if isinstance(spectrum, RabiSpectrum) else 'phase_psd',
        'carrier_rabi_hz': getattr(spectrum, 'carrier_rabi', None),
        'carrier_band_hz': getattr(spectrum, 'carrier_band', None),
        'resolution_df_hz': spectrum.resolution_df,
        'n_averages': spectrum.n_averages,
        'seed_list': [int(s) for s in (spectrum.seeds if seeds is None else seeds)],
    }
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True))

    logger.info(f"wrote {meta['kind']} to {path}")
    return [path, sidecar]


def read_spectrum(path: Path) -> Union[PowerSpectrum, RabiSpectrum]:
    meta = json.loads(sidecar_path(path).read_text())
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    freqs, values = data[:, 0], data[:, 1]
    seeds = tuple(meta['seed_list'])
    if meta['kind'] == 'rpsd':
        return RabiSpectrum(freqs, values, meta['carrier_rabi_hz'], meta['carrier_band_hz'],
                            meta['resolution_df_hz'], meta['n_averages'], seeds)
    return PowerSpectrum(freqs, values, meta['resolution_df_hz'], meta['n_averages'], seeds)
