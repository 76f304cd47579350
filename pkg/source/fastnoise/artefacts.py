##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
The :class:`ArtefactStore` records every file a run writes, so the manifest can declare them all.

"""
from pathlib import Path
from typing import Iterable

from fastnoise.constants import DIAGNOSTIC_FILES, OUTPUT_FILES


class ArtefactStore(dict):
    '''This object stores artefacts (which can be of any type). Each artefact
    is indexed by a string.
    '''
    def __init__(self):
        super().__init__()
        self.reset()

    def reset(self):
        '''Clears the artefact store (but does not delete any files).
        '''
        self.clear()
        self[OUTPUT_FILES] = []
        self[DIAGNOSTIC_FILES] = []

    def add_outputs(self, paths: Iterable[Path]):
        """Files whose content hashes go in the manifest."""
        self._add(OUTPUT_FILES, paths)

    def add_diagnostics(self, paths: Iterable[Path]):
        """Files listed in the manifest without hashes, e.g. logs and timings."""
        self._add(DIAGNOSTIC_FILES, paths)

    def _add(self, collection, paths):
        for path in map(Path, paths):
            if path not in self[collection]:
                self[collection].append(path)
