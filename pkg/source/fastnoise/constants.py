##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Some constants to help keep things tidy and manageable.

"""

# experiment names, as typed on the command line
RABI = 'rabi'
PI_SCAN_RABI = 'pi-scan-rabi'
PI_SCAN_RPSD = 'pi-scan-rpsd'
PUMPING = 'pumping'
PUMPING_SCAN = 'pumping-scan'
HEATING = 'heating'
MS_GATE = 'ms-gate'
NOISE_ONLY = 'noise-only'

EXPERIMENTS = (RABI, PI_SCAN_RABI, PI_SCAN_RPSD, PUMPING, PUMPING_SCAN, HEATING, MS_GATE, NOISE_ONLY)

# names of artefact collections
OUTPUT_FILES = 'output files'
DIAGNOSTIC_FILES = 'diagnostic files'

# files in every run folder
MANIFEST_FILENAME = 'manifest.json'
ERROR_FILENAME = 'error.json'
LOG_FILENAME = 'log.txt'
PARTIAL_SUFFIX = '.partial'

# per experiment output suffixes
SERIES_SUFFIX = '_series.csv'
FIT_SUFFIX = '_fit.json'
PLOTDATA_SUFFIX = '_plotdata.json'
PSD_SUFFIX = '_psd.csv'
RPSD_SUFFIX = '_rpsd.csv'
TRACE_SUFFIX = '_trace.f64'

# desk and paper scale ensembles
DESK_REALIZATIONS = 200
DESK_FOCK_CUTOFF = 15
PAPER_REALIZATIONS = 1000
PAPER_FOCK_CUTOFF = 30

# half width of the smoothing band used for scaling-law x axes
SCALING_BAND_HZ = 5e3

# fraction of extra samples synthesised and trimmed around a shaped trace
EDGE_PAD_FRACTION = 0.02

# renormalise a state when its norm drifts by more than this
NORM_TOLERANCE = 1e-9
