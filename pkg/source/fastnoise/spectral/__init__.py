##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Phase PSDs, the carrier-normalised Rabi PSD and dBc/Hz conversions.

"""
from fastnoise.spectral.estimate import PowerSpectrum, average_spectra, ensemble_psd, estimate_psd
from fastnoise.spectral.export import read_spectrum, write_spectrum
from fastnoise.spectral.rabi import (RabiSpectrum, compute_rabi_psd, dbc_per_hz, ensemble_rabi_psd, rpsd_at,
                                     rpsd_from_dbc, servo_bump_fraction, to_dbc_per_hz)

__all__ = ['PowerSpectrum', 'RabiSpectrum', 'average_spectra', 'compute_rabi_psd', 'dbc_per_hz', 'ensemble_psd',
           'ensemble_rabi_psd', 'estimate_psd', 'read_spectrum', 'rpsd_at', 'rpsd_from_dbc', 'servo_bump_fraction',
           'to_dbc_per_hz', 'write_spectrum']
