"""Numerical laboratory for scattering delays at zero-range potentials.

Computes centre-of-mass delays of transmitted, reflected and radially
scattered Gaussian wave packets, clock-pointer readings, and the analytic
asymptotes they converge to.  Natural units hbar = m = 1 throughout; the
dispersionless law carries an explicit speed c.
"""

__version__ = "0.1.0"

from .amplitudes import (
    PotentialSpec,
    ShiftDistribution,
    LarmorDistribution,
    transmission_zero_range,
    reflection_zero_range,
    s_matrix_radial,
    transmission_rectangular,
    reflection_rectangular,
    shift_distribution_transmission,
    shift_distribution_reflection,
    shift_distribution_radial,
    larmor_distribution_zero_range,
    classical_traversal_time,
)
from .wavepackets import PacketSpec, SpectralAmplitude, gaussian_spectral, free_envelope, spread_width
