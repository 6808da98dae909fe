"""
Physical constants shared by every module.

Units: fields in gauss, frequencies in Hz, angular frequencies in rad/s,
lengths in meters, powers in W. Wherever a frequency becomes an angular
frequency the 2*pi is written out at the call site.
"""
from dataclasses import dataclass

from scipy.constants import mu_0

from engine.errors import ValidationError, ensure_positive

GAUSS_PER_TESLA = 1e4

GAMMA_E = 2.8e6            # Hz/G
GAMMA_C = 1.0705e3         # Hz/G, 13C
ZERO_FIELD_SPLITTING_GS = 2.88e9   # Hz


@dataclass(frozen=True)
class PhysicalConstants(object):
    """Gyromagnetic ratios, NV ground-state splitting and mu0 (T*m/A)."""
    gamma_e: float = GAMMA_E
    gamma_c: float = GAMMA_C
    zero_field_splitting_gs: float = ZERO_FIELD_SPLITTING_GS
    mu0: float = mu_0

    def __post_init__(self):
        if not self.gamma_e > self.gamma_c > 0:
            raise ValidationError(
                "Need gamma_e > gamma_c > 0. Instead, got gamma_e=%r, gamma_c=%r"
                % (self.gamma_e, self.gamma_c), key='gamma_c')
        ensure_positive('zero_field_splitting_gs', self.zero_field_splitting_gs)
        ensure_positive('mu0', self.mu0)
