"""
Larmor and Rabi frequencies of color-center electron spins and of 13C
nuclear spins next to them.

Every function here is pure: a SpinSystem carries the species constants and
the functions turn fields (gauss) into frequencies (Hz) or back.
"""
import enum
import math
from dataclasses import dataclass, field

from engine.constants import PhysicalConstants
from engine.errors import (SpeciesMismatchError, ValidationError,
                           ensure_nonnegative)

MAX_HYPERFINE = 1e6  # Hz


class Species(enum.Enum):
    NV = 'NV'
    SnV = 'SnV'


class Target(enum.Enum):
    electron = 'electron'
    carbon = 'carbon'


class ElectronState(enum.Enum):
    """Electron spin state conditioning the carbon Larmor frequency."""
    ms0 = 'ms0'
    msMinus1 = 'msMinus1'
    plusHalf = 'plusHalf'
    minusHalf = 'minusHalf'

    def belongs_to(self, species):
        if species is Species.NV:
            return self in (ElectronState.ms0, ElectronState.msMinus1)
        return self in (ElectronState.plusHalf, ElectronState.minusHalf)


@dataclass(frozen=True)
class SpinSystem(object):
    """A color center with one coupled 13C.

    Fields:
        species : Species.NV or Species.SnV
        constants : PhysicalConstants
        eta : Rabi reduction factor of the SnV electron, ignored for NV
        hyperfine_par : signed A_par in Hz
        hyperfine_perp : signed A_perp in Hz
    """
    species: Species = Species.NV
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    eta: float = 1.0
    hyperfine_par: float = 100e3
    hyperfine_perp: float = 50e3

    def __post_init__(self):
        if not isinstance(self.species, Species):
            raise ValidationError("species must be a Species. Instead, got %s" % repr(self.species),
                                  key='species')
        if not 0 < self.eta <= 1:
            raise ValidationError("eta must lie in (0, 1]. Instead, got %s" % repr(self.eta), key='eta')
        for key in ('hyperfine_par', 'hyperfine_perp'):
            if abs(getattr(self, key)) > MAX_HYPERFINE:
                raise ValidationError("|%s| must not exceed %g Hz. Instead, got %s"
                                      % (key, MAX_HYPERFINE, repr(getattr(self, key))), key=key)


def larmor_electron(sys, B_par):
    """Electron transition frequency tracked by the controller.

    Arguments:
        sys : SpinSystem
        B_par : bias field along the defect axis in gauss

    Returns :: Hz, |D - gamma_e*B| for NV and gamma_e*B for SnV
    """
    ensure_nonnegative('B_par', B_par)
    gamma_e = sys.constants.gamma_e
    if sys.species is Species.NV:
        return abs(sys.constants.zero_field_splitting_gs - gamma_e * B_par)
    return abs(gamma_e * B_par)


def larmor_carbon(sys, B_z, state):
    """Nuclear Larmor frequency, conditioned on the electron state.

    Arguments:
        sys : SpinSystem
        B_z : field along the quantization axis in gauss
        state : ElectronState valid for sys.species

    Returns :: Hz
    """
    ensure_nonnegative('B_z', B_z)
    if not state.belongs_to(sys.species):
        raise SpeciesMismatchError("State %s does not exist for species %s"
                                   % (state.value, sys.species.value), key='state')
    zeeman = sys.constants.gamma_c * B_z
    a_par, a_perp = sys.hyperfine_par, sys.hyperfine_perp
    if state is ElectronState.ms0:
        return abs(zeeman)
    if state is ElectronState.msMinus1:
        return math.hypot(zeeman - a_par, a_perp)
    sign = 1.0 if state is ElectronState.plusHalf else -1.0
    return math.hypot(zeeman + sign * a_par / 2, a_perp / 2)


def rabi_frequency(sys, target, B_ac):
    """Rabi frequency produced by a resonant drive of amplitude B_ac (gauss).

    The NV electron sees 1/sqrt(2) of the drive through the spin-1 matrix
    element; the SnV electron is reduced by eta.
    """
    ensure_nonnegative('B_ac', B_ac)
    return B_ac * rabi_per_gauss(sys, target)


def field_for_rabi(sys, target, f_rabi):
    """Drive amplitude (gauss) needed for a Rabi frequency f_rabi (Hz)."""
    ensure_nonnegative('f_rabi', f_rabi)
    return f_rabi / rabi_per_gauss(sys, target)


def rabi_per_gauss(sys, target):
    """Hz of Rabi frequency per gauss of drive amplitude."""
    target = Target(target)
    if target is Target.carbon:
        return sys.constants.gamma_c
    if sys.species is Species.NV:
        return sys.constants.gamma_e / math.sqrt(2)
    return sys.eta * sys.constants.gamma_e


def larmor_slope(sys, target, B_par=0.0):
    """|df0/dB| in Hz/G of the tracked transition.

    Turns frequency tolerances into Z-field tolerances. The electron slope is
    gamma_e on either side of the NV level crossing; the carbon slope is the
    bare gamma_c of the ms0 branch.
    """
    ensure_nonnegative('B_par', B_par)
    if Target(target) is Target.carbon:
        return sys.constants.gamma_c
    return sys.constants.gamma_e


def pi_pulse_duration(f_rabi):
    """Length of a rectangular pi pulse at Rabi frequency f_rabi."""
    if not f_rabi > 0:
        raise ValidationError("f_rabi must be positive. Instead, got %s" % repr(f_rabi), key='f_rabi')
    return 1.0 / (2.0 * f_rabi)
