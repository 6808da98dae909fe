"""
Closed-form infidelity models of single-qubit operations and idling, and
their inverses, which turn a per-component error budget into a tolerance.

The metric throughout is the worst-case state infidelity of a rectangular
pi pulse; pulse.py simulates the same gates by brute force and
validation.py compares the two.
"""
import logging
import math
from dataclasses import dataclass

from engine import spin
from engine.errors import (ValidationError, ensure_nonnegative,
                           ensure_open_unit, ensure_positive)

logger = logging.getLogger(__name__)

SMALL_ERROR_VALIDITY = 0.1


@dataclass(frozen=True)
class FidelityBudget(object):
    """Target gate fidelity, how it is split, and the operation timings.

    The error 1 - target_fidelity is divided equally among n_components_op
    operation errors and, separately, among n_components_idle idling errors.
    Idle durations default to the matching operation durations.
    """
    target_fidelity: float = 0.9999
    n_components_op: int = 8
    n_components_idle: int = 4
    f_rabi_electron: float = 5e6
    f_rabi_carbon: float = 5e3
    T_op_electron: float = 100e-9
    T_op_carbon: float = 100e-6
    T_idle: float = None
    T_idle_carbon: float = None
    readout_budget: float = 1e-4
    nco_infidelity: float = 1e-5
    crosstalk_budget: float = 1e-5
    wideband_bandwidth_factor: float = 1.0
    mc_samples: int = 400

    def __post_init__(self):
        if self.T_idle is None:
            object.__setattr__(self, 'T_idle', self.T_op_electron)
        if self.T_idle_carbon is None:
            object.__setattr__(self, 'T_idle_carbon', self.T_op_carbon)
        ensure_open_unit('target_fidelity', self.target_fidelity)
        for key in ('n_components_op', 'n_components_idle'):
            if int(getattr(self, key)) != getattr(self, key) or getattr(self, key) < 1:
                raise ValidationError("%s must be a positive integer. Instead, got %s"
                                      % (key, repr(getattr(self, key))), key=key)
        for key in ('f_rabi_electron', 'f_rabi_carbon', 'T_op_electron', 'T_op_carbon',
                    'T_idle', 'T_idle_carbon', 'wideband_bandwidth_factor'):
            ensure_positive(key, getattr(self, key))
        ensure_open_unit('readout_budget', self.readout_budget)
        ensure_open_unit('nco_infidelity', self.nco_infidelity)
        ensure_open_unit('crosstalk_budget', self.crosstalk_budget)
        if self.mc_samples < 100:
            raise ValidationError("mc_samples must be at least 100. Instead, got %s"
                                  % repr(self.mc_samples), key='mc_samples')

    @property
    def op_share(self):
        return (1.0 - self.target_fidelity) / self.n_components_op

    @property
    def idle_share(self):
        return (1.0 - self.target_fidelity) / self.n_components_idle

    def f_rabi(self, target):
        if spin.Target(target) is spin.Target.electron:
            return self.f_rabi_electron
        return self.f_rabi_carbon

    def t_op(self, target):
        if spin.Target(target) is spin.Target.electron:
            return self.T_op_electron
        return self.T_op_carbon

    def t_idle(self, target):
        if spin.Target(target) is spin.Target.electron:
            return self.T_idle
        return self.T_idle_carbon


@dataclass(frozen=True)
class SpurTone(object):
    """A spurious drive tone sitting on a qubit's Larmor frequency."""
    amplitude_field: float
    frequency: float = 0.0

    def __post_init__(self):
        ensure_nonnegative('amplitude_field', self.amplitude_field)


@dataclass(frozen=True)
class CrosstalkScenario(object):
    """An unaddressed qubit spaced f_space away from the addressed drive."""
    f_space: float
    f_rabi_addressed: float
    f_rabi_unaddressed: float
    theta: float = math.pi

    def __post_init__(self):
        ensure_positive('f_rabi_addressed', self.f_rabi_addressed)
        ensure_nonnegative('f_rabi_unaddressed', self.f_rabi_unaddressed)

    @property
    def alpha(self):
        return self.f_space / self.f_rabi_addressed

    @property
    def beta(self):
        return self.f_rabi_unaddressed / self.f_rabi_addressed


@dataclass(frozen=True)
class StaticErrorLimits(object):
    delta_f_max: float
    phase_max: float
    duration_max: float
    rel_amplitude_max: float


def small_error_flag(infidelity):
    """True when a quadratic small-error form is used outside its validity."""
    return infidelity > SMALL_ERROR_VALIDITY


def _flag(name, value):
    if small_error_flag(value):
        logger.warning("%s infidelity %.3g is outside small-error validity", name, value)
    return value


def _ensure_budget(budget):
    if not 0 <= budget < 1:
        raise ValidationError("budget must lie in [0, 1). Instead, got %s" % repr(budget), key='budget')
    return budget


# Idling

def infidelity_idle_detuning(delta_f, T):
    """Error from idling for T with a tracked frequency off by delta_f.

    Returns :: 1 - cos^2(2*pi*delta_f*T/2), always in [0, 1]
    """
    ensure_nonnegative('T', T)
    return 1.0 - math.cos(2 * math.pi * delta_f * T / 2) ** 2


def idle_detuning_limit(budget, T):
    """Largest tracked-frequency error (Hz) meeting budget while idling for T."""
    _ensure_budget(budget)
    ensure_positive('T', T)
    return math.asin(math.sqrt(budget)) / (math.pi * T)


def infidelity_dephasing(T2_star, T):
    """Static-noise dephasing error (1/4)*(sqrt(2)/T2*)^2*T^2, unclamped."""
    ensure_positive('T2_star', T2_star)
    ensure_nonnegative('T', T)
    if math.isinf(T2_star):
        return 0.0
    omega2 = math.sqrt(2) / T2_star
    return _flag('dephasing', 0.25 * omega2 ** 2 * T ** 2)


def infidelity_spur(spur, sys, target, T):
    """Error from a spur at exactly the Larmor frequency of an idling qubit."""
    ensure_nonnegative('T', T)
    omega_spur = 2 * math.pi * spin.rabi_frequency(sys, target, spur.amplitude_field)
    return _flag('spur', 0.25 * omega_spur ** 2 * T ** 2)


def spur_field_limit(budget, sys, target, T):
    """Largest spur amplitude (gauss) meeting budget over T."""
    _ensure_budget(budget)
    ensure_positive('T', T)
    omega_spur = 2 * math.sqrt(budget) / T
    return spin.field_for_rabi(sys, target, omega_spur / (2 * math.pi))


# Drive crosstalk

def infidelity_offresonant_drive(x):
    """Rotation leaked onto a qubit detuned by f_space from the drive.

    (beta/alpha)^2 * sin^2(theta*alpha/2), with the alpha -> 0 limit
    beta^2 * theta^2 / 4.
    """
    alpha, beta = x.alpha, x.beta
    if alpha == 0:
        return beta ** 2 * x.theta ** 2 / 4
    return (beta / alpha) ** 2 * math.sin(x.theta * alpha / 2) ** 2


def offresonant_envelope(x):
    """Worst case of infidelity_offresonant_drive over theta: (beta/alpha)^2."""
    if x.alpha == 0:
        return infidelity_offresonant_drive(x)
    return (x.beta / x.alpha) ** 2


def lo_detuning_threshold(beta, f_rabi, budget):
    """Smallest LO spacing (Hz) whose crosstalk envelope meets budget."""
    ensure_nonnegative('beta', beta)
    ensure_positive('f_rabi', f_rabi)
    ensure_positive('budget', budget)
    return beta * f_rabi / math.sqrt(budget)


# Static errors on a rectangular pi pulse, worst-case input state

def infidelity_static_detuning(delta_f, f_rabi):
    ensure_positive('f_rabi', f_rabi)
    return (delta_f / f_rabi) ** 2


def infidelity_phase(delta_phase):
    return math.sin(delta_phase) ** 2


def infidelity_duration(delta_duration, T_op):
    ensure_positive('T_op', T_op)
    return math.sin(math.pi * delta_duration / (2 * T_op)) ** 2


def infidelity_amplitude(rel_amplitude):
    return math.sin(math.pi * rel_amplitude / 2) ** 2


def detuning_limit(budget, f_rabi):
    _ensure_budget(budget)
    return f_rabi * math.sqrt(budget)


def phase_limit(budget):
    _ensure_budget(budget)
    return math.asin(math.sqrt(budget))


def duration_limit(budget, T_op):
    _ensure_budget(budget)
    return 2 * T_op / math.pi * math.asin(math.sqrt(budget))


def amplitude_limit(budget):
    _ensure_budget(budget)
    return 2 / math.pi * math.asin(math.sqrt(budget))


def static_error_infidelities(budget_share, f_rabi, T_op):
    """Tolerances on the four static pulse errors for one budget share.

    Arguments:
        budget_share : infidelity allotted to each error
        f_rabi : Rabi frequency of the pulse, Hz
        T_op : pulse duration, s

    Returns :: StaticErrorLimits (Hz, rad, s, relative)
    """
    ensure_open_unit('budget_share', budget_share)
    ensure_positive('f_rabi', f_rabi)
    ensure_positive('T_op', T_op)
    return StaticErrorLimits(delta_f_max=detuning_limit(budget_share, f_rabi),
                             phase_max=phase_limit(budget_share),
                             duration_max=duration_limit(budget_share, T_op),
                             rel_amplitude_max=amplitude_limit(budget_share))
