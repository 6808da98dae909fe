"""
Unit-cell power of a dedicated-driver controller.

A unit cell holds one electron and nine nuclear qubits. Its dissipation is
the DC field generator (coil current through the switch, the coil and the
shared interconnect), the NCOs tracking every qubit frame, and the two
output amplifiers. Bias-field inhomogeneity is either cancelled with a
local DC current or absorbed by a faster controller clock.
"""
import enum
import logging
import math
from dataclasses import dataclass, field

from engine import spin
from engine.concurrency import parallel_map
from engine.errors import (InfiniteBitsError, ValidationError,
                           ensure_closed_unit, ensure_nonnegative,
                           ensure_positive)

logger = logging.getLogger(__name__)

OVERSAMPLING = 2.5


class Strategy(enum.Enum):
    dc_compensation = 'dc_compensation'
    frequency_compensation = 'frequency_compensation'


class ResistanceReference(enum.Enum):
    """Temperature the scenario quotes R_on, R_IC and R_coil at."""
    cryo = 'cryo'
    room = 'room'


@dataclass(frozen=True)
class ElectricalNetwork(object):
    """Resistances at 4 K (ohm), regulation overhead P_cir (W) and cell count."""
    R_on: float = 0.25
    R_IC: float = 0.0125
    R_coil: float = 1.0
    P_cir: float = 1e-4
    N_cells: int = 100

    def __post_init__(self):
        for key in ('R_on', 'R_IC', 'R_coil', 'P_cir'):
            ensure_nonnegative(key, getattr(self, key))
        if int(self.N_cells) != self.N_cells or self.N_cells < 1:
            raise ValidationError("N_cells must be an integer >= 1. Instead, got %s"
                                  % repr(self.N_cells), key='N_cells')


def cryo_network(R_on_rt, R_coil_rt, R_IC_rt, P_cir=1e-4, N_cells=100):
    """ElectricalNetwork at 4 K from room-temperature resistances.

    The switch on-resistance halves on cooling; coil and interconnect
    metal improve four times.
    """
    return ElectricalNetwork(R_on=R_on_rt / 2, R_IC=R_IC_rt / 4, R_coil=R_coil_rt / 4,
                             P_cir=P_cir, N_cells=N_cells)


@dataclass(frozen=True)
class ClockPlan(object):
    f_space_LO: float = 1e7
    f_comp: float = 0.0
    E_bit: float = 8.4e-14
    activity_factor: float = 2.0
    n_nco_electron: int = 1
    n_nco_nuclear: int = 9

    def __post_init__(self):
        ensure_positive('f_space_LO', self.f_space_LO)
        ensure_nonnegative('f_comp', self.f_comp)
        ensure_positive('E_bit', self.E_bit)
        ensure_positive('activity_factor', self.activity_factor)
        for key in ('n_nco_electron', 'n_nco_nuclear'):
            ensure_nonnegative(key, getattr(self, key))


@dataclass(frozen=True)
class AmplifierConfig(object):
    V_DD: float = 1.1
    V_sup: float = 0.1
    duty_electron: float = 0.1
    duty_nuclear: float = 1.0

    def __post_init__(self):
        ensure_positive('V_DD', self.V_DD)
        ensure_positive('V_sup', self.V_sup)
        ensure_closed_unit('duty_electron', self.duty_electron)
        ensure_closed_unit('duty_nuclear', self.duty_nuclear)


@dataclass(frozen=True)
class PowerScenario(object):
    """Everything the power model needs besides the spin system and coils."""
    network: ElectricalNetwork = field(default_factory=ElectricalNetwork)
    clock: ClockPlan = field(default_factory=ClockPlan)
    amplifier: AmplifierConfig = field(default_factory=AmplifierConfig)
    delta_B: float = 2.4
    strategy: Strategy = Strategy.dc_compensation
    power_budget: float = 1.0
    resistances: ResistanceReference = ResistanceReference.cryo

    def __post_init__(self):
        object.__setattr__(self, 'strategy', Strategy(self.strategy))
        object.__setattr__(self, 'resistances', ResistanceReference(self.resistances))
        ensure_nonnegative('delta_B', self.delta_B)
        ensure_positive('power_budget', self.power_budget)

    def network_at_4k(self):
        """The network with room-temperature resistances cooled through cryo_network."""
        if self.resistances is ResistanceReference.cryo:
            return self.network
        net = self.network
        return cryo_network(net.R_on, net.R_coil, net.R_IC, net.P_cir, net.N_cells)


@dataclass(frozen=True)
class PowerBreakdown(object):
    p_dc: float
    p_nco_total: float
    p_amp_electron: float
    p_amp_nuclear: float
    p_total: float
    strategy: Strategy
    f_s: float = 0.0
    bits_electron: int = 0
    bits_nuclear: int = 0

    def __repr__(self):
        return ("PowerBreakdown(%s: dc=%.4g W, nco=%.4g W, amp_e=%.4g W, amp_n=%.4g W, "
                "total=%.4g W)" % (self.strategy.value, self.p_dc, self.p_nco_total,
                                   self.p_amp_electron, self.p_amp_nuclear, self.p_total))


def p_dc(I_coil, net):
    """DC field generator: I^2 (N R_IC + R_on + R_coil) + P_cir."""
    ensure_nonnegative('I_coil', I_coil)
    return I_coil ** 2 * (net.N_cells * net.R_IC + net.R_on + net.R_coil) + net.P_cir


def dc_current_for_compensation(delta_B, k_z):
    """Coil current (A) cancelling delta_B gauss with coupling k_z (G/A)."""
    ensure_nonnegative('delta_B', delta_B)
    ensure_positive('k_z', k_z)
    return delta_B / k_z


def required_fs(plan):
    """Controller clock covering both the LO spacing and the compensation range."""
    return OVERSAMPLING * max(plan.f_space_LO, plan.f_comp)


def nco_bits(f_s, T_op, F):
    """Phase-accumulator width keeping the frequency-quantization error within 1 - F.

    Returns :: ceil(log2(pi f_s T_op / acos(sqrt(F))) - 1)
    """
    ensure_positive('f_s', f_s)
    ensure_positive('T_op', T_op)
    if F == 1:
        raise InfiniteBitsError("fidelity 1 needs an infinite number of NCO bits", key='F')
    if not 0 < F < 1:
        raise ValidationError("F must lie in (0, 1). Instead, got %s" % repr(F), key='F')
    return int(math.ceil(math.log2(math.pi * f_s * T_op / math.acos(math.sqrt(F))) - 1))


def p_nco(plan, f_s, bits):
    """One NCO: activity_factor * E_bit * f_s * bits."""
    if bits < 1:
        raise ValidationError("bits must be at least 1. Instead, got %s" % repr(bits), key='bits')
    return plan.activity_factor * plan.E_bit * f_s * bits


def p_amp_electron(f_r, sys, k, amp):
    """Electron output stage: rms coil current times V_DD, duty cycled.

    The peak current drives k amperes-to-gauss up to the field for f_r.
    """
    ensure_nonnegative('f_r', f_r)
    ensure_positive('k', k)
    i_peak = spin.field_for_rabi(sys, spin.Target.electron, f_r) / k
    return i_peak / math.sqrt(2) * amp.V_DD * amp.duty_electron


def p_amp_nuclear(f_rc, sys, k, amp):
    """Nuclear output stage: (f_rc / (sqrt(2) gamma_c k)) * V_sup * duty."""
    ensure_nonnegative('f_rc', f_rc)
    ensure_positive('k', k)
    return f_rc / (math.sqrt(2) * sys.constants.gamma_c * k) * amp.V_sup * amp.duty_nuclear


def drive_currents(scn):
    """Peak coil currents (A) for the electron and nuclear Rabi targets."""
    budget, k = scn.budget, scn.coils.k_x
    return (spin.field_for_rabi(scn.spin, spin.Target.electron, budget.f_rabi_electron) / k,
            spin.field_for_rabi(scn.spin, spin.Target.carbon, budget.f_rabi_carbon) / k)


def unit_cell_power(scn, delta_B, strategy, N_cells=None):
    """Power of one unit cell compensating an inhomogeneity of delta_B gauss.

    dc_compensation drives the z-coil with delta_B/k_z at the LO-limited
    clock; frequency_compensation leaves the coil idle and widens the clock
    to cover gamma_e * delta_B. NCO widths are recomputed at the resulting
    clock for both trackers.

    Returns :: PowerBreakdown
    """
    ensure_nonnegative('delta_B', delta_B)
    strategy = Strategy(strategy)
    power = scn.power
    net = power.network_at_4k()
    if N_cells is not None:
        net = ElectricalNetwork(net.R_on, net.R_IC, net.R_coil, net.P_cir, N_cells)
    if strategy is Strategy.dc_compensation:
        f_comp = 0.0
        current = dc_current_for_compensation(delta_B, scn.coils.k_z)
    else:
        f_comp = scn.spin.constants.gamma_e * delta_B
        current = 0.0
    clock = ClockPlan(power.clock.f_space_LO, f_comp, power.clock.E_bit,
                      power.clock.activity_factor, power.clock.n_nco_electron,
                      power.clock.n_nco_nuclear)
    f_s = required_fs(clock)
    fidelity = 1.0 - scn.budget.nco_infidelity
    bits_e = nco_bits(f_s, scn.budget.T_op_electron, fidelity)
    bits_n = nco_bits(f_s, scn.budget.T_op_carbon, fidelity)
    dc = p_dc(current, net)
    nco = (clock.n_nco_electron * p_nco(clock, f_s, bits_e)
           + clock.n_nco_nuclear * p_nco(clock, f_s, bits_n))
    amp_e = p_amp_electron(scn.budget.f_rabi_electron, scn.spin, scn.coils.k_x, power.amplifier)
    amp_n = p_amp_nuclear(scn.budget.f_rabi_carbon, scn.spin, scn.coils.k_x, power.amplifier)
    return PowerBreakdown(p_dc=dc, p_nco_total=nco, p_amp_electron=amp_e, p_amp_nuclear=amp_n,
                          p_total=dc + nco + amp_e + amp_n, strategy=strategy, f_s=f_s,
                          bits_electron=bits_e, bits_nuclear=bits_n)


def max_unit_cells(per_cell_power, budget_W=1.0):
    """How many unit cells fit in a total power budget."""
    ensure_positive('per_cell_power', per_cell_power)
    return int(math.floor(budget_W / per_cell_power))


@dataclass(frozen=True)
class SweepRow(object):
    delta_B: float
    N: int
    strategy: Strategy
    breakdown: PowerBreakdown


def tradeoff_sweep(scn, delta_B_grid, N_list, workers=1):
    """Per-cell power of both strategies over (N, delta_B).

    Returns :: list of SweepRow ordered by N, then strategy, then delta_B
    """
    grid, cells = list(delta_B_grid), list(N_list)
    if not grid or not cells:
        raise ValidationError("sweep grid is empty", key='delta_B')
    jobs = [(b, n, s) for n in cells for s in Strategy for b in grid]
    results = parallel_map(lambda job: unit_cell_power(scn, job[0], job[2], N_cells=job[1]),
                           jobs, workers)
    return [SweepRow(b, n, s, r) for (b, n, s), r in zip(jobs, results)]


def crossover_fields(rows):
    """delta_B values where the cheaper strategy flips, per cell count.

    Crossings are linearly interpolated between neighbouring grid points.

    Returns :: dict N -> list of delta_B
    """
    by_key = {}
    for row in rows:
        by_key.setdefault((row.N, row.strategy), []).append(row)
    crossings = {}
    for n in sorted({row.N for row in rows}):
        dc = sorted(by_key.get((n, Strategy.dc_compensation), []), key=lambda r: r.delta_B)
        fc = sorted(by_key.get((n, Strategy.frequency_compensation), []), key=lambda r: r.delta_B)
        found = []
        diffs = [(a.delta_B, a.breakdown.p_total - b.breakdown.p_total) for a, b in zip(dc, fc)]
        for (b0, d0), (b1, d1) in zip(diffs[:-1], diffs[1:]):
            if d0 == 0:
                found.append(b0)
            elif d0 * d1 < 0:
                found.append(b0 + (b1 - b0) * d0 / (d0 - d1))
        crossings[n] = found
    logger.debug("crossover fields: %r", crossings)
    return crossings
