"""
The oracle suite behind `colorcell validate`.

Each check compares an observed number with the value an independent
calculation predicts: the pulse simulator against the closed forms, the
noise integrator against analytic integrals, the Biot-Savart solver
against textbook fields, and the power and readout models against the
reference operating point. A check passes when the observed value lies in
[lower, upper].
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from engine import fidelity, geometries, magnetics, noise, power, pulse, readout, spin
from engine.spec_sheet import build_spec_sheet

logger = logging.getLogger(__name__)

COLUMNS = ('name', 'expected', 'observed', 'lower', 'upper', 'passed')


@dataclass(frozen=True)
class Check(object):
    name: str
    expected: float
    observed: float
    lower: float
    upper: float

    @property
    def passed(self):
        return bool(self.lower <= self.observed <= self.upper)

    def as_dict(self):
        return dict(name=self.name, expected=self.expected, observed=self.observed,
                    lower=self.lower, upper=self.upper, passed='pass' if self.passed else 'FAIL')


class ValidationReport(object):
    def __init__(self, checks):
        self.checks = list(checks)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    def failures(self):
        return [check for check in self.checks if not check.passed]

    def as_rows(self):
        return [check.as_dict() for check in self.checks]

    def __repr__(self):
        return "ValidationReport(%d checks, %d failed)" % (len(self.checks), len(self.failures()))


def relative(name, expected, observed, rtol):
    return Check(name, expected, observed, expected * (1 - rtol), expected * (1 + rtol))


def factor(name, expected, observed, k):
    return Check(name, expected, observed, expected / k, expected * k)


def absolute(name, expected, observed, atol):
    return Check(name, expected, observed, expected - atol, expected + atol)


# Pulse oracle against the closed forms

def check_rabi_formula(f_rabi=5e6):
    """Detuning equal to the Rabi rate for a time pi/(sqrt(2) Omega) transfers half."""
    omega = 2 * math.pi * f_rabi
    t = math.pi / (math.sqrt(2) * omega)
    p = pulse.PulseSpec(f_rabi=f_rabi, duration=t, detuning=f_rabi)
    observed = pulse.transfer_probability(pulse.simulate_gate(p))
    return [absolute('rabi_formula_half_transfer', 0.5, observed, 1e-10),
            absolute('rabi_formula_general', pulse.rabi_transfer_probability(f_rabi, f_rabi, t),
                     observed, 1e-10)]


def _static_oracle(f_rabi, errors):
    p = pulse.PulseSpec.pi_pulse(f_rabi)
    U_ideal = pulse.simulate_gate(p)
    return pulse.worst_case_infidelity(pulse.simulate_gate(p, pulse.ErrorRealization(**errors)),
                                       U_ideal)


def check_static_errors(budget):
    """Each static-error tolerance, simulated, spends its share within 20%."""
    share, f_r, T = budget.op_share, budget.f_rabi_electron, budget.T_op_electron
    limits = fidelity.static_error_infidelities(share, f_r, T)
    cases = [
        ('detuning', dict(delta_f=limits.delta_f_max)),
        ('phase', dict(delta_phase=limits.phase_max)),
        ('duration', dict(delta_duration=limits.duration_max)),
        ('amplitude', dict(rel_amplitude=limits.rel_amplitude_max)),
    ]
    checks = [relative('oracle_%s_at_limit' % name, share, _static_oracle(f_r, errors), 0.2)
              for name, errors in cases]
    full = _static_oracle(f_r, dict(delta_f=limits.delta_f_max))
    half = _static_oracle(f_r, dict(delta_f=limits.delta_f_max / 2))
    checks.append(relative('oracle_quadratic_scaling', 4.0, full / half, 0.1))
    return checks


def check_monte_carlo(budget, sys, seed, n=None):
    """Wideband and quasi-static noise rows against their reference tolerances."""
    n = n or budget.mc_samples
    share = budget.op_share
    f_r, T = budget.f_rabi_electron, budget.T_op_electron
    p = pulse.PulseSpec(f_rabi=f_r, duration=T)
    per_gauss = spin.rabi_per_gauss(sys, spin.Target.electron)
    wideband = pulse.wideband_noise_limit(share, f_r, T, per_gauss,
                                          bandwidth_factor=budget.wideband_bandwidth_factor,
                                          n=n, seed=seed)
    static = pulse.QuasiStaticDetuning(fidelity.detuning_limit(share, f_r))
    return [
        factor('wideband_limit_electron', 3.4e-3, wideband, 2.0),
        relative('quasi_static_detuning', share,
                 pulse.monte_carlo_infidelity(p, static, n=n, seed=seed).mean, 0.3),
    ]


# Noise integrals

def check_noise_integrals(T_op=100e-9):
    level = 1.0
    white = noise.infidelity_from_noise(noise.WhiteNoise(level),
                                        noise.FilterFunction('parallel_idle', T_op))
    T2_star = 100 * T_op
    ou = noise.OrnsteinUhlenbeckNoise(T2_star, 1e3 * T_op)
    slow = noise.infidelity_from_noise(ou, noise.FilterFunction('parallel_idle', T_op))
    edges = [0.0] + sorted(ou.corner_frequencies()) + [np.inf]
    total = sum(integrate.quad(lambda w: noise.psd(ou, w), a, b, limit=200, epsrel=1e-8)[0]
                for a, b in zip(edges[:-1], edges[1:]))
    return [
        relative('white_noise_gain', level * T_op / 4, white, 0.005),
        relative('ou_slow_noise_limit', fidelity.infidelity_dephasing(T2_star, T_op), slow, 0.05),
        relative('ou_total_power', math.pi * ou.omega2 ** 2, total, 0.001),
    ]


# Magnetostatics

def check_magnetics(coils):
    loop = magnetics.CoilGeometry.from_loops([magnetics.CircularLoop((0.0, 0.0, 0.0), 10e-6)])
    on_axis = magnetics.field_at_point(loop, 1.0, (0.0, 0.0, 15e-6))[2]
    analytic_loop = (magnetics.MU0 * 10e-6 ** 2 / (2 * (10e-6 ** 2 + 15e-6 ** 2) ** 1.5)
                     * 1e4)
    wire = magnetics.CoilGeometry.from_segments([(0.0, -5e-3, 0.0)], [(0.0, 5e-3, 0.0)])
    near_wire = np.linalg.norm(magnetics.field_at_point(wire, 1.0, (15e-6, 0.0, 0.0)))
    point = coils.qubit_point
    k_x = magnetics.coupling(geometries.x_coil(coils), point, 'x')
    k_z = magnetics.coupling(geometries.z_coil(coils), point, 'z')
    beta = magnetics.crosstalk_beta(geometries.lo_wire(coils), point, coils.k_x,
                                    coils.lo_wire_current, coils.local_drive_current)
    return [
        relative('loop_on_axis', analytic_loop, on_axis, 0.01),
        relative('straight_wire', magnetics.MU0 / (2 * math.pi * 15e-6) * 1e4, near_wire, 0.01),
        relative('k_x_default_stack', 290.0, k_x, 0.3),
        relative('k_z_default_stack', 706.0, k_z, 0.3),
        relative('lo_wire_beta', 1.1e-3, beta, 0.5),
    ]


def check_helmholtz(coils, B_center=2000.0):
    half = coils.chip_size / 2
    result = magnetics.helmholtz_inhomogeneity(
        coils.helmholtz_radius, coils.helmholtz_spacing,
        (coils.helmholtz_width, coils.helmholtz_height), B_center,
        magnetics.Box(half, half), filaments=coils.helmholtz_filaments)
    # 2.4 G at 2000 G; the inhomogeneity scales with the centre field
    return [relative('helmholtz_delta_B', 2.4 * B_center / 2000.0, result.delta_B, 0.5)]


# Crosstalk, readout and power

def check_crosstalk(beta=1.1e-3, f_rabi=5e6):
    envelope = fidelity.offresonant_envelope(fidelity.CrosstalkScenario(10e6, f_rabi, beta * f_rabi))
    node = max(fidelity.infidelity_offresonant_drive(
        fidelity.CrosstalkScenario(a * f_rabi, f_rabi, beta * f_rabi)) for a in (2, 4, 6))
    return [Check('crosstalk_envelope_10MHz', 1e-5, envelope, 0.0, 1e-5),
            absolute('crosstalk_nodes', 0.0, node, 1e-12)]


def check_readout(model, budget):
    at = {b: readout.readout_infidelity(model, b, 2.0) for b in (45.0, 400.0, 2000.0)}
    return [
        Check('readout_400G_above_45G', 0.0, at[400.0] - at[45.0], 0.0, math.inf),
        Check('readout_2000G_below_400G', 0.0, at[400.0] - at[2000.0], 0.0, math.inf),
        factor('readout_bperp_limit', 5.5, readout.bperp_limit(model, budget, 2000.0), 3.0),
    ]


def check_power(scn):
    budget = scn.budget
    fidelity_nco = 1 - budget.nco_infidelity
    f_s = power.required_fs(scn.power.clock)
    bits_e = power.nco_bits(f_s, budget.T_op_electron, fidelity_nco)
    bits_n = power.nco_bits(f_s, budget.T_op_carbon, fidelity_nco)
    nco_sum = (power.p_nco(scn.power.clock, f_s, bits_e)
               + scn.power.clock.n_nco_nuclear * power.p_nco(scn.power.clock, f_s, bits_n))
    cell = power.unit_cell_power(scn, scn.power.delta_B, power.Strategy.dc_compensation)
    return [
        absolute('nco_bits_electron', 11, bits_e, 0),
        absolute('nco_bits_nuclear', 21, bits_n, 0),
        relative('nco_sum', 0.84e-3, nco_sum, 0.01),
        relative('unit_cell_total', 3e-3, cell.p_total, 0.25),
        Check('hundred_cells_below_1W', 1.0, 100 * cell.p_total, 0.0, 1.0),
    ]


def check_spec_sheet(scn, workers=1):
    sheet = build_spec_sheet(scn, workers=workers)
    worst = max(abs(reproduced - row.budget_share) / row.budget_share
                for row, reproduced, _ in sheet.verify())
    return [Check('spec_sheet_round_trip', 0.0, worst, 0.0, 0.01)]


def run_suite(scn, workers=1):
    """
    Run every oracle check for a scenario.

    Arguments:
        scn : Scenario; its seed fixes every Monte Carlo draw
        workers : threads for the spec-sheet rows

    Returns :: ValidationReport
    """
    checks = []
    checks += check_rabi_formula(scn.budget.f_rabi_electron)
    checks += check_static_errors(scn.budget)
    checks += check_monte_carlo(scn.budget, scn.spin, scn.seed)
    checks += check_noise_integrals(scn.budget.T_op_electron)
    checks += check_magnetics(scn.coils)
    checks += check_helmholtz(scn.coils, scn.bias_field_parallel)
    checks += check_crosstalk()
    checks += check_readout(scn.readout, scn.budget.readout_budget)
    checks += check_power(scn)
    checks += check_spec_sheet(scn, workers)
    report = ValidationReport(checks)
    for check in report.failures():
        logger.warning("check %s failed: %.6g not in [%.6g, %.6g]", check.name, check.observed,
                       check.lower, check.upper)
    return report
