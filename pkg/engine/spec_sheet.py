"""
The requirement sheet: a fidelity budget turned into electrical
tolerances for the electron and the carbon qubit.

Every row records the equation it came from and, when it spends part of
the budget, the share it spends. verify() pushes each value back through
its forward equation and checks it reproduces that share.
"""
import logging
import math
from dataclasses import dataclass, field

from engine import fidelity, noise, pulse, readout, spin
from engine.concurrency import parallel_map
from engine.spin import ElectronState, Target

logger = logging.getLogger(__name__)

COLUMNS = ('name', 'qubit', 'value', 'unit', 'equation', 'budget_share')
VERIFY_RTOL = 0.01


@dataclass(frozen=True)
class SpecRow(object):
    name: str
    qubit: Target
    value: float
    unit: str
    equation: str
    budget_share: float = None
    forward: object = field(default=None, repr=False, compare=False)

    def reproduce(self):
        """Infidelity obtained by feeding value back into its equation."""
        if self.forward is None:
            return None
        return self.forward(self.value)

    def as_dict(self):
        return dict(name=self.name, qubit=self.qubit.value, value=self.value, unit=self.unit,
                    equation=self.equation, budget_share=self.budget_share)


class SpecSheet(object):
    """An ordered list of SpecRows."""
    def __init__(self, rows):
        self.rows = list(rows)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return "SpecSheet(%d rows)" % len(self.rows)

    def get(self, name, qubit):
        """The row called name for the given qubit."""
        qubit = Target(qubit)
        for row in self.rows:
            if row.name == name and row.qubit is qubit:
                return row
        raise KeyError("%s/%s" % (name, qubit.value))

    def verify(self, rtol=VERIFY_RTOL):
        """
        Round-trip every row that spends budget.

        Returns :: list of (row, reproduced infidelity, passed)
        """
        results = []
        for row in self.rows:
            if row.budget_share is None:
                continue
            reproduced = row.reproduce()
            passed = abs(reproduced - row.budget_share) <= rtol * row.budget_share
            if not passed:
                logger.warning("%s/%s reproduces %.4g instead of %.4g", row.name,
                               row.qubit.value, reproduced, row.budget_share)
            results.append((row, reproduced, passed))
        return results

    def as_rows(self):
        return [row.as_dict() for row in self.rows]


def _frequency_rows(scn, target):
    budget, sys = scn.budget, scn.spin
    share, f_r = budget.op_share, budget.f_rabi(target)
    if target is Target.electron:
        f0 = spin.larmor_electron(sys, scn.bias_field_parallel)
    else:
        f0 = spin.larmor_carbon(sys, scn.bias_field_parallel, ElectronState.ms0)
    delta_f = fidelity.detuning_limit(share, f_r)

    def forward_detuning(v):
        return fidelity.infidelity_static_detuning(v, f_r)

    return [
        SpecRow('target_frequency', target, f0, 'Hz', 'larmor'),
        SpecRow('frequency_inaccuracy', target, delta_f, 'Hz', 'rabi_detuning', share,
                forward_detuning),
        SpecRow('frequency_noise', target, delta_f, 'Hz_rms', 'rabi_detuning', share,
                forward_detuning),
    ]


def _timing_rows(scn, target):
    budget = scn.budget
    share, T = budget.op_share, budget.t_op(target)
    phase = math.degrees(fidelity.phase_limit(share))
    duration = fidelity.duration_limit(share, T)

    def forward_duration(v):
        return fidelity.infidelity_duration(v, T)

    return [
        SpecRow('phase_inaccuracy', target, phase, 'deg', 'rectangular_pulse', share,
                lambda v: fidelity.infidelity_phase(math.radians(v))),
        SpecRow('duration_inaccuracy', target, duration, 's', 'rectangular_pulse', share,
                forward_duration),
        SpecRow('timing_jitter', target, duration, 's_rms', 'rectangular_pulse', share,
                forward_duration),
    ]


def _amplitude_rows(scn, target):
    budget, sys = scn.budget, scn.spin
    share = budget.op_share
    ac_field = spin.field_for_rabi(sys, target, budget.f_rabi(target))
    tolerance = fidelity.amplitude_limit(share) * ac_field

    def forward_amplitude(v):
        return fidelity.infidelity_amplitude(v / ac_field)

    return [
        SpecRow('ac_field_amplitude', target, ac_field, 'G_pk', 'rabi_rate'),
        SpecRow('amplitude_inaccuracy', target, tolerance, 'G', 'rabi_rate', share,
                forward_amplitude),
        SpecRow('amplitude_noise', target, tolerance, 'G_rms', 'rabi_rate', share,
                forward_amplitude),
    ]


def _wideband_rows(scn, target):
    budget, sys = scn.budget, scn.spin
    share, f_r, T = budget.op_share, budget.f_rabi(target), budget.t_op(target)
    per_gauss = spin.rabi_per_gauss(sys, target)
    limit = pulse.wideband_noise_limit(share, f_r, T, per_gauss,
                                       bandwidth_factor=budget.wideband_bandwidth_factor,
                                       n=budget.mc_samples, seed=scn.seed)
    p = pulse.PulseSpec(f_rabi=f_r, duration=T)

    def forward(v):
        dist = pulse.WhiteTransverseNoise(v, budget.wideband_bandwidth_factor / T, per_gauss)
        return pulse.monte_carlo_infidelity(p, dist, n=budget.mc_samples, seed=scn.seed).mean

    return [SpecRow('wideband_noise', target, limit, 'G_rms', 'wideband_oracle', share, forward)]


def _idle_rows(scn, target):
    budget, sys = scn.budget, scn.spin
    share, T = budget.idle_share, budget.t_idle(target)
    slope = spin.larmor_slope(sys, target, scn.bias_field_parallel)
    spur = fidelity.spur_field_limit(share, sys, target, T)
    accuracy = fidelity.idle_detuning_limit(share, T) / slope

    def forward_psd(axis):
        def forward(v):
            level = v * (2 * math.pi * slope) ** 2
            return noise.infidelity_from_noise(noise.WhiteNoise(level),
                                               noise.FilterFunction(axis, T))
        return forward

    return [
        SpecRow('max_spur', target, spur, 'G_pk', 'spur', share,
                lambda v: fidelity.infidelity_spur(fidelity.SpurTone(v), sys, target, T)),
        SpecRow('z_field_accuracy', target, accuracy, 'G', 'idle_detuning', share,
                lambda v: fidelity.infidelity_idle_detuning(v * slope, T)),
        SpecRow('z_field_noise', target,
                noise.allowed_field_psd(share, noise.FilterAxis.parallel_idle, sys, target, T),
                'G^2/Hz', 'white_noise_filter', share,
                forward_psd(noise.FilterAxis.parallel_idle)),
        SpecRow('xy_field_noise', target,
                noise.allowed_field_psd(share, noise.FilterAxis.transverse, sys, target, T),
                'G^2/Hz', 'white_noise_filter', share,
                forward_psd(noise.FilterAxis.transverse)),
    ]


def _readout_rows(scn, target):
    budget, model, B = scn.budget.readout_budget, scn.readout, scn.bias_field_parallel
    limit = readout.bperp_limit(model, budget, B)
    return [SpecRow('allowed_xy_field', target, limit, 'G', 'readout_mixing', budget,
                    lambda v: readout.readout_infidelity(model, B, v))]


_SECTIONS = (_frequency_rows, _timing_rows, _amplitude_rows, _wideband_rows, _idle_rows,
             _readout_rows)


def build_spec_sheet(scn, workers=1):
    """
    Derive the requirement sheet of a scenario.

    Arguments:
        scn : Scenario
        workers : threads for the independent row groups

    Returns :: SpecSheet with the electron rows first, then the carbon rows
    """
    jobs = [(section, target) for target in Target for section in _SECTIONS]
    groups = parallel_map(lambda job: job[0](scn, job[1]), jobs, workers)
    sheet = SpecSheet(row for group in groups for row in group)
    logger.info("spec sheet with %d rows at %g G", len(sheet), scn.bias_field_parallel)
    return sheet
