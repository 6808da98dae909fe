import math
import unittest

from engine import fidelity
from engine.errors import ValidationError
from engine.fidelity import CrosstalkScenario, FidelityBudget, SpurTone
from engine.spin import SpinSystem, Target


class FidelityBudgetTestCase(unittest.TestCase):
    def setUp(self):
        self.budget = FidelityBudget()

    def test_shares(self):
        self.assertAlmostEqual(self.budget.op_share, 1.25e-5, delta=1e-15)
        self.assertAlmostEqual(self.budget.idle_share, 2.5e-5, delta=1e-15)

    def test_idle_defaults_follow_operations(self):
        self.assertEqual(self.budget.T_idle, 100e-9)
        self.assertEqual(self.budget.t_idle(Target.carbon), 100e-6)
        self.assertEqual(FidelityBudget(T_op_electron=50e-9).T_idle, 50e-9)

    def test_perfect_fidelity_is_unreachable(self):
        with self.assertRaises(ValidationError) as ctx:
            FidelityBudget(target_fidelity=1.0)
        self.assertEqual(ctx.exception.key, 'target_fidelity')

    def test_component_counts(self):
        with self.assertRaises(ValidationError):
            FidelityBudget(n_components_op=0)
        with self.assertRaises(ValidationError):
            FidelityBudget(mc_samples=10)


class IdleErrorsTestCase(unittest.TestCase):
    def setUp(self):
        self.nv = SpinSystem()

    def test_idle_detuning(self):
        self.assertAlmostEqual(fidelity.infidelity_idle_detuning(15.9e3, 100e-9), 2.50e-5,
                               delta=0.01e-5)
        self.assertEqual(fidelity.infidelity_idle_detuning(0.0, 1.0), 0.0)
        self.assertAlmostEqual(fidelity.infidelity_idle_detuning(17.7, 100e-6), 3.09e-5,
                               delta=0.01e-5)

    def test_idle_detuning_is_bounded(self):
        for delta_f in (1e3, 1e6, 3.3e6, 5e6, 1e9):
            value = fidelity.infidelity_idle_detuning(delta_f, 100e-9)
            self.assertGreaterEqual(value, 0.0)
            self.assertLessEqual(value, 1.0)

    def test_idle_detuning_limit(self):
        limit = fidelity.idle_detuning_limit(2.5e-5, 100e-9)
        self.assertAlmostEqual(limit, 15.9e3, delta=30.0)
        self.assertAlmostEqual(fidelity.infidelity_idle_detuning(limit, 100e-9), 2.5e-5,
                               delta=2.5e-14)

    def test_dephasing(self):
        self.assertAlmostEqual(fidelity.infidelity_dephasing(math.sqrt(2) / 1e5, 100e-9), 2.5e-5,
                               delta=1e-14)
        self.assertEqual(fidelity.infidelity_dephasing(math.inf, 1.0), 0.0)
        self.assertAlmostEqual(fidelity.infidelity_dephasing(100e-6, 1e-6), 5.0e-5, delta=1e-13)

    def test_dephasing_outside_validity_is_flagged(self):
        with self.assertLogs('engine.fidelity', level='WARNING'):
            value = fidelity.infidelity_dephasing(1e-6, 1e-6)
        self.assertAlmostEqual(value, 0.5)
        self.assertTrue(fidelity.small_error_flag(value))
        self.assertFalse(fidelity.small_error_flag(1e-5))

    def test_spur(self):
        self.assertAlmostEqual(
            fidelity.infidelity_spur(SpurTone(8.0e-3), self.nv, Target.electron, 100e-9),
            2.48e-5, delta=0.01e-5)
        self.assertAlmostEqual(
            fidelity.infidelity_spur(SpurTone(14.9e-3), self.nv, Target.carbon, 100e-6),
            2.51e-5, delta=0.01e-5)
        self.assertEqual(fidelity.infidelity_spur(SpurTone(0.0), self.nv, Target.electron, 1.0),
                         0.0)

    def test_spur_limit(self):
        electron = fidelity.spur_field_limit(2.5e-5, self.nv, Target.electron, 100e-9)
        carbon = fidelity.spur_field_limit(2.5e-5, self.nv, Target.carbon, 100e-6)
        self.assertAlmostEqual(electron, 8.0e-3, delta=0.05e-3)
        self.assertAlmostEqual(carbon, 14.9e-3, delta=0.1e-3)
        back = fidelity.infidelity_spur(SpurTone(electron), self.nv, Target.electron, 100e-9)
        self.assertLessEqual(abs(back - 2.5e-5), 1e-9 * 2.5e-5)
        self.assertEqual(fidelity.spur_field_limit(0.0, self.nv, Target.electron, 100e-9), 0.0)

    def test_monotone_in_time(self):
        values = [fidelity.infidelity_spur(SpurTone(1e-3), self.nv, Target.electron, t)
                  for t in (1e-9, 1e-8, 1e-7)]
        self.assertEqual(values, sorted(values))


class CrosstalkTestCase(unittest.TestCase):
    def test_node(self):
        x = CrosstalkScenario(f_space=10e6, f_rabi_addressed=5e6, f_rabi_unaddressed=5.5e3)
        self.assertAlmostEqual(x.alpha, 2.0)
        self.assertLess(fidelity.infidelity_offresonant_drive(x), 1e-20)

    def test_zero_beta(self):
        x = CrosstalkScenario(3e6, 5e6, 0.0)
        self.assertEqual(fidelity.infidelity_offresonant_drive(x), 0.0)

    def test_unit_case(self):
        x = CrosstalkScenario(5e6, 5e6, 5e6)
        self.assertAlmostEqual(fidelity.infidelity_offresonant_drive(x), 1.0)

    def test_alpha_zero_limit(self):
        x = CrosstalkScenario(0.0, 5e6, 5e3)
        self.assertAlmostEqual(fidelity.infidelity_offresonant_drive(x),
                               (1e-3) ** 2 * math.pi ** 2 / 4)
        near = CrosstalkScenario(1e-3, 5e6, 5e3)
        self.assertAlmostEqual(fidelity.infidelity_offresonant_drive(near),
                               fidelity.infidelity_offresonant_drive(x), delta=1e-15)

    def test_bounded_by_envelope(self):
        for f_space in (0.3e6, 1.1e6, 7.7e6, 13e6):
            x = CrosstalkScenario(f_space, 5e6, 5.5e3)
            self.assertLessEqual(fidelity.infidelity_offresonant_drive(x),
                                 fidelity.offresonant_envelope(x) * (1 + 1e-12))

    def test_lo_detuning_threshold(self):
        threshold = fidelity.lo_detuning_threshold(1.1e-3, 5e6, 1e-5)
        self.assertAlmostEqual(threshold, 1.1e-3 * 5e6 / math.sqrt(1e-5))
        x = CrosstalkScenario(threshold, 5e6, 1.1e-3 * 5e6)
        self.assertAlmostEqual(fidelity.offresonant_envelope(x), 1e-5, delta=1e-17)


class StaticErrorTestCase(unittest.TestCase):
    def setUp(self):
        self.electron = fidelity.static_error_infidelities(1.25e-5, 5e6, 100e-9)
        self.carbon = fidelity.static_error_infidelities(1.25e-5, 5e3, 100e-6)

    def test_electron_limits(self):
        self.assertAlmostEqual(self.electron.delta_f_max, 17.7e3, delta=0.05e3)
        self.assertAlmostEqual(math.degrees(self.electron.phase_max), 0.20, delta=0.005)
        self.assertAlmostEqual(self.electron.duration_max, 0.23e-9, delta=0.01e-9)
        self.assertAlmostEqual(self.electron.rel_amplitude_max, 2.251e-3, delta=1e-6)

    def test_carbon_limits(self):
        self.assertAlmostEqual(self.carbon.delta_f_max, 17.7, delta=0.05)
        self.assertAlmostEqual(self.carbon.duration_max, 0.23e-6, delta=0.01e-6)

    def test_round_trips(self):
        share = 1.25e-5
        forward = [
            fidelity.infidelity_static_detuning(self.electron.delta_f_max, 5e6),
            fidelity.infidelity_phase(self.electron.phase_max),
            fidelity.infidelity_duration(self.electron.duration_max, 100e-9),
            fidelity.infidelity_amplitude(self.electron.rel_amplitude_max),
        ]
        for value in forward:
            self.assertLessEqual(abs(value - share), 1e-9 * share)

    def test_quadratic_scaling(self):
        pairs = [
            (fidelity.infidelity_static_detuning(1e3, 5e6),
             fidelity.infidelity_static_detuning(0.5e3, 5e6)),
            (fidelity.infidelity_phase(1e-4), fidelity.infidelity_phase(0.5e-4)),
            (fidelity.infidelity_duration(1e-12, 100e-9),
             fidelity.infidelity_duration(0.5e-12, 100e-9)),
            (fidelity.infidelity_amplitude(1e-5), fidelity.infidelity_amplitude(0.5e-5)),
        ]
        for full, half in pairs:
            self.assertLessEqual(abs(full / half - 4.0), 4.0 * 1e-6)

    def test_more_components_shrink_by_sqrt2(self):
        coarse = fidelity.static_error_infidelities(1e-4 / 8, 5e6, 100e-9)
        fine = fidelity.static_error_infidelities(1e-4 / 16, 5e6, 100e-9)
        self.assertAlmostEqual(coarse.delta_f_max / fine.delta_f_max, math.sqrt(2))

    def test_invalid_share(self):
        with self.assertRaises(ValidationError):
            fidelity.static_error_infidelities(0.0, 5e6, 100e-9)
