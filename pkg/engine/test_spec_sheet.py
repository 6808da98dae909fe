import math
import unittest

from engine import config
from engine.spec_sheet import COLUMNS, build_spec_sheet
from engine.spin import Target

FAST = ['mc_samples=100']


class SpecSheetTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.scn = config.apply_overrides(config.Scenario(), FAST)
        cls.sheet = build_spec_sheet(cls.scn)

    def assertRow(self, name, qubit, expected, rtol):
        value = self.sheet.get(name, qubit).value
        self.assertLessEqual(abs(value / expected - 1), rtol,
                             msg="%s/%s = %r, expected %r" % (name, qubit, value, expected))

    def test_shape(self):
        self.assertEqual(len(self.sheet), 30)
        self.assertIs(self.sheet.rows[0].qubit, Target.electron)
        self.assertIs(self.sheet.rows[-1].qubit, Target.carbon)
        self.assertEqual(tuple(self.sheet.as_rows()[0]), COLUMNS)

    def test_frequencies(self):
        self.assertRow('target_frequency', 'electron', 2.72e9, 1e-9)
        self.assertRow('target_frequency', 'carbon', 2.141e6, 1e-9)
        self.assertRow('frequency_inaccuracy', 'electron', 17.68e3, 0.001)
        self.assertRow('frequency_inaccuracy', 'carbon', 17.68, 0.001)

    def test_timing(self):
        self.assertRow('phase_inaccuracy', 'electron', 0.2026, 0.001)
        self.assertRow('duration_inaccuracy', 'electron', 0.2251e-9, 0.001)
        self.assertRow('timing_jitter', 'carbon', 0.2251e-6, 0.001)

    def test_amplitudes(self):
        self.assertRow('ac_field_amplitude', 'electron', 2.525, 0.001)
        self.assertRow('ac_field_amplitude', 'carbon', 4.671, 0.001)
        self.assertRow('amplitude_inaccuracy', 'electron', 5.68e-3, 0.005)
        self.assertRow('amplitude_noise', 'carbon', 10.5e-3, 0.005)

    def test_idle(self):
        self.assertRow('max_spur', 'electron', 8.04e-3, 0.005)
        self.assertRow('max_spur', 'carbon', 14.87e-3, 0.005)
        self.assertRow('z_field_accuracy', 'electron', 5.68e-3, 0.005)
        self.assertRow('z_field_accuracy', 'carbon', 14.87e-3, 0.005)
        self.assertRow('z_field_noise', 'electron', 3.23e-12, 0.005)
        self.assertRow('z_field_noise', 'carbon', 22.1e-9, 0.005)
        self.assertRow('xy_field_noise', 'electron', 3.23e-12 / 2, 0.005)

    def test_wideband(self):
        self.assertRow('wideband_noise', 'electron', 6.0e-3, 0.25)
        self.assertRow('wideband_noise', 'carbon', 11.0e-3, 0.25)

    def test_readout(self):
        self.assertRow('allowed_xy_field', 'electron', 5.5, 2.0)
        self.assertEqual(self.sheet.get('allowed_xy_field', 'electron').value,
                         self.sheet.get('allowed_xy_field', 'carbon').value)

    def test_informational_rows(self):
        row = self.sheet.get('target_frequency', 'electron')
        self.assertIsNone(row.budget_share)
        self.assertIsNone(row.reproduce())

    def test_verify(self):
        results = self.sheet.verify()
        self.assertEqual(len(results), 26)
        for row, reproduced, passed in results:
            self.assertTrue(passed, msg="%s/%s reproduced %r" % (row.name, row.qubit.value,
                                                                 reproduced))

    def test_missing_row(self):
        with self.assertRaises(KeyError):
            self.sheet.get('magic', 'electron')


class BudgetSplitTestCase(unittest.TestCase):
    def test_more_components_tighten_quadratic_rows(self):
        base = config.apply_overrides(config.Scenario(), FAST)
        finer = config.apply_overrides(base, ['n_components_op=16'])
        coarse_sheet, fine_sheet = build_spec_sheet(base), build_spec_sheet(finer, workers=4)
        for name in ('frequency_inaccuracy', 'amplitude_inaccuracy'):
            ratio = (coarse_sheet.get(name, 'electron').value
                     / fine_sheet.get(name, 'electron').value)
            self.assertAlmostEqual(ratio, math.sqrt(2), places=3)
        self.assertEqual(coarse_sheet.get('max_spur', 'electron').value,
                         fine_sheet.get('max_spur', 'electron').value)
