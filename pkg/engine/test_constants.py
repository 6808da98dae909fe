import unittest

from engine import errors
from engine.concurrency import parallel_map
from engine.constants import GAMMA_C, GAMMA_E, PhysicalConstants


class PhysicalConstantsTestCase(unittest.TestCase):
    def test_defaults(self):
        c = PhysicalConstants()
        self.assertEqual(c.gamma_e, 2.8e6)
        self.assertEqual(c.gamma_c, 1.0705e3)
        self.assertEqual(c.zero_field_splitting_gs, 2.88e9)
        self.assertAlmostEqual(c.mu0, 1.25663706e-6, delta=1e-14)

    def test_ordering_of_gyromagnetic_ratios(self):
        with self.assertRaises(errors.ValidationError) as ctx:
            PhysicalConstants(gamma_e=GAMMA_C, gamma_c=GAMMA_E)
        self.assertEqual(ctx.exception.key, 'gamma_c')
        with self.assertRaises(errors.ValidationError):
            PhysicalConstants(gamma_c=0.0)

    def test_rounded_carbon_ratio_is_accepted(self):
        self.assertEqual(PhysicalConstants(gamma_c=1.0e3).gamma_c, 1.0e3)


class ErrorsTestCase(unittest.TestCase):
    def test_hierarchy(self):
        self.assertTrue(issubclass(errors.ValidationError, ValueError))
        self.assertTrue(issubclass(errors.RangeError, errors.ValidationError))
        self.assertTrue(issubclass(errors.QuadratureError, errors.NonConvergenceError))
        self.assertTrue(issubclass(errors.DegenerateLevelError, ArithmeticError))

    def test_config_parse_error_line(self):
        err = errors.ConfigParseError("bad line", path="x.cfg", lineno=3)
        self.assertIn("(line 3)", str(err))
        self.assertEqual(err.lineno, 3)

    def test_ensure_helpers(self):
        self.assertEqual(errors.ensure_positive('R', 2.0), 2.0)
        with self.assertRaises(errors.ValidationError) as ctx:
            errors.ensure_nonnegative('R_on', -1)
        self.assertEqual(ctx.exception.key, 'R_on')
        self.assertIn('-1', str(ctx.exception))
        with self.assertRaises(errors.ValidationError):
            errors.ensure_open_unit('F', 1.0)
        self.assertEqual(errors.ensure_closed_unit('duty', 1.0), 1.0)


class ParallelMapTestCase(unittest.TestCase):
    def test_order_is_kept(self):
        items = list(range(50))
        self.assertEqual(parallel_map(lambda x: x * x, items, workers=4),
                         [x * x for x in items])
        self.assertEqual(parallel_map(lambda x: x * x, items, workers=1),
                         [x * x for x in items])
