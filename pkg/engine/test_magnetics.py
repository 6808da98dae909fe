import math
import os
import shutil
import tempfile
import unittest

import numpy as np

from engine import geometries, magnetics
from engine.errors import (DiscretizationError, SingularityError,
                           ValidationError)
from engine.magnetics import MU0, Box, CircularLoop, CoilGeometry, CoilSet


class BiotSavartTestCase(unittest.TestCase):
    def setUp(self):
        self.loop = CoilGeometry.from_loops([CircularLoop((0.0, 0.0, 0.0), 10e-6)])
        self.wire = CoilGeometry.from_segments([(0.0, -5e-3, 0.0)], [(0.0, 5e-3, 0.0)])

    def test_loop_on_axis(self):
        field = magnetics.field_at_point(self.loop, 1.0, (0.0, 0.0, 15e-6))
        self.assertAlmostEqual(field[2], 107.2, delta=0.5)
        self.assertAlmostEqual(field[0], 0.0, delta=1e-9)
        self.assertAlmostEqual(field[1], 0.0, delta=1e-9)

    def test_loop_mirror(self):
        above = magnetics.field_at_point(self.loop, 1.0, (0.0, 0.0, 15e-6))
        below = magnetics.field_at_point(self.loop, 1.0, (0.0, 0.0, -15e-6))
        self.assertAlmostEqual(above[2] / below[2], 1.0, places=9)

    def test_straight_wire(self):
        field = magnetics.field_at_point(self.wire, 1.0, (15e-6, 0.0, 0.0))
        self.assertAlmostEqual(np.linalg.norm(field) / (MU0 / (2 * math.pi * 15e-6) * 1e4), 1.0,
                               places=4)

    def test_linear_in_current(self):
        p = (3e-6, 2e-6, 12e-6)
        one = magnetics.field_at_point(self.loop, 1.0, p)
        three = magnetics.field_at_point(self.loop, 3.0, p)
        self.assertTrue(np.allclose(three, 3 * one, rtol=1e-12, atol=0))

    def test_on_conductor(self):
        with self.assertRaises(SingularityError):
            magnetics.field_at_point(self.wire, 1.0, (0.0, 1e-3, 0.0))

    def test_coarse_loop_is_rejected(self):
        with self.assertRaises(DiscretizationError):
            magnetics.field_at_point(self.loop, 1.0, (9e-6, 0.0, 0.1e-6), loop_segments=4)

    def test_polyline_must_close(self):
        with self.assertRaises(ValidationError):
            CoilGeometry.from_polyline([(0, 0, 0), (1e-6, 0, 0), (1e-6, 1e-6, 0)])

    def test_elliptic_matches_polygon(self):
        b_rho, b_z = magnetics.loop_field_axisymmetric(10e-6, 0.0, 1.0, 5e-6, 10e-6)
        field = magnetics.field_at_point(self.loop, 1.0, (5e-6, 0.0, 10e-6))
        self.assertAlmostEqual(field[0] / float(b_rho), 1.0, places=4)
        self.assertAlmostEqual(field[2] / float(b_z), 1.0, places=4)

    def test_loop_is_rotationally_symmetric(self):
        reference = magnetics.field_at_point(self.loop, 1.0, (5e-6, 0.0, 10e-6))
        for k in range(8):
            phi = k * math.pi / 4
            c, s = math.cos(phi), math.sin(phi)
            field = magnetics.field_at_point(self.loop, 1.0, (5e-6 * c, 5e-6 * s, 10e-6))
            self.assertAlmostEqual(field[2] / reference[2], 1.0, places=4)
            self.assertAlmostEqual((field[0] * c + field[1] * s) / reference[0], 1.0, places=4)
            self.assertAlmostEqual((field[1] * c - field[0] * s) / reference[2], 0.0, places=4)

    def test_fields_superpose(self):
        p = (4e-6, -3e-6, 8e-6)
        both = self.loop.combined(self.wire)
        expected = (magnetics.field_at_point(self.loop, 2.0, p)
                    + magnetics.field_at_point(self.wire, 2.0, p))
        self.assertTrue(np.allclose(magnetics.field_at_point(both, 2.0, p), expected,
                                    rtol=1e-9, atol=1e-12))


class CouplingTestCase(unittest.TestCase):
    def setUp(self):
        self.coils = CoilSet()

    def test_default_couplings(self):
        k_x = magnetics.coupling(geometries.x_coil(self.coils), self.coils.qubit_point, 'x')
        k_z = magnetics.coupling(geometries.z_coil(self.coils), self.coils.qubit_point, 'z')
        self.assertLessEqual(abs(k_x / 290.0 - 1), 0.3)
        self.assertLessEqual(abs(k_z / 706.0 - 1), 0.3)

    def test_x_coil_points_along_x(self):
        k_x, k_y, k_z = magnetics.coupling_vector(geometries.x_coil(self.coils), (0.0, 0.0, 0.0))
        self.assertGreater(k_x, 10 * k_y)

    def test_y_coil_points_along_y(self):
        k_x, k_y, k_z = magnetics.coupling_vector(geometries.y_coil(self.coils), (0.0, 0.0, 0.0))
        self.assertGreater(k_y, 10 * k_x)

    def test_radius_sweep(self):
        rows = magnetics.sweep_coupling(geometries.z_radius_family(self.coils),
                                        [5e-6, 10e-6, 20e-6, 40e-6])
        k_z = [row.k_z for row in rows]
        self.assertEqual(k_z, sorted(k_z, reverse=True))
        resistances = [row.R_coil for row in rows]
        self.assertEqual(resistances, sorted(resistances))

    def test_turns_sweep(self):
        rows = magnetics.sweep_coupling(geometries.z_turns_family(self.coils), [1, 2, 4],
                                        workers=2)
        self.assertEqual([row.param for row in rows], [1.0, 2.0, 4.0])
        k_z = [row.k_z for row in rows]
        self.assertEqual(k_z, sorted(k_z))

    def test_empty_sweep(self):
        with self.assertRaises(ValidationError):
            magnetics.sweep_coupling(geometries.z_radius_family(self.coils), [])

    def test_resistance(self):
        g = geometries.z_coil(self.coils)
        squares = 2 * math.pi * 9e-6 / 2e-6
        self.assertAlmostEqual(magnetics.coil_resistance(g, 0.01, 4.0), squares * 0.01 / 4)
        with self.assertRaises(ValidationError):
            magnetics.coil_resistance(geometries.lo_wire(self.coils), 0.01)


class CrosstalkBetaTestCase(unittest.TestCase):
    def setUp(self):
        self.coils = CoilSet()
        self.wire = geometries.lo_wire(self.coils)

    def test_default_beta(self):
        beta = magnetics.crosstalk_beta(self.wire, (0.0, 0.0, 0.0), self.coils.k_x,
                                        self.coils.lo_wire_current, self.coils.local_drive_current)
        self.assertLessEqual(abs(beta / 1.1e-3 - 1), 0.5)

    def test_linear_in_wire_current(self):
        one = magnetics.crosstalk_beta(self.wire, (0.0, 0.0, 0.0), 290.0, 0.01, 8.3e-3)
        two = magnetics.crosstalk_beta(self.wire, (0.0, 0.0, 0.0), 290.0, 0.02, 8.3e-3)
        self.assertAlmostEqual(two / one, 2.0)
        self.assertEqual(magnetics.crosstalk_beta(self.wire, (0.0, 0.0, 0.0), 290.0, 0.0, 8.3e-3),
                         0.0)


class HelmholtzTestCase(unittest.TestCase):
    def setUp(self):
        self.coils = CoilSet()

    def test_ideal_pair(self):
        r = 0.05
        field = magnetics.helmholtz_pair_field(r, r, (0.0, 0.0), 1.0, [(0.0, 0.0, 0.0)])[0]
        expected = (4.0 / 5.0) ** 1.5 * MU0 / r * 1e4
        self.assertAlmostEqual(field[2] / expected, 1.0, places=9)

    def test_point_region(self):
        result = magnetics.helmholtz_inhomogeneity(0.05, 0.04, (0.0, 0.0), 2000.0, Box(0.0, 0.0))
        self.assertLess(result.delta_B, 1e-9)
        self.assertEqual(result.B_center, 2000.0)

    def test_default_stack(self):
        half = self.coils.chip_size / 2
        result = magnetics.helmholtz_inhomogeneity(
            self.coils.helmholtz_radius, self.coils.helmholtz_spacing,
            (self.coils.helmholtz_width, self.coils.helmholtz_height), 2000.0, Box(half, half))
        self.assertLessEqual(abs(result.delta_B / 2.4 - 1), 0.5)
        self.assertEqual(result.filaments, 40)

    def test_scales_with_field(self):
        low = magnetics.helmholtz_inhomogeneity(0.05, 0.04, (0.0, 0.0), 1000.0, Box(5e-3, 5e-3))
        high = magnetics.helmholtz_inhomogeneity(0.05, 0.04, (0.0, 0.0), 2000.0, Box(5e-3, 5e-3))
        self.assertAlmostEqual(high.delta_B / low.delta_B, 2.0, places=6)

    def test_region_must_fit(self):
        with self.assertRaises(ValidationError):
            magnetics.helmholtz_inhomogeneity(0.05, 0.04, (0.0, 0.0), 2000.0, Box(0.05, 0.0))
        with self.assertRaises(ValidationError):
            magnetics.helmholtz_inhomogeneity(0.05, 0.04, (0.0, 0.0), 2000.0, Box(0.0, 0.0),
                                              filaments=5)


class SegmentFileTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.path = os.path.join(self.directory, 'wire.csv')
        with open(self.path, 'w') as handle:
            handle.write("x0,y0,z0,x1,y1,z1\n0,-5e-3,0,0,0,0\n0,0,0,0,5e-3,0\n")

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_matches_straight_wire(self):
        g = magnetics.load_segments_csv(self.path, trace_width=2e-6)
        field = magnetics.field_at_point(g, 1.0, (15e-6, 0.0, 0.0))
        self.assertAlmostEqual(np.linalg.norm(field) / (MU0 / (2 * math.pi * 15e-6) * 1e4), 1.0,
                               places=4)
        self.assertAlmostEqual(g.trace_length, 10e-3)
        self.assertAlmostEqual(magnetics.coil_resistance(g, 0.01, 4.0), 5000 * 0.01 / 4)

    def test_bad_rows(self):
        with open(self.path, 'w') as handle:
            handle.write("x0,y0,z0,x1,y1\n0,0,0,1,1\n")
        with self.assertRaises(ValidationError):
            magnetics.load_segments_csv(self.path)

    def test_missing_file(self):
        with self.assertRaises(ValidationError):
            magnetics.load_segments_csv(os.path.join(self.directory, 'none.csv'))
