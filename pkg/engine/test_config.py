import os
import shutil
import tempfile
import unittest
from unittest import mock

from engine import config
from engine.config import Scenario
from engine.errors import ConfigParseError, ValidationError
from engine.power import ResistanceReference, Strategy
from engine.spin import Species


class LoadsTestCase(unittest.TestCase):
    def test_empty_file_is_default(self):
        self.assertEqual(config.loads(""), Scenario())

    def test_bundled_file_is_default(self):
        self.assertEqual(config.load_scenario(), Scenario())

    def test_bare_keys(self):
        scn = config.loads("bias_field_parallel = 4000\nR_on = 0.5\n")
        self.assertEqual(scn.bias_field_parallel, 4000.0)
        self.assertEqual(scn.power.network.R_on, 0.5)

    def test_sections_and_enums(self):
        scn = config.loads("[spin]\nspecies = SnV\neta = 0.5\n\n"
                           "[power]\nstrategy = frequency_compensation  ; inline comment\n")
        self.assertIs(scn.spin.species, Species.SnV)
        self.assertEqual(scn.spin.eta, 0.5)
        self.assertIs(scn.power.strategy, Strategy.frequency_compensation)

    def test_coil_resistance_reaches_network(self):
        scn = config.loads("[coils]\nR_coil = 2.0\n")
        self.assertEqual(scn.power.network.R_coil, 2.0)

    def test_constants_reach_readout(self):
        scn = config.loads("[spin]\nzero_field_splitting_gs = 2.87e9\n")
        self.assertEqual(scn.readout.D_gs, 2.87e9)

    def test_invalid_value_names_key(self):
        with self.assertRaises(ValidationError) as ctx:
            config.loads("[power]\nR_on = -1\n")
        self.assertEqual(ctx.exception.key, 'R_on')

    def test_unreadable_value(self):
        with self.assertRaises(ValidationError) as ctx:
            config.loads("[budget]\nn_components_op = 2.5\n")
        self.assertEqual(ctx.exception.key, 'n_components_op')

    def test_non_finite_values(self):
        for text in ("[power]\nR_on = inf\n", "[power]\nR_on = nan\n", "[power]\nN_cells = 1e400\n"):
            with self.assertRaises(ValidationError, msg=text) as ctx:
                config.loads(text)
            self.assertIn(ctx.exception.key, ('R_on', 'N_cells'))

    def test_room_temperature_resistances(self):
        scn = config.loads("[power]\nresistances = room\nR_on = 0.5\n")
        self.assertIs(scn.power.resistances, ResistanceReference.room)
        self.assertEqual(scn.power.network_at_4k().R_on, 0.25)

    def test_unknown_key(self):
        with self.assertRaises(ValidationError) as ctx:
            config.loads("[power]\nR_bogus = 1\n")
        self.assertEqual(ctx.exception.key, 'R_bogus')
        with self.assertRaises(ValidationError):
            config.loads("R_bogus = 1\n")

    def test_unknown_section(self):
        with self.assertRaises(ValidationError) as ctx:
            config.loads("[optics]\nNA = 0.9\n")
        self.assertEqual(ctx.exception.key, 'optics')

    def test_parse_error_line(self):
        with self.assertRaises(ConfigParseError) as ctx:
            config.loads("bias_field_parallel = 2000\nthis line has no value\n", path='bad.cfg')
        self.assertEqual(ctx.exception.lineno, 2)
        self.assertEqual(ctx.exception.path, 'bad.cfg')

    def test_bias_range(self):
        with self.assertRaises(ValidationError) as ctx:
            config.loads("bias_field_parallel = 25000\n")
        self.assertEqual(ctx.exception.key, 'bias_field_parallel')

    def test_unusual_bias_warns(self):
        with self.assertLogs('engine.config', level='WARNING'):
            scn = config.loads("bias_field_parallel = 15000\n")
        self.assertEqual(scn.bias_field_parallel, 15000.0)

    def test_seed(self):
        self.assertEqual(config.loads("seed = 7\n").seed, 7)
        with self.assertRaises(ValidationError):
            Scenario(seed=-1)


class SerializeTestCase(unittest.TestCase):
    def setUp(self):
        self.scn = config.loads("[spin]\nspecies = SnV\neta = 0.5\n[power]\nN_cells = 400\n"
                                "delta_B = 3.3\nresistances = room\n[budget]\nseed = 11\n")

    def test_round_trip(self):
        self.assertEqual(config.loads(config.serialize(self.scn)), self.scn)

    def test_deterministic(self):
        self.assertEqual(config.serialize(self.scn), config.serialize(self.scn))
        self.assertEqual(config.serialize(config.loads(config.serialize(self.scn))),
                         config.serialize(self.scn))

    def test_every_key_written(self):
        text = config.serialize(Scenario())
        for section, key in config.REGISTRY:
            self.assertIn("%s = " % key, text)
        self.assertTrue(text.startswith('[spin]\n'))


class OverrideTestCase(unittest.TestCase):
    def setUp(self):
        self.scn = Scenario()

    def test_bare_and_dotted(self):
        scn = config.apply_overrides(self.scn, ['R_on=0.5', 'budget.seed=3'])
        self.assertEqual(scn.power.network.R_on, 0.5)
        self.assertEqual(scn.seed, 3)
        self.assertEqual(self.scn.power.network.R_on, 0.25)

    def test_no_overrides(self):
        self.assertEqual(config.apply_overrides(self.scn, []), self.scn)

    def test_unknown_key(self):
        with self.assertRaises(ValidationError) as ctx:
            config.apply_overrides(self.scn, ['R_bogus=1'])
        self.assertEqual(ctx.exception.key, 'R_bogus')

    def test_malformed(self):
        with self.assertRaises(ValidationError):
            config.apply_overrides(self.scn, ['R_on'])

    def test_infinite_integer(self):
        with self.assertRaises(ValidationError) as ctx:
            config.apply_overrides(self.scn, ['N_cells=inf'])
        self.assertEqual(ctx.exception.key, 'N_cells')


class ResolveTestCase(unittest.TestCase):
    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.path = os.path.join(self.directory, 'bench.cfg')
        with open(self.path, 'w') as handle:
            handle.write("[power]\nN_cells = 10000\n")

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_direct_path(self):
        self.assertEqual(config.load_scenario(self.path).power.network.N_cells, 10000)

    def test_config_dir(self):
        with mock.patch.dict(os.environ, {config.CONFIG_DIR_ENV: self.directory}):
            self.assertEqual(config.resolve_scenario_path('bench.cfg'), self.path)

    def test_bundled_name(self):
        self.assertEqual(config.resolve_scenario_path('nv2000.cfg'),
                         os.path.join(config.DATA_DIR, 'nv2000.cfg'))

    def test_missing(self):
        with mock.patch.dict(os.environ, {config.CONFIG_DIR_ENV: self.directory}):
            with self.assertRaises(ValidationError) as ctx:
                config.resolve_scenario_path('nowhere.cfg')
        self.assertEqual(ctx.exception.key, 'scenario')
