"""
Scenario files.

A scenario is an INI file with the sections [spin], [budget], [coils] and
[power]. Every key is optional; absent keys take the defaults of the
dataclass they end up in. Keys written before the first section header
are looked up in the registry, so a one-line file

    bias_field_parallel = 4000

is a valid scenario. Unknown sections and keys are rejected.

The bundled default scenario is engine/data/nv2000.cfg. Scenario names
given on the command line are looked up as a path, then in
$COLORCELL_CONFIG_DIR, then among the bundled files.
"""
import configparser
import logging
import math
import os
from dataclasses import dataclass, field
from operator import attrgetter

from engine.constants import PhysicalConstants
from engine.errors import ConfigParseError, ValidationError
from engine.fidelity import FidelityBudget
from engine.keys import KeyRegistry
from engine.magnetics import CoilSet
from engine.power import (AmplifierConfig, ClockPlan, ElectricalNetwork,
                          PowerScenario, ResistanceReference, Strategy)
from engine.readout import ReadoutModel
from engine.spin import Species, SpinSystem

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = 'COLORCELL_CONFIG_DIR'
DEFAULT_SCENARIO = 'nv2000.cfg'
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')

BIAS_RANGE = (0.0, 20000.0)
BIAS_EXPECTED = (2000.0, 10000.0)

_TOP = '__top__'


@dataclass(frozen=True)
class Scenario(object):
    """Everything one run of colorcell depends on. Immutable once loaded."""
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    spin: SpinSystem = field(default_factory=SpinSystem)
    bias_field_parallel: float = 2000.0
    budget: FidelityBudget = field(default_factory=FidelityBudget)
    coils: CoilSet = field(default_factory=CoilSet)
    power: PowerScenario = field(default_factory=PowerScenario)
    readout: ReadoutModel = field(default_factory=ReadoutModel)
    seed: int = 0

    def __post_init__(self):
        low, high = BIAS_RANGE
        if not low <= self.bias_field_parallel <= high:
            raise ValidationError("bias_field_parallel must lie in [%g, %g] G. Instead, got %s"
                                  % (low, high, repr(self.bias_field_parallel)),
                                  key='bias_field_parallel')
        low, high = BIAS_EXPECTED
        if not low <= self.bias_field_parallel <= high:
            logger.warning("bias_field_parallel = %g G is outside the expected %g-%g G",
                           self.bias_field_parallel, low, high)
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValidationError("seed must be a nonnegative integer. Instead, got %s"
                                  % repr(self.seed), key='seed')


def _real(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number: %r" % text)
    return value


def _integer(text):
    value = _real(text)
    if value != int(value):
        raise ValueError("not an integer: %r" % text)
    return int(value)


# (section, key, attribute path on Scenario, converter)
_FIELDS = [
    ('spin', 'species', 'spin.species', Species),
    ('spin', 'gamma_e', 'constants.gamma_e', _real),
    ('spin', 'gamma_c', 'constants.gamma_c', _real),
    ('spin', 'zero_field_splitting_gs', 'constants.zero_field_splitting_gs', _real),
    ('spin', 'eta', 'spin.eta', _real),
    ('spin', 'hyperfine_par', 'spin.hyperfine_par', _real),
    ('spin', 'hyperfine_perp', 'spin.hyperfine_perp', _real),
    ('spin', 'bias_field_parallel', 'bias_field_parallel', _real),
    ('spin', 'D_es', 'readout.D_es', _real),
    ('spin', 'strain', 'readout.strain', _real),
    ('spin', 'n_cycles', 'readout.n_cycles', _integer),
    ('budget', 'target_fidelity', 'budget.target_fidelity', _real),
    ('budget', 'n_components_op', 'budget.n_components_op', _integer),
    ('budget', 'n_components_idle', 'budget.n_components_idle', _integer),
    ('budget', 'f_rabi_electron', 'budget.f_rabi_electron', _real),
    ('budget', 'f_rabi_carbon', 'budget.f_rabi_carbon', _real),
    ('budget', 'T_op_electron', 'budget.T_op_electron', _real),
    ('budget', 'T_op_carbon', 'budget.T_op_carbon', _real),
    ('budget', 'T_idle', 'budget.T_idle', _real),
    ('budget', 'T_idle_carbon', 'budget.T_idle_carbon', _real),
    ('budget', 'readout_budget', 'budget.readout_budget', _real),
    ('budget', 'nco_infidelity', 'budget.nco_infidelity', _real),
    ('budget', 'crosstalk_budget', 'budget.crosstalk_budget', _real),
    ('budget', 'wideband_bandwidth_factor', 'budget.wideband_bandwidth_factor', _real),
    ('budget', 'mc_samples', 'budget.mc_samples', _integer),
    ('budget', 'seed', 'seed', _integer),
]

_COIL_INTEGERS = ('filaments_per_trace', 'x_turns', 'z_turns', 'z_layers', 'helmholtz_filaments')
_FIELDS += [('coils', name, 'coils.' + name, _integer if name in _COIL_INTEGERS else _real)
            for name in CoilSet.__dataclass_fields__ if name != 'qubit_point']

_FIELDS += [
    ('power', 'R_on', 'power.network.R_on', _real),
    ('power', 'R_IC', 'power.network.R_IC', _real),
    ('power', 'P_cir', 'power.network.P_cir', _real),
    ('power', 'N_cells', 'power.network.N_cells', _integer),
    ('power', 'f_space_LO', 'power.clock.f_space_LO', _real),
    ('power', 'f_comp', 'power.clock.f_comp', _real),
    ('power', 'E_bit', 'power.clock.E_bit', _real),
    ('power', 'activity_factor', 'power.clock.activity_factor', _real),
    ('power', 'n_nco_electron', 'power.clock.n_nco_electron', _integer),
    ('power', 'n_nco_nuclear', 'power.clock.n_nco_nuclear', _integer),
    ('power', 'V_DD', 'power.amplifier.V_DD', _real),
    ('power', 'V_sup', 'power.amplifier.V_sup', _real),
    ('power', 'duty_electron', 'power.amplifier.duty_electron', _real),
    ('power', 'duty_nuclear', 'power.amplifier.duty_nuclear', _real),
    ('power', 'delta_B', 'power.delta_B', _real),
    ('power', 'strategy', 'power.strategy', Strategy),
    ('power', 'power_budget', 'power.power_budget', _real),
    ('power', 'resistances', 'power.resistances', ResistanceReference),
]

REGISTRY = KeyRegistry()
for _section, _key, _, _ in _FIELDS:
    REGISTRY.add(_section, _key)

_BY_KEY = {(section, key): (path, convert) for section, key, path, convert in _FIELDS}


def _convert(section, key, text):
    _, convert = _BY_KEY[(section, key)]
    try:
        return convert(text.strip())
    except (ValueError, OverflowError):
        raise ValidationError("Cannot read %s.%s from %s" % (section, key, repr(text)), key=key)


def _format(value):
    if isinstance(value, (Species, Strategy, ResistanceReference)):
        return value.value
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _build(values):
    """Assemble a Scenario from {(section, key): converted value}."""
    grouped = {}
    for (section, key), value in values.items():
        path, _ = _BY_KEY[(section, key)]
        parts = path.split('.')
        node = grouped
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value

    constants = PhysicalConstants(**grouped.get('constants', {}))
    spin = SpinSystem(constants=constants, **grouped.get('spin', {}))
    readout = ReadoutModel(D_gs=constants.zero_field_splitting_gs, gamma_e=constants.gamma_e,
                           **grouped.get('readout', {}))
    budget = FidelityBudget(**grouped.get('budget', {}))
    coils = CoilSet(**grouped.get('coils', {}))
    power = dict(grouped.get('power', {}))
    network = ElectricalNetwork(R_coil=coils.R_coil, **power.pop('network', {}))
    clock = ClockPlan(**power.pop('clock', {}))
    amplifier = AmplifierConfig(**power.pop('amplifier', {}))
    power = PowerScenario(network=network, clock=clock, amplifier=amplifier, **power)
    scalars = {key: grouped[key] for key in ('bias_field_parallel', 'seed') if key in grouped}
    return Scenario(constants=constants, spin=spin, budget=budget, coils=coils,
                    power=power, readout=readout, **scalars)


def _parse_error(err, path):
    lineno = getattr(err, 'lineno', None)
    if lineno is None and getattr(err, 'errors', None):
        lineno = err.errors[0][0]
    if lineno is not None:
        lineno -= 1
    message = str(err).splitlines()[0]
    return ConfigParseError("Cannot parse scenario: %s" % message, path=path, lineno=lineno)


def loads(text, path=None):
    """
    Parse scenario text.

    Arguments:
        text : INI text
        path : file name used in error messages

    Returns :: Scenario
    """
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=('#', ';'),
                                       inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    try:
        parser.read_string("[%s]\n%s" % (_TOP, text), source=path or '<string>')
    except configparser.Error as err:
        raise _parse_error(err, path)

    values = {}
    for section in parser.sections():
        if section != _TOP and section not in REGISTRY.sections():
            raise ValidationError("Unknown config section %s" % repr(section), key=section)
        for key, text_value in parser.items(section):
            if section == _TOP:
                owner = REGISTRY.get_section(key)
            elif REGISTRY.has_key(key, section):
                owner = section
            else:
                raise ValidationError("Unknown config key %s in section [%s]"
                                      % (repr(key), section), key=key)
            values[(owner, key)] = _convert(owner, key, text_value)
    return _build(values)


def resolve_scenario_path(name=None):
    """Find a scenario file by path, in $COLORCELL_CONFIG_DIR, or among the bundled ones."""
    name = name or DEFAULT_SCENARIO
    candidates = [name]
    if os.environ.get(CONFIG_DIR_ENV):
        candidates.append(os.path.join(os.environ[CONFIG_DIR_ENV], name))
    candidates.append(os.path.join(DATA_DIR, name))
    for candidate in candidates:
        if os.path.isfile(candidate):
            logger.debug("scenario %s resolved to %s", name, candidate)
            return candidate
    raise ValidationError("Scenario %s not found in %s" % (repr(name), ", ".join(candidates)),
                          key='scenario')


def load_scenario(path=None):
    """Load a scenario file; with no argument the bundled nv2000.cfg."""
    path = resolve_scenario_path(path)
    with open(path) as handle:
        return loads(handle.read(), path=path)


def flatten(scn):
    """{(section, key): value} for every registered key, in registry order."""
    return {(section, key): attrgetter(_BY_KEY[(section, key)][0])(scn)
            for section, key in REGISTRY}


def serialize(scn):
    """Write every key of a scenario, one section after another.

    Floats are written with repr, so the text loads back to an equal
    Scenario and serializing twice gives identical bytes.
    """
    values = flatten(scn)
    lines = []
    for section in REGISTRY.sections():
        if lines:
            lines.append('')
        lines.append('[%s]' % section)
        for key in REGISTRY.keys_in(section):
            lines.append('%s = %s' % (key, _format(values[(section, key)])))
    return '\n'.join(lines) + '\n'


def apply_overrides(scn, overrides):
    """
    Return a new Scenario with `key=value` overrides applied.

    Keys are bare (`R_on`) or dotted (`power.R_on`); unknown or ambiguous
    keys raise ValidationError naming the key.
    """
    values = flatten(scn)
    for item in overrides or ():
        if '=' not in item:
            raise ValidationError("Override must look like key=value. Instead, got %s"
                                  % repr(item), key=item)
        name, text = item.split('=', 1)
        section, key = REGISTRY.resolve(name.strip())
        values[(section, key)] = _convert(section, key, text)
        logger.info("override %s.%s = %s", section, key, text.strip())
    return _build(values)
