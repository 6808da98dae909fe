"""
colorcell command line.

    colorcell spec --scenario nv2000.cfg --out table1.csv
    colorcell power --override N_cells=10000
    colorcell validate --seed 7 --format table

Every command loads a scenario, applies --seed and --override, computes
one artifact and writes it as CSV (or an aligned table) to --out or to
stdout. Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
import argparse
import csv
import io
import logging
import math
import sys

import numpy as np

from engine import (fidelity, geometries, magnetics, noise, power, readout,
                    spec_sheet, validation)
from engine.config import apply_overrides, load_scenario
from engine.errors import ColorcellError, NonConvergenceError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NONCONVERGENCE = 2

POWER_COLUMNS = ('delta_B', 'N', 'strategy', 'p_dc', 'p_nco', 'p_amp_e', 'p_amp_n', 'p_total')
READOUT_B_PAR = (45.0, 400.0, 2000.0, 4000.0)


def format_value(value, precision='%.9e'):
    if isinstance(value, bool) or value is None:
        return '' if value is None else str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return precision % value
    return str(value)


def write_csv(rows, columns, handle):
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])


def write_table(rows, columns, handle):
    cells = [list(columns)] + [[format_value(row[c], '%.6g') for c in columns] for row in rows]
    widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
    for line in cells:
        handle.write('  '.join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip() + '\n')


def _power_row(delta_B, N, breakdown):
    return dict(delta_B=delta_B, N=N, strategy=breakdown.strategy.value, p_dc=breakdown.p_dc,
                p_nco=breakdown.p_nco_total, p_amp_e=breakdown.p_amp_electron,
                p_amp_n=breakdown.p_amp_nuclear, p_total=breakdown.p_total)


# Commands. Each returns (rows, columns, summary lines).

def cmd_spec(scn, args):
    sheet = spec_sheet.build_spec_sheet(scn, workers=args.workers)
    failed = [row.name for row, _, ok in sheet.verify() if not ok]
    summary = ["%d requirement rows at %g G" % (len(sheet), scn.bias_field_parallel),
               "round trip: %s" % ("all rows reproduce their share" if not failed
                                   else "failed for " + ", ".join(failed))]
    return sheet.as_rows(), spec_sheet.COLUMNS, summary


def cmd_noise(scn, args):
    T = scn.budget.T_op_electron
    model = noise.OrnsteinUhlenbeckNoise(args.t2_star, args.tau_c)
    f = noise.FilterFunction(args.axis, T, args.omega0)
    upper = max(1e3 / T, 10 * args.omega0)
    omegas = np.logspace(math.log10(1e-2 / T), math.log10(upper), args.points)
    rows = noise.noise_spectrum(model, f, omegas)
    value = noise.infidelity_from_noise(model, f)
    return rows, ('omega', 'psd', 'filter_sq', 'integrand'), [
        "%r over %r: infidelity %.4g" % (model, f, value)]


def cmd_coil(scn, args):
    coils = scn.coils
    point = coils.qubit_point
    if args.segments:
        width = args.trace_width or coils.x_width
        builds = [lambda c: magnetics.load_segments_csv(args.segments, width)]
    else:
        builds = [geometries.x_coil, geometries.y_coil, geometries.z_coil]
    if args.segments or args.family == 'default':
        rows = []
        for build in builds:
            g = build(coils)
            k_x, k_y, k_z = magnetics.coupling_vector(g, point)
            rows.append(dict(param=g.name, k_x=k_x, k_y=k_y, k_z=k_z,
                             R_coil=magnetics.coil_resistance(g, coils.sheet_resistance,
                                                              coils.cryo_factor)))
        summary = ["%s: k_x=%.4g k_y=%.4g k_z=%.4g G/A" % (r['param'], r['k_x'], r['k_y'], r['k_z'])
                   for r in rows]
    else:
        family, grid = geometries.FAMILIES[args.family]
        found = magnetics.sweep_coupling(family(coils), grid, point, coils.sheet_resistance,
                                         coils.cryo_factor, workers=args.workers)
        rows = [dict(param=r.param, k_x=r.k_x, k_y=r.k_y, k_z=r.k_z, R_coil=r.R_coil)
                for r in found]
        summary = ["%s sweep over %d points" % (args.family, len(rows))]
    return rows, ('param', 'k_x', 'k_y', 'k_z', 'R_coil'), summary


def cmd_helmholtz(scn, args):
    coils = scn.coils
    half = coils.chip_size / 2
    result = magnetics.helmholtz_inhomogeneity(
        coils.helmholtz_radius, coils.helmholtz_spacing,
        (coils.helmholtz_width, coils.helmholtz_height), scn.bias_field_parallel,
        magnetics.Box(half, half), filaments=coils.helmholtz_filaments)
    row = dict(B_center=result.B_center, delta_B=result.delta_B, current=result.current,
               filaments=result.filaments)
    return [row], ('B_center', 'delta_B', 'current', 'filaments'), [
        "inhomogeneity +-%.3g G over %g mm at %g G" % (result.delta_B, coils.chip_size * 1e3,
                                                       result.B_center)]


def cmd_readout(scn, args):
    b_perp = np.linspace(0.0, args.b_perp_max, args.points)
    rows = readout.readout_curves(scn.readout, READOUT_B_PAR, b_perp, workers=args.workers)
    limit = readout.bperp_limit(scn.readout, scn.budget.readout_budget, scn.bias_field_parallel)
    return rows, ('B_par', 'B_perp', 'infidelity'), [
        "allowed transverse field %.3g G at %g G (order-of-magnitude model)"
        % (limit, scn.bias_field_parallel)]


def cmd_crosstalk(scn, args):
    coils, budget = scn.coils, scn.budget
    beta = magnetics.crosstalk_beta(geometries.lo_wire(coils), coils.qubit_point, coils.k_x,
                                    coils.lo_wire_current, coils.local_drive_current)
    f_r = budget.f_rabi_electron
    rows = []
    for f_space in np.linspace(0.0, args.f_space_max, args.points):
        x = fidelity.CrosstalkScenario(float(f_space), f_r, beta * f_r)
        rows.append(dict(f_space=float(f_space), alpha=x.alpha,
                         infidelity=fidelity.infidelity_offresonant_drive(x),
                         envelope=fidelity.offresonant_envelope(x)))
    threshold = fidelity.lo_detuning_threshold(beta, f_r, budget.crosstalk_budget)
    return rows, ('f_space', 'alpha', 'infidelity', 'envelope'), [
        "beta = %.3g; LO spacing above %.3g Hz keeps crosstalk below %g"
        % (beta, threshold, budget.crosstalk_budget)]


def cmd_power(scn, args):
    p = scn.power
    breakdown = power.unit_cell_power(scn, p.delta_B, p.strategy)
    i_e, i_n = power.drive_currents(scn)
    return [_power_row(p.delta_B, p.network.N_cells, breakdown)], POWER_COLUMNS, [
        repr(breakdown),
        "peak drive currents: electron %.3g mA, nuclear %.3g mA" % (i_e * 1e3, i_n * 1e3),
        "%d unit cells fit in %g W" % (power.max_unit_cells(breakdown.p_total, p.power_budget),
                                       p.power_budget)]


def cmd_sweep(scn, args):
    grid = np.linspace(0.0, args.delta_B_max, args.points)
    found = power.tradeoff_sweep(scn, [float(b) for b in grid], args.cells, workers=args.workers)
    rows = [_power_row(r.delta_B, r.N, r.breakdown) for r in found]
    crossings = power.crossover_fields(found)
    return rows, POWER_COLUMNS, ["N=%d: cheaper strategy flips at %s G"
                                 % (n, ", ".join("%.3g" % b for b in crossings[n]) or "no field")
                                 for n in sorted(crossings)]


def cmd_validate(scn, args):
    report = validation.run_suite(scn, workers=args.workers)
    return report.as_rows(), validation.COLUMNS, [
        "%d checks, %d failed" % (len(report.checks), len(report.failures()))]


COMMANDS = {
    'spec': cmd_spec,
    'noise': cmd_noise,
    'coil': cmd_coil,
    'helmholtz': cmd_helmholtz,
    'readout': cmd_readout,
    'crosstalk': cmd_crosstalk,
    'power': cmd_power,
    'sweep': cmd_sweep,
    'validate': cmd_validate,
}


def make_parser():
    parser = argparse.ArgumentParser(
        prog='colorcell',
        description='Electrical specifications and power of color-center qubit controllers')
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--scenario', help='scenario file or bundled name (default nv2000.cfg)')
    common.add_argument('--out', help='output file; stdout when omitted')
    common.add_argument('--seed', type=int, help='overrides the scenario seed')
    common.add_argument('--override', action='append', default=[], metavar='KEY=VALUE',
                        help='set a scenario key; repeatable')
    common.add_argument('--format', choices=('csv', 'table'), default='csv')
    common.add_argument('--workers', type=int, default=1, help='threads for sweeps')
    common.add_argument('-v', '--verbose', action='count', default=0)
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    for name in ('spec', 'helmholtz', 'power', 'validate'):
        commands.add_parser(name, parents=[common])
    sub = commands.add_parser('noise', parents=[common])
    sub.add_argument('--t2-star', type=float, default=math.sqrt(2) / 1e5)
    sub.add_argument('--tau-c', type=float, default=1e-4)
    sub.add_argument('--axis', choices=[a.value for a in noise.FilterAxis], default='parallel_idle')
    sub.add_argument('--omega0', type=float, default=0.0,
                     help='rotating-frame frequency of a transverse filter, rad/s')
    sub.add_argument('--points', type=int, default=200)
    sub = commands.add_parser('coil', parents=[common])
    sub.add_argument('--family', choices=['default'] + sorted(geometries.FAMILIES),
                     default='default')
    sub.add_argument('--segments', help='CSV of segments x0,y0,z0,x1,y1,z1[,weight] in meters')
    sub.add_argument('--trace-width', type=float, help='trace width of --segments, m')
    sub = commands.add_parser('readout', parents=[common])
    sub.add_argument('--b-perp-max', type=float, default=20.0)
    sub.add_argument('--points', type=int, default=41)
    sub = commands.add_parser('crosstalk', parents=[common])
    sub.add_argument('--f-space-max', type=float, default=20e6)
    sub.add_argument('--points', type=int, default=201)
    sub = commands.add_parser('sweep', parents=[common])
    sub.add_argument('--delta-B-max', dest='delta_B_max', type=float, default=15.0)
    sub.add_argument('--points', type=int, default=61)
    sub.add_argument('--cells', type=int, nargs='+', default=[100, 10000])
    return parser


def _configure_logging(verbose):
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')


def _report_error(err):
    message = str(err).replace('\n', ' ')
    sys.stderr.write("error kind=%s key=%s message=%s\n"
                     % (type(err).__name__, err.key if err.key is not None else '-', message))


def run(args):
    """Execute a parsed command line and return the exit code."""
    try:
        scn = load_scenario(args.scenario)
        overrides = list(args.override)
        if args.seed is not None:
            overrides.append('seed=%d' % args.seed)
        scn = apply_overrides(scn, overrides)
        rows, columns, summary = COMMANDS[args.command](scn, args)
    except NonConvergenceError as err:
        _report_error(err)
        return EXIT_NONCONVERGENCE
    except ColorcellError as err:
        _report_error(err)
        return EXIT_INVALID

    buffer = io.StringIO()
    (write_table if args.format == 'table' else write_csv)(rows, columns, buffer)
    if args.out:
        try:
            with open(args.out, 'w', newline='') as handle:
                handle.write(buffer.getvalue())
        except OSError as err:
            _report_error(ValidationError("Cannot write %s: %s" % (args.out, err.strerror or err),
                                          key='out'))
            return EXIT_INVALID
        for line in summary:
            print(line)
        print("wrote %d rows to %s" % (len(rows), args.out))
    else:
        sys.stdout.write(buffer.getvalue())
        for line in summary:
            logger.info(line)
    if args.command == 'validate' and any(row['passed'] != 'pass' for row in rows):
        return EXIT_INVALID
    return EXIT_OK


def main(argv=None):
    args = make_parser().parse_args(argv)
    _configure_logging(args.verbose)
    return run(args)


if __name__ == '__main__':
    sys.exit(main())
