"""
Regenerate every CSV of a scenario into one directory.

    python make_artifacts.py [outdir] [--scenario FILE] [--seed N]
"""
import argparse
import logging
import os
import sys

from engine import cli

logger = logging.getLogger(__name__)

# (file name, command, extra arguments)
ARTIFACTS = [
    ('spec_sheet.csv', 'spec', []),
    ('noise_spectrum.csv', 'noise', []),
    ('coils.csv', 'coil', []),
    ('coil_z_radius.csv', 'coil', ['--family', 'z_radius']),
    ('coil_z_turns.csv', 'coil', ['--family', 'z_turns']),
    ('coil_x_width.csv', 'coil', ['--family', 'x_width']),
    ('helmholtz.csv', 'helmholtz', []),
    ('readout.csv', 'readout', []),
    ('crosstalk.csv', 'crosstalk', []),
    ('power.csv', 'power', []),
    ('power_sweep.csv', 'sweep', []),
    ('validation.csv', 'validate', []),
]


def make_artifacts(outdir, scenario=None, seed=None, workers=1):
    """Run every command into outdir; returns the worst exit code."""
    os.makedirs(outdir, exist_ok=True)
    common = ['--workers', str(workers)]
    if scenario:
        common += ['--scenario', scenario]
    if seed is not None:
        common += ['--seed', str(seed)]
    worst = cli.EXIT_OK
    for name, command, extra in ARTIFACTS:
        code = cli.main([command, '--out', os.path.join(outdir, name)] + common + extra)
        if code != cli.EXIT_OK:
            logger.warning("%s exited with %d", command, code)
        worst = max(worst, code)
    return worst


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description=__doc__.strip().splitlines()[0])
    parser.add_argument('outdir', nargs='?', default='artifacts')
    parser.add_argument('--scenario')
    parser.add_argument('--seed', type=int)
    parser.add_argument('--workers', type=int, default=1)
    args = parser.parse_args()
    sys.exit(make_artifacts(args.outdir, args.scenario, args.seed, args.workers))
