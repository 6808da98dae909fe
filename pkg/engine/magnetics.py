"""
Biot-Savart solver for on-chip coils, bias Helmholtz pairs and stray
wires.

Conductors are straight segments (exact finite-segment kernel) or circular
loops (regular polygons, refined once and Richardson-extrapolated).
Coordinates are in meters, currents in amperes, fields in gauss.
"""
import csv
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import mu_0 as MU0
from scipy.special import ellipe, ellipk

from engine.concurrency import parallel_map
from engine.constants import GAUSS_PER_TESLA
from engine.errors import (DiscretizationError, SingularityError,
                           ValidationError, ensure_nonnegative, ensure_positive)

logger = logging.getLogger(__name__)

CLOSURE_TOL = 1e-9
SINGULAR_DISTANCE = 1e-12
LOOP_SEGMENTS = 360
LOOP_RTOL = 1e-3
AXES = {'x': 0, 'y': 1, 'z': 2}


@dataclass(frozen=True)
class CircularLoop(object):
    """A circular filament; current flows counterclockwise seen from +axis."""
    center: tuple
    radius: float
    axis: tuple = (0.0, 0.0, 1.0)
    weight: float = 1.0

    def __post_init__(self):
        ensure_positive('radius', self.radius)
        if not np.all(np.isfinite(self.center)) or np.linalg.norm(self.axis) == 0:
            raise ValidationError("loop center must be finite and axis nonzero", key='axis')

    def polygon(self, n_segments):
        """Vertices of the inscribed regular polygon, closed."""
        axis = np.asarray(self.axis, dtype=float)
        axis = axis / np.linalg.norm(axis)
        helper = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        u = np.cross(axis, helper)
        u /= np.linalg.norm(u)
        v = np.cross(axis, u)
        theta = np.linspace(0.0, 2 * math.pi, n_segments + 1)
        theta[-1] = 0.0
        return (np.asarray(self.center, dtype=float)
                + self.radius * (np.outer(np.cos(theta), u) + np.outer(np.sin(theta), v)))


class CoilGeometry(object):
    """Conductor paths of one coil plus the trace metadata for its resistance.

    Build with from_polyline / from_segments / from_loops and compose with
    combined() or rotated_z(). Each segment or loop carries a weight, the
    fraction of the terminal current it conducts.
    """
    def __init__(self, segments=None, weights=None, loops=(), trace_width=None,
                 trace_length=0.0, name='coil'):
        segments = np.zeros((0, 2, 3)) if segments is None else np.asarray(segments, dtype=float)
        if segments.ndim != 3 or segments.shape[1:] != (2, 3):
            raise ValidationError("segments must have shape (n, 2, 3). Instead, got %s"
                                  % (segments.shape,), key='segments')
        if not np.all(np.isfinite(segments)):
            raise ValidationError("segment coordinates must be finite", key='segments')
        self.segments = segments
        self.weights = (np.ones(len(segments)) if weights is None
                        else np.asarray(weights, dtype=float))
        self.loops = tuple(loops)
        self.trace_width = trace_width
        self.trace_length = trace_length
        self.name = name

    @classmethod
    def from_polyline(cls, points, weight=1.0, closed=True, **metadata):
        """One turn through the given vertices.

        A closed turn must end where it starts (within CLOSURE_TOL).
        """
        points = np.asarray(points, dtype=float)
        if closed and np.linalg.norm(points[-1] - points[0]) > CLOSURE_TOL:
            raise ValidationError("turn %s is not closed: gap %.3g m"
                                  % (metadata.get('name', ''), np.linalg.norm(points[-1] - points[0])),
                                  key='segments')
        segments = np.stack([points[:-1], points[1:]], axis=1)
        return cls(segments, np.full(len(segments), weight), **metadata)

    @classmethod
    def from_segments(cls, starts, ends, weights=None, **metadata):
        return cls(np.stack([np.asarray(starts, float), np.asarray(ends, float)], axis=1),
                   weights, **metadata)

    @classmethod
    def from_loops(cls, loops, **metadata):
        return cls(loops=loops, **metadata)

    def combined(self, other):
        """Return a new geometry carrying both sets of conductors in series."""
        return CoilGeometry(np.concatenate([self.segments, other.segments]),
                            np.concatenate([self.weights, other.weights]),
                            self.loops + other.loops,
                            trace_width=self.trace_width or other.trace_width,
                            trace_length=self.trace_length + other.trace_length,
                            name=self.name)

    def rotated_z(self, angle):
        """Return this geometry rotated about the z axis by angle (rad)."""
        c, s = math.cos(angle), math.sin(angle)
        rotation = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        loops = [CircularLoop(tuple(rotation @ np.asarray(l.center, float)), l.radius,
                              tuple(rotation @ np.asarray(l.axis, float)), l.weight)
                 for l in self.loops]
        return CoilGeometry(self.segments @ rotation.T, self.weights, loops, self.trace_width,
                            self.trace_length, self.name)

    def __repr__(self):
        return "CoilGeometry(%s: %d segments, %d loops)" % (self.name, len(self.segments),
                                                            len(self.loops))


def load_segments_csv(path, trace_width=None, name=None):
    """Read a segment list with columns x0,y0,z0,x1,y1,z1[,weight] (meters).

    The trace length for coil_resistance is the summed segment length.
    """
    starts, ends, weights = [], [], []
    try:
        with open(path, newline='') as handle:
            rows = list(csv.DictReader(handle))
    except OSError as exc:
        raise ValidationError("cannot read segments from %s: %s" % (path, exc), key='segments')
    for row in rows:
        try:
            starts.append([float(row[k]) for k in ('x0', 'y0', 'z0')])
            ends.append([float(row[k]) for k in ('x1', 'y1', 'z1')])
            weights.append(float(row.get('weight') or 1.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("bad segment row in %s: %s" % (path, exc), key='segments')
    if not starts:
        raise ValidationError("no segments in %s" % path, key='segments')
    length = float(np.sum(np.linalg.norm(np.asarray(ends) - np.asarray(starts), axis=1)))
    return CoilGeometry.from_segments(starts, ends, weights, trace_width=trace_width,
                                      trace_length=length, name=name or path)


def _point_segment_distance(points, a, b):
    ab = b - a
    length_sq = np.einsum('...i,...i->...', ab, ab)
    t = np.clip(np.einsum('...i,...i->...', points - a, ab) / np.where(length_sq > 0, length_sq, 1),
                0.0, 1.0)
    closest = a + t[..., np.newaxis] * ab
    return np.linalg.norm(points - closest, axis=-1)


def _segment_field(points, segments, weights):
    """Tesla per ampere at points (m, 3) from straight segments (n, 2, 3)."""
    if len(segments) == 0:
        return np.zeros(points.shape)
    p = points[:, np.newaxis, :]
    a, b = segments[np.newaxis, :, 0, :], segments[np.newaxis, :, 1, :]
    distance = _point_segment_distance(p, a, b)
    if np.any(distance < SINGULAR_DISTANCE):
        bad = points[np.nonzero(np.any(distance < SINGULAR_DISTANCE, axis=1))[0][0]]
        raise SingularityError("field point %s lies on a conductor" % (tuple(bad),), key='point')
    r1 = p - a
    r2 = p - b
    n1 = np.linalg.norm(r1, axis=-1)
    n2 = np.linalg.norm(r2, axis=-1)
    denominator = n1 * n2 * (n1 * n2 + np.einsum('...i,...i->...', r1, r2))
    factor = MU0 / (4 * math.pi) * weights * (n1 + n2) / denominator
    return np.einsum('mn,mni->mi', factor, np.cross(r1, r2))


def _polygon_field(points, loop, n_segments):
    vertices = loop.polygon(n_segments)
    segments = np.stack([vertices[:-1], vertices[1:]], axis=1)
    return _segment_field(points, segments, np.full(n_segments, loop.weight))


def _loop_field(points, loop, n_segments=LOOP_SEGMENTS):
    """Richardson extrapolation over polygons of n and 2n sides."""
    coarse = _polygon_field(points, loop, n_segments)
    fine = _polygon_field(points, loop, 2 * n_segments)
    scale = np.maximum(np.linalg.norm(fine, axis=-1), 1e-30)
    change = np.max(np.linalg.norm(fine - coarse, axis=-1) / scale)
    if change > LOOP_RTOL:
        raise DiscretizationError("loop of radius %g m still moves by %.2g when refined; "
                                  "increase the segment count" % (loop.radius, change),
                                  estimate=change)
    return (4 * fine - coarse) / 3


def field_at_points(g, I, points, loop_segments=LOOP_SEGMENTS):
    """Field (gauss) of coil g carrying I at each of points (m, 3)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    total = _segment_field(points, g.segments, g.weights)
    for loop in g.loops:
        total = total + _loop_field(points, loop, loop_segments)
    return total * I * GAUSS_PER_TESLA


def field_at_point(g, I, p, loop_segments=LOOP_SEGMENTS):
    """Field vector (gauss) of coil g carrying I amperes at point p."""
    return field_at_points(g, I, [p], loop_segments)[0]


def coupling(g, p, axis):
    """|B_axis| per ampere at p, in G/A."""
    index = AXES[axis] if isinstance(axis, str) else int(axis)
    return float(abs(field_at_point(g, 1.0, p)[index]))


def coupling_vector(g, p):
    return tuple(float(v) for v in np.abs(field_at_point(g, 1.0, p)))


def coil_resistance(g, sheet_resistance_rt, cryo_factor=4.0):
    """Trace resistance at 4 K: length/width squares of sheet resistance, improved cryo_factor times."""
    ensure_positive('sheet_resistance', sheet_resistance_rt)
    ensure_positive('cryo_factor', cryo_factor)
    if not g.trace_width:
        raise ValidationError("geometry %s has no trace width" % g.name, key='trace_width')
    return g.trace_length / g.trace_width * sheet_resistance_rt / cryo_factor


@dataclass(frozen=True)
class CouplingRow(object):
    param: float
    k_x: float
    k_y: float
    k_z: float
    R_coil: float


def sweep_coupling(family, grid, point=(0.0, 0.0, 0.0), sheet_resistance_rt=0.01,
                   cryo_factor=4.0, workers=1):
    """Couplings and resistance of a geometry family over a parameter grid.

    Arguments:
        family : callable param -> CoilGeometry
        grid : nonempty sequence of parameter values

    Returns :: list of CouplingRow in grid order
    """
    grid = list(grid)
    if not grid:
        raise ValidationError("sweep grid is empty", key='grid')

    def evaluate(value):
        g = family(value)
        k_x, k_y, k_z = coupling_vector(g, point)
        return CouplingRow(float(value), k_x, k_y, k_z,
                           coil_resistance(g, sheet_resistance_rt, cryo_factor))
    return parallel_map(evaluate, grid, workers)


def crosstalk_beta(wire, victim_point, k_local, I_wire, I_local):
    """Ratio of the transverse field leaking from a wire to the local drive.

    Only the x/y components rotate the victim; the z part of the leak merely
    shifts its Larmor frequency.
    """
    ensure_nonnegative('I_wire', I_wire)
    ensure_positive('k_local', k_local)
    ensure_positive('I_local', I_local)
    leak = field_at_point(wire, I_wire, victim_point)
    return float(math.hypot(leak[0], leak[1]) / (k_local * I_local))


# Helmholtz bias coils

def loop_field_axisymmetric(radius, z0, current, rho, z):
    """(B_rho, B_z) in gauss of a circular filament on the z axis at height z0.

    Closed form in complete elliptic integrals; exact everywhere off the wire.
    """
    rho = np.asarray(rho, dtype=float)
    dz = np.asarray(z, dtype=float) - z0
    outer_sq = dz ** 2 + (radius + rho) ** 2
    k2 = 4 * radius * rho / outer_sq
    inner_sq = dz ** 2 + (rho - radius) ** 2
    if np.any(inner_sq < SINGULAR_DISTANCE ** 2):
        raise SingularityError("field point lies on a Helmholtz filament", key='point')
    E, K = ellipe(k2), ellipk(k2)
    root = np.sqrt(outer_sq)
    b_z = MU0 * current / (2 * math.pi * root) * ((radius ** 2 - dz ** 2 - rho ** 2) / inner_sq * E + K)
    safe_rho = np.where(rho > 0, rho, 1.0)
    b_rho = np.where(rho > 0,
                     MU0 * current * dz / (2 * math.pi * safe_rho * root)
                     * ((radius ** 2 + dz ** 2 + rho ** 2) / inner_sq * E - K),
                     0.0)
    return b_rho * GAUSS_PER_TESLA, b_z * GAUSS_PER_TESLA


def _filaments(radius, spacing, cross_section, n):
    width, height = cross_section
    if width == 0 and height == 0:
        return [(radius, spacing / 2)], 1
    radii = radius + (np.arange(n) + 0.5) * width / n
    heights = spacing / 2 + (np.arange(n) + 0.5) * height / n
    return [(r, h) for r in radii for h in heights], n * n


def helmholtz_pair_field(radius, spacing, cross_section, current, points, filaments=20):
    """Field (gauss) of a coaxial coil pair about z = 0.

    Arguments:
        radius : inner winding radius, m
        spacing : gap between the inner winding faces, m
        cross_section : (radial width, axial height) of each winding, m;
                        (0, 0) gives a filamentary pair
        current : ampere-turns per coil
        points : array (m, 3)
        filaments : filaments per side of the winding cross-section
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rho = np.hypot(points[:, 0], points[:, 1])
    fils, count = _filaments(radius, spacing, cross_section, filaments)
    b_rho = np.zeros(len(points))
    b_z = np.zeros(len(points))
    for r, h in fils:
        for z0 in (h, -h):
            br, bz = loop_field_axisymmetric(r, z0, current / count, rho, points[:, 2])
            b_rho += br
            b_z += bz
    safe = np.where(rho > 0, rho, 1.0)
    b_x = np.where(rho > 0, b_rho * points[:, 0] / safe, 0.0)
    b_y = np.where(rho > 0, b_rho * points[:, 1] / safe, 0.0)
    return np.stack([b_x, b_y, b_z], axis=1)


@dataclass(frozen=True)
class Box(object):
    """Axis-aligned region centred on the origin, sampled on a regular grid."""
    half_x: float
    half_y: float
    half_z: float = 0.0
    n: int = 11

    def points(self):
        axes = [np.linspace(-h, h, self.n) if h > 0 else np.zeros(1)
                for h in (self.half_x, self.half_y, self.half_z)]
        grid = np.meshgrid(*axes, indexing='ij')
        return np.stack([a.ravel() for a in grid], axis=1)


@dataclass(frozen=True)
class HelmholtzResult(object):
    B_center: float
    delta_B: float
    current: float
    filaments: int = 0


def helmholtz_inhomogeneity(radius, spacing, cross_section, B_center_target, region,
                            filaments=20, rtol=0.02):
    """Bias-field inhomogeneity of a Helmholtz pair over a region.

    The current is scaled so that the centre field equals B_center_target;
    delta_B is the largest |B - B_center| on the region grid. The winding
    cross-section is refined from filaments to 2*filaments per side and the
    two answers must agree to rtol.

    Returns :: HelmholtzResult
    """
    ensure_positive('radius', radius)
    ensure_positive('spacing', spacing)
    ensure_positive('B_center_target', B_center_target)
    for key, value in zip(('width', 'height'), cross_section):
        ensure_nonnegative(key, value)
    if math.hypot(region.half_x, region.half_y) >= radius or region.half_z >= spacing / 2:
        raise ValidationError("region %r is not strictly inside the coil pair" % (region,),
                              key='region')
    if filaments < 20:
        raise ValidationError("filaments must be at least 20. Instead, got %r" % filaments,
                              key='filaments')
    points = region.points()
    center = np.zeros((1, 3))

    def solve(n):
        per_amp = helmholtz_pair_field(radius, spacing, cross_section, 1.0, center, n)[0, 2]
        current = B_center_target / per_amp
        fields = helmholtz_pair_field(radius, spacing, cross_section, current, points, n)
        center_field = np.array([0.0, 0.0, B_center_target])
        return float(np.max(np.linalg.norm(fields - center_field, axis=1))), current

    delta, current = solve(filaments)
    if cross_section[0] > 0 or cross_section[1] > 0:
        refined, current = solve(2 * filaments)
        change = abs(refined - delta)
        logger.debug("helmholtz delta_B %.6g G -> %.6g G at %d filaments", delta, refined,
                     2 * filaments)
        if change > rtol * abs(refined) + 1e-9 * B_center_target:
            raise DiscretizationError("delta_B moved by %.3g G between %d and %d filaments; "
                                      "increase filaments" % (change, filaments, 2 * filaments),
                                      estimate=change)
        delta, filaments = refined, 2 * filaments
    return HelmholtzResult(B_center=B_center_target, delta_B=delta, current=current,
                           filaments=filaments)


@dataclass(frozen=True)
class CoilSet(object):
    """Couplings and resistance used by the power model, plus the metal-stack
    dimensions the coil geometries are built from (meters).

    k_x/k_y/k_z (G/A) and R_coil (ohm at 4 K) are configured values; the
    `coil` command recomputes them from the geometry for comparison.
    """
    k_x: float = 290.0
    k_y: float = 200.0
    k_z: float = 706.0
    R_coil: float = 1.0
    qubit_point: tuple = (0.0, 0.0, 0.0)
    filaments_per_trace: int = 3
    sheet_resistance: float = 0.01
    cryo_factor: float = 4.0
    x_turns: int = 2
    x_pitch: float = 3e-6
    x_width: float = 2e-6
    x_length: float = 200e-6
    x_span: float = 100e-6
    x_standoff: float = 15e-6
    y_standoff: float = 17e-6
    z_turns: int = 1
    z_radius: float = 8e-6
    z_width: float = 2e-6
    z_pitch: float = 3e-6
    z_standoff: float = 1e-6
    z_layers: int = 1
    z_layer_pitch: float = 0.5e-6
    helmholtz_radius: float = 0.05
    helmholtz_spacing: float = 0.04
    helmholtz_width: float = 0.05
    helmholtz_height: float = 0.05
    helmholtz_filaments: int = 20
    chip_size: float = 0.01
    lo_wire_lateral: float = 500e-6
    lo_wire_height: float = 15e-6
    lo_wire_length: float = 10e-3
    lo_wire_current: float = 0.02
    local_drive_current: float = 8.3e-3

    def __post_init__(self):
        for key in ('k_x', 'k_y', 'k_z'):
            ensure_nonnegative(key, getattr(self, key))
        for key in ('R_coil', 'sheet_resistance', 'cryo_factor', 'x_pitch', 'x_width',
                    'x_length', 'x_span', 'x_standoff', 'y_standoff', 'z_radius', 'z_width',
                    'z_pitch', 'z_standoff', 'z_layer_pitch', 'helmholtz_radius',
                    'helmholtz_spacing', 'chip_size', 'lo_wire_length', 'local_drive_current'):
            ensure_positive(key, getattr(self, key))
        for key in ('helmholtz_width', 'helmholtz_height', 'lo_wire_lateral',
                    'lo_wire_height', 'lo_wire_current'):
            ensure_nonnegative(key, getattr(self, key))
        for key in ('filaments_per_trace', 'x_turns', 'z_turns', 'z_layers',
                    'helmholtz_filaments'):
            if int(getattr(self, key)) != getattr(self, key) or getattr(self, key) < 1:
                raise ValidationError("%s must be a positive integer. Instead, got %s"
                                      % (key, repr(getattr(self, key))), key=key)
