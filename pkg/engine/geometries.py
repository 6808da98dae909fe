"""
This module stores the stock coil geometries of a unit cell: the planar x-,
y- and z-coils under the qubit, the LO wire passing by it, and the
parameterized families swept by the `coil` command.

The qubit sits at the origin; the chip surface is below it (negative z).
Every trace is drawn as `filaments_per_trace` parallel filaments sharing
the current equally.
"""
import math
from dataclasses import replace

import numpy as np

from engine.magnetics import CircularLoop, CoilGeometry


def _filament_offsets(width, count):
    return [(k - (count - 1) / 2.0) * width / count for k in range(count)]


def _rectangle(x_near, x_far, half_length, z):
    """Closed rectangle whose near leg at x_near carries current along +y."""
    return [(x_near, -half_length, z), (x_near, half_length, z), (x_far, half_length, z),
            (x_far, -half_length, z), (x_near, -half_length, z)]


def x_coil(coils, standoff=None, name='x-coil'):
    """
    Concentric rectangular turns whose near legs run along y right under
    the qubit, so the qubit sees a field along x.

    Arguments:
        coils : CoilSet with the x_* stack dimensions
        standoff : depth of the metal below the qubit, defaults to x_standoff

    Returns:
        a CoilGeometry
    """
    standoff = coils.x_standoff if standoff is None else standoff
    n = coils.filaments_per_trace
    geometry = CoilGeometry(trace_width=coils.x_width, name=name)
    for turn in range(coils.x_turns):
        x_near = -coils.x_pitch * (coils.x_turns - 1) / 2.0 + turn * coils.x_pitch
        x_far = x_near - coils.x_span - 2 * turn * coils.x_pitch
        half_length = coils.x_length / 2 + turn * coils.x_pitch
        for offset in _filament_offsets(coils.x_width, n):
            turn_path = CoilGeometry.from_polyline(
                _rectangle(x_near + offset, x_far - offset, half_length + offset, -standoff),
                weight=1.0 / n)
            geometry = geometry.combined(turn_path)
        geometry.trace_length += 2 * (2 * half_length + (x_near - x_far))
    return geometry


def y_coil(coils):
    """The x-coil pattern turned by 90 degrees on the lower metal."""
    return x_coil(coils, standoff=coils.y_standoff, name='y-coil').rotated_z(math.pi / 2)


def z_coil(coils, radius=None, width=None, turns=None, pitch=None, layers=None):
    """
    Planar concentric rings under the qubit giving a field along z.

    Arguments:
        coils : CoilSet with the z_* stack dimensions
        radius : inner radius of the innermost turn
        width : line width
        turns : rings per layer, each `pitch` further out
        layers : identical ring sets stacked z_layer_pitch apart, away
                 from the qubit

    Returns:
        a CoilGeometry
    """
    radius = coils.z_radius if radius is None else radius
    width = coils.z_width if width is None else width
    turns = coils.z_turns if turns is None else turns
    pitch = coils.z_pitch if pitch is None else pitch
    layers = coils.z_layers if layers is None else layers
    n = coils.filaments_per_trace
    loops, length = [], 0.0
    for layer in range(layers):
        z = -coils.z_standoff - layer * coils.z_layer_pitch
        for turn in range(turns):
            inner = radius + turn * pitch
            for k in range(n):
                loops.append(CircularLoop((0.0, 0.0, z), inner + (k + 0.5) * width / n,
                                          weight=1.0 / n))
            length += 2 * math.pi * (inner + width / 2)
    return CoilGeometry.from_loops(loops, trace_width=width, trace_length=length,
                                   name='z-coil')


def lo_wire(coils):
    """A straight LO distribution wire along y, beside and below the qubit."""
    half = coils.lo_wire_length / 2
    x, z = coils.lo_wire_lateral, -coils.lo_wire_height
    return CoilGeometry.from_segments([(x, -half, z)], [(x, half, z)], name='lo-wire',
                                      trace_length=coils.lo_wire_length)


def x_width_family(coils, spacing=1e-6):
    """x-coil versus line width at a fixed gap between turns."""
    return lambda width: x_coil(replace(coils, x_width=width, x_pitch=width + spacing))


def z_width_family(coils):
    """Single-turn z-coil versus line width at the configured inner radius."""
    return lambda width: z_coil(coils, width=width, turns=1)


def z_radius_family(coils):
    """Single-turn z-coil of 2 um line width versus inner radius."""
    return lambda radius: z_coil(coils, radius=radius, width=2e-6, turns=1)


def z_turns_family(coils):
    """Planar z-coil of 2 um lines at 3 um pitch from 10 um inner radius, versus turns."""
    return lambda turns: z_coil(coils, radius=10e-6, width=2e-6, pitch=3e-6, turns=int(turns))


FAMILIES = {
    'x_width': (x_width_family, np.linspace(1e-6, 10e-6, 10)),
    'z_width': (z_width_family, np.linspace(1e-6, 10e-6, 10)),
    'z_radius': (z_radius_family, np.linspace(5e-6, 50e-6, 10)),
    'z_turns': (z_turns_family, np.arange(1, 11)),
}
