"""
Readout infidelity from spin mixing.

A transverse field tilts the ground- and excited-state spin eigenbases by
different amounts, so each optical cycle leaks population out of the
readout branch. With per-cycle overlap p_ov the readout fidelity after N
cycles is p_ov^N.

Both manifolds use the same reduced spin-1 Hamiltonian

    H = D Sz^2 + E (Sx^2 - Sy^2) + gamma_e (B_par Sz + B_perp Sx)    [Hz]

on the basis {|+1>, |0>, |-1>}, with the ground-state D_gs or the
excited-state D_es.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from engine.concurrency import parallel_map
from engine.constants import GAMMA_E, ZERO_FIELD_SPLITTING_GS
from engine.errors import (DegenerateLevelError, RangeError, ValidationError,
                           ensure_nonnegative, ensure_open_unit, ensure_positive)

logger = logging.getLogger(__name__)

D_ES = 1.42e9
CONTINUATION_STEPS = 16
DEGENERACY_TOL = 1e3   # Hz
TIE_TOL = 1e-6
BPERP_SEARCH_MAX = 100.0  # G

SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / np.sqrt(2)
SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / np.sqrt(2)
SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
MS0 = np.array([0, 1, 0], dtype=complex)


@dataclass(frozen=True)
class ReadoutModel(object):
    D_gs: float = ZERO_FIELD_SPLITTING_GS
    D_es: float = D_ES
    gamma_e: float = GAMMA_E
    n_cycles: int = 100
    strain: float = 0.0

    def __post_init__(self):
        ensure_positive('D_gs', self.D_gs)
        ensure_positive('D_es', self.D_es)
        ensure_positive('gamma_e', self.gamma_e)
        if int(self.n_cycles) != self.n_cycles or self.n_cycles < 1:
            raise ValidationError("n_cycles must be an integer >= 1. Instead, got %s"
                                  % repr(self.n_cycles), key='n_cycles')


def spin_hamiltonian(D, B_par, B_perp, gamma_e=GAMMA_E, strain=0.0):
    """3x3 Hermitian spin-1 Hamiltonian in Hz."""
    for key, value in (('D', D), ('B_par', B_par), ('B_perp', B_perp)):
        if not np.isfinite(value):
            raise ValidationError("%s must be finite. Instead, got %s" % (key, repr(value)), key=key)
    return (D * SZ @ SZ + strain * (SX @ SX - SY @ SY)
            + gamma_e * (B_par * SZ + B_perp * SX))


def _readout_state(D, B_par, B_perp, gamma_e, strain):
    """Eigenvector continued from |0> at B_perp = 0 to the requested B_perp.

    At every step the eigenvector with the largest overlap on the previous
    one is taken; a near tie means the branch cannot be followed.
    """
    if B_perp == 0:
        return MS0
    gaps = np.abs(np.array([D + gamma_e * B_par, D - gamma_e * B_par]))
    if np.min(gaps) < DEGENERACY_TOL:
        raise DegenerateLevelError("ms=0 is degenerate with ms=%+d at B_par = %.6g G"
                                   % (1 if np.argmin(gaps) == 0 else -1, B_par), field=B_par)
    previous = MS0
    for b in np.linspace(0.0, B_perp, CONTINUATION_STEPS + 1)[1:]:
        _, vectors = np.linalg.eigh(spin_hamiltonian(D, B_par, b, gamma_e, strain))
        overlaps = np.abs(vectors.conj().T @ previous) ** 2
        order = np.argsort(overlaps)[::-1]
        if overlaps[order[0]] - overlaps[order[1]] < TIE_TOL:
            raise DegenerateLevelError("cannot follow the readout level at B_par = %.6g G, "
                                       "B_perp = %.6g G" % (B_par, b), field=b)
        previous = vectors[:, order[0]]
    return previous


def overlap_probability(m, B_par, B_perp):
    """|<gs|es>|^2 of the readout branch; 1 when B_perp = 0."""
    gs = _readout_state(m.D_gs, B_par, abs(B_perp), m.gamma_e, m.strain)
    es = _readout_state(m.D_es, B_par, abs(B_perp), m.gamma_e, m.strain)
    return float(np.clip(abs(np.vdot(gs, es)) ** 2, 0.0, 1.0))


def infidelity_from_overlap(p_ov, n_cycles):
    """1 - p_ov^N without losing digits when p_ov is close to 1."""
    if not 0 <= p_ov <= 1:
        raise ValidationError("p_ov must lie in [0, 1]. Instead, got %s" % repr(p_ov), key='p_ov')
    if p_ov == 0:
        return 1.0
    return float(-np.expm1(n_cycles * np.log(p_ov)))


def readout_infidelity(m, B_par, B_perp):
    """1 - p_ov^N for the model's N optical cycles."""
    return infidelity_from_overlap(overlap_probability(m, B_par, B_perp), m.n_cycles)


def bperp_limit(m, budget, B_par, upper=BPERP_SEARCH_MAX):
    """Largest transverse field (gauss) keeping readout infidelity within budget.

    Raises RangeError when even `upper` gauss stays inside the budget.
    """
    ensure_open_unit('budget', budget)
    ensure_nonnegative('B_par', B_par)
    logger.info("readout limit at B_par=%g G uses the reduced spin-1 excited-state model "
                "(D_es=%g Hz); treat it as an order-of-magnitude figure", B_par, m.D_es)

    def excess(b):
        return readout_infidelity(m, B_par, b) - budget

    if excess(upper) < 0:
        raise RangeError("readout budget %g is not reached below %g G at B_par = %g G"
                         % (budget, upper, B_par), key='readout_budget')
    return optimize.brentq(excess, 0.0, upper, xtol=1e-12, rtol=1e-10)


def readout_curves(m, B_par_values, B_perp_values, workers=1):
    """Rows of (B_par, B_perp, infidelity) over a grid."""
    grid = [(bp, bt) for bp in B_par_values for bt in B_perp_values]
    values = parallel_map(lambda pair: readout_infidelity(m, pair[0], pair[1]), grid, workers)
    return [dict(B_par=float(bp), B_perp=float(bt), infidelity=v)
            for (bp, bt), v in zip(grid, values)]
