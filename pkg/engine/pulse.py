"""
Brute-force two-level pulse simulator.

A rectangular pulse in the rotating frame has the Hamiltonian

    H = (Omega/2)(cos(phi) sx + sin(phi) sy) + (delta/2) sz     [rad/s]

Each piecewise-constant step is propagated with the exact 2x2 exponential,
so the only approximation is the piecewise-constant noise itself. This
module is the oracle for the closed forms in fidelity.py and the source of
the wideband-noise rows of the spec sheet.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from engine.concurrency import parallel_map
from engine.errors import (NonConvergenceError, StepOverflowError,
                           ValidationError, ensure_nonnegative, ensure_positive)

logger = logging.getLogger(__name__)

MAX_STEPS = 1000000
SAMPLES_PER_BANDWIDTH = 2
UNITARITY_TOL = 1e-9


class Envelope(enum.Enum):
    rectangular = 'rectangular'


class Metric(enum.Enum):
    worst_case = 'worst_case'
    average = 'average'


@dataclass(frozen=True)
class PulseSpec(object):
    """A rectangular drive pulse (Hz, Hz, rad, s)."""
    f_rabi: float
    duration: float
    detuning: float = 0.0
    phase: float = 0.0
    envelope: Envelope = Envelope.rectangular

    def __post_init__(self):
        object.__setattr__(self, 'envelope', Envelope(self.envelope))
        ensure_nonnegative('f_rabi', self.f_rabi)
        ensure_nonnegative('duration', self.duration)

    @classmethod
    def pi_pulse(cls, f_rabi, phase=0.0):
        ensure_positive('f_rabi', f_rabi)
        return cls(f_rabi=f_rabi, duration=1.0 / (2 * f_rabi), phase=phase)


@dataclass(frozen=True)
class ErrorRealization(object):
    """One draw of the gate errors.

    Static offsets shift the pulse parameters. The additive noise is white
    on both rotating-frame quadratures with rms field_rms (gauss) per
    quadrature over bandwidth (Hz); rabi_per_gauss turns gauss into Hz of
    Rabi rate.
    """
    delta_f: float = 0.0
    delta_phase: float = 0.0
    delta_duration: float = 0.0
    rel_amplitude: float = 0.0
    field_rms: float = 0.0
    bandwidth: float = None
    rabi_per_gauss: float = None
    seed: int = 0

    def __post_init__(self):
        ensure_nonnegative('field_rms', self.field_rms)
        if self.field_rms > 0:
            if self.bandwidth is None or not self.bandwidth > 0:
                raise ValidationError("bandwidth must be positive when field_rms > 0. Instead, got %s"
                                      % repr(self.bandwidth), key='bandwidth')
            if self.rabi_per_gauss is None or not self.rabi_per_gauss > 0:
                raise ValidationError("rabi_per_gauss must be positive when field_rms > 0. "
                                      "Instead, got %s" % repr(self.rabi_per_gauss),
                                      key='rabi_per_gauss')

    @property
    def noisy(self):
        return self.field_rms > 0


NO_ERROR = ErrorRealization()


def drive_noise(p, e, max_steps=MAX_STEPS):
    """Additive drive-field noise of one gate and the hold time of each sample.

    Every quadrature gets independent Gaussian samples of rms e.field_rms
    (gauss), each held for at most 1/(2 e.bandwidth), so the simulated field
    has rms field_rms within a noise bandwidth of at least e.bandwidth. The
    holds tile the duration actually simulated, static errors included.

    Returns :: (array (n, 2) of gauss, array (n,) of seconds)
    """
    duration = p.duration + e.delta_duration
    if duration < 0:
        raise ValidationError("pulse duration plus its error is negative: %s" % repr(duration),
                              key='delta_duration')
    if not e.noisy:
        return np.zeros((1, 2)), np.array([duration])
    n_steps = max(1, int(math.ceil(round(duration * SAMPLES_PER_BANDWIDTH * e.bandwidth, 9))))
    if n_steps > max_steps:
        raise StepOverflowError("%d steps exceed the guard of %d; use a coarser bandwidth than %g Hz"
                                % (n_steps, max_steps, e.bandwidth), key='bandwidth')
    fields = e.field_rms * np.random.default_rng(e.seed).standard_normal((n_steps, 2))
    return fields, np.full(n_steps, duration / n_steps)


def _step_fields(p, e, max_steps=MAX_STEPS):
    """Rotation vectors h (H = h . sigma, rad/s) and step widths for one gate."""
    fields, dts = drive_noise(p, e, max_steps)
    omega = 2 * math.pi * p.f_rabi * (1 + e.rel_amplitude)
    phi = p.phase + e.delta_phase
    delta = 2 * math.pi * (p.detuning + e.delta_f)
    base = np.array([omega * math.cos(phi) / 2, omega * math.sin(phi) / 2, delta / 2])
    h = np.tile(base, (len(dts), 1))
    if e.noisy:
        h[:, :2] += math.pi * e.rabi_per_gauss * fields
    return h, dts


def _propagate(h, dts):
    """Time-ordered product of exact step propagators.

    Arguments:
        h : array (..., n_steps, 3) of rotation vectors in rad/s
        dts : array (n_steps,) of step widths

    Returns :: array (..., 2, 2) complex
    """
    norm = np.linalg.norm(h, axis=-1)
    angle = norm * dts
    c = np.cos(angle)
    s = dts * np.sinc(angle / math.pi)  # sin(|h| dt) / |h|
    hx, hy, hz = h[..., 0], h[..., 1], h[..., 2]
    steps = np.empty(h.shape[:-1] + (2, 2), dtype=complex)
    steps[..., 0, 0] = c - 1j * s * hz
    steps[..., 0, 1] = -1j * s * hx - s * hy
    steps[..., 1, 0] = -1j * s * hx + s * hy
    steps[..., 1, 1] = c + 1j * s * hz
    # later steps multiply from the left
    while steps.shape[-3] > 1:
        if steps.shape[-3] % 2:
            pad = np.broadcast_to(np.eye(2, dtype=complex), steps.shape[:-3] + (1, 2, 2))
            steps = np.concatenate([steps, pad], axis=-3)
        steps = np.matmul(steps[..., 1::2, :, :], steps[..., 0::2, :, :])
    return steps[..., 0, :, :]


def simulate_gate(p, e=NO_ERROR, max_steps=MAX_STEPS):
    """Propagator of pulse p under error realization e.

    Returns :: 2x2 complex unitary
    """
    h, dts = _step_fields(p, e, max_steps)
    return _propagate(h, dts)


def transfer_probability(U):
    """Probability of |0> -> |1> under U."""
    return float(abs(U[1, 0]) ** 2)


def rabi_transfer_probability(f_rabi, detuning, t):
    """Analytic Rabi formula for a constant drive."""
    omega = 2 * math.pi * f_rabi
    delta = 2 * math.pi * detuning
    generalized = math.hypot(omega, delta)
    if generalized == 0:
        return 0.0
    return (omega / generalized) ** 2 * math.sin(generalized * t / 2) ** 2


def _ensure_unitary(name, U):
    U = np.asarray(U, dtype=complex)
    if U.shape[-2:] != (2, 2):
        raise ValidationError("%s must be 2x2. Instead, got shape %s" % (name, U.shape), key=name)
    deviation = np.max(np.abs(np.conj(np.swapaxes(U, -1, -2)) @ U - np.eye(2)))
    if deviation > UNITARITY_TOL:
        raise ValidationError("%s is not unitary (deviation %.3g)" % (name, deviation), key=name)
    return U


def _worst_case(U_actual, U_ideal):
    V = np.conj(np.swapaxes(U_ideal, -1, -2)) @ U_actual
    trace = V[..., 0, 0] + V[..., 1, 1]
    return np.clip(1.0 - np.abs(trace) ** 2 / 4, 0.0, 1.0)


def worst_case_infidelity(U_actual, U_ideal):
    """1 - min over pure states of |<psi|U_ideal^dag U_actual|psi>|^2.

    For a qubit the minimum sits on the states orthogonal to the rotation
    axis of U_ideal^dag U_actual, giving 1 - |Tr|^2/4 up to global phase.
    """
    U_actual = _ensure_unitary('U_actual', U_actual)
    U_ideal = _ensure_unitary('U_ideal', U_ideal)
    return float(_worst_case(U_actual, U_ideal))


def average_gate_infidelity(U_actual, U_ideal):
    """Average over the Haar measure; 2/3 of the worst case for a qubit."""
    return 2.0 / 3.0 * worst_case_infidelity(U_actual, U_ideal)


def gate_infidelity(U_actual, U_ideal, metric=Metric.worst_case):
    if Metric(metric) is Metric.average:
        return average_gate_infidelity(U_actual, U_ideal)
    return worst_case_infidelity(U_actual, U_ideal)


class ErrorDistribution(object):
    """An abstract source of ErrorRealizations for Monte Carlo runs."""
    def sample(self, rng):
        raise NotImplementedError("Implement sample in subclasses.")


class ZeroError(ErrorDistribution):
    def sample(self, rng):
        return NO_ERROR


class QuasiStaticDetuning(ErrorDistribution):
    """Gaussian frequency error, constant over each gate."""
    def __init__(self, sigma):
        ensure_nonnegative('sigma', sigma)
        self.sigma = sigma

    def sample(self, rng):
        return ErrorRealization(delta_f=float(rng.normal(0.0, self.sigma)))


class WhiteTransverseNoise(ErrorDistribution):
    """Additive white field noise on both drive quadratures."""
    def __init__(self, field_rms, bandwidth, rabi_per_gauss):
        self.field_rms = field_rms
        self.bandwidth = bandwidth
        self.rabi_per_gauss = rabi_per_gauss

    def sample(self, rng):
        return ErrorRealization(field_rms=self.field_rms, bandwidth=self.bandwidth,
                                rabi_per_gauss=self.rabi_per_gauss,
                                seed=int(rng.integers(0, 2 ** 63 - 1)))


@dataclass(frozen=True)
class MonteCarloResult(object):
    mean: float
    stderr: float
    n: int

    def __repr__(self):
        return "MonteCarloResult(mean=%.6g, stderr=%.3g, n=%d)" % (self.mean, self.stderr, self.n)


def monte_carlo_infidelity(p, distribution, n=400, seed=0, metric=Metric.worst_case, workers=1):
    """Mean gate infidelity over n draws of distribution.

    Sample i uses numpy.random.default_rng([seed, i]), so serial and
    threaded runs give bit-identical results. When every draw shares the
    same time grid the gates are propagated as one batch.

    Returns :: MonteCarloResult
    """
    if n < 100:
        raise ValidationError("n must be at least 100. Instead, got %s" % repr(n), key='n')
    realizations = [distribution.sample(np.random.default_rng([seed, i])) for i in range(n)]
    U_ideal = simulate_gate(p)
    grids = [_step_fields(p, e) for e in realizations]
    same_grid = all(g[1].shape == grids[0][1].shape and np.array_equal(g[1], grids[0][1])
                    for g in grids)
    if same_grid:
        U = _propagate(np.stack([g[0] for g in grids]), grids[0][1])
        values = _worst_case(U, U_ideal)
    else:
        values = np.array(parallel_map(lambda g: _worst_case(_propagate(*g), U_ideal), grids,
                                       workers))
    if Metric(metric) is Metric.average:
        values = values * 2.0 / 3.0
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n))
    return MonteCarloResult(mean=mean, stderr=stderr, n=n)


def wideband_noise_limit(budget, f_rabi, T_op, rabi_per_gauss, bandwidth_factor=1.0,
                         n=400, seed=0):
    """Largest additive white field noise (gauss rms) meeting budget.

    Brent's method on the field rms; every evaluation reuses the same noise
    seeds, so the Monte Carlo mean is a smooth function of the rms.

    Arguments:
        budget : target mean infidelity
        f_rabi : Rabi frequency of the gate, Hz
        T_op : gate duration, s
        rabi_per_gauss : Hz of Rabi rate per gauss of drive
        bandwidth_factor : simulation bandwidth in units of 1/T_op

    Returns :: gauss rms
    """
    ensure_positive('budget', budget)
    p = PulseSpec(f_rabi=f_rabi, duration=T_op)
    bandwidth = bandwidth_factor / T_op

    def excess(field_rms):
        dist = WhiteTransverseNoise(field_rms, bandwidth, rabi_per_gauss)
        return monte_carlo_infidelity(p, dist, n=n, seed=seed).mean - budget

    # n held samples per quadrature: mean ~ (pi^2/2) sigma^2 / n, sigma in units of f_rabi
    n_holds = max(1.0, SAMPLES_PER_BANDWIDTH * bandwidth * T_op)
    guess = f_rabi / rabi_per_gauss * math.sqrt(n_holds * budget / (math.pi ** 2 / 2))
    lo, hi = guess / 4, guess * 4
    for _ in range(8):
        if excess(lo) < 0:
            break
        lo /= 4
    else:
        raise NonConvergenceError("no lower bracket for the wideband noise limit", estimate=lo)
    for _ in range(8):
        if excess(hi) > 0:
            break
        hi *= 4
    else:
        raise NonConvergenceError("no upper bracket for the wideband noise limit", estimate=hi)
    limit = optimize.brentq(excess, lo, hi, xtol=guess * 1e-9, rtol=1e-9)
    logger.debug("wideband limit %.6g G for budget %.3g (guess %.6g G)", limit, budget, guess)
    return limit
