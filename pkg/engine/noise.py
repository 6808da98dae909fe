"""
noise.py stores the noise models (subclasses of NoiseModel), the filter
functions of an idling or driven qubit, and the integral turning the two
into an infidelity.

Spectra are one-sided in angular frequency, S(omega) in (rad/s)^2/Hz,
integrated over omega in [0, inf):

    1 - F = (1/pi) * integral S(omega) |H(omega)|^2 d omega
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from engine import spin
from engine.errors import (QuadratureError, ValidationError,
                           ensure_nonnegative, ensure_open_unit,
                           ensure_positive)

logger = logging.getLogger(__name__)

N_LOBES = 100
RTOL = 1e-3


class NoiseModel(object):
    """An abstract class for Larmor-frequency noise spectra."""
    kind = None

    def psd(self, omega):
        raise NotImplementedError("Implement psd in subclasses.")

    def corner_frequencies(self):
        """Angular frequencies where the spectrum bends; used as quadrature breakpoints."""
        return ()


class WhiteNoise(NoiseModel):
    """Flat spectrum of the given level in (rad/s)^2/Hz."""
    kind = 'white'

    def __init__(self, level):
        ensure_nonnegative('level', level)
        self.level = level

    def psd(self, omega):
        return self.level * np.ones_like(np.asarray(omega, dtype=float))

    def __repr__(self):
        return "WhiteNoise(level=%r)" % self.level


class OrnsteinUhlenbeckNoise(NoiseModel):
    """Lorentzian spectrum of a frequency wander with correlation time tau_c.

    The total power pi*omega2^2 is fixed by T2*, with omega2 = sqrt(2)/T2*.
    """
    kind = 'ornstein_uhlenbeck'

    def __init__(self, T2_star, tau_c):
        ensure_positive('T2_star', T2_star)
        ensure_positive('tau_c', tau_c)
        self.T2_star = T2_star
        self.tau_c = tau_c

    @property
    def omega2(self):
        return math.sqrt(2) / self.T2_star

    def psd(self, omega):
        omega = np.asarray(omega, dtype=float)
        rate = 1.0 / self.tau_c
        return 2 * math.pi * self.omega2 ** 2 * (rate / math.pi) / (omega ** 2 + rate ** 2)

    def corner_frequencies(self):
        rate = 1.0 / self.tau_c
        return (rate, 10 * rate, 100 * rate)

    def __repr__(self):
        return "OrnsteinUhlenbeckNoise(T2_star=%r, tau_c=%r)" % (self.T2_star, self.tau_c)


def _ensure_model(thing):
    """Raise ValueError if thing is not an instance of NoiseModel."""
    if not isinstance(thing, NoiseModel):
        raise ValidationError("Argument must be instance of NoiseModel. Instead, got %s" % repr(thing))


def _ensure_frequencies(omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0) or not np.all(np.isfinite(omega)):
        raise ValidationError("omega must be finite and nonnegative", key='omega')
    return omega


def psd(model, omega):
    """Evaluate a noise model's spectrum; scalar in, float out."""
    _ensure_model(model)
    values = model.psd(_ensure_frequencies(omega))
    return float(values) if np.ndim(values) == 0 else values


class FilterAxis(enum.Enum):
    parallel_idle = 'parallel_idle'
    transverse = 'transverse'


@dataclass(frozen=True)
class FilterFunction(object):
    """Noise sensitivity of a qubit over T_op.

    parallel_idle is the idling qubit under Z noise, a single lobe at zero
    frequency. transverse is X/Y noise seen in the frame rotating at omega0:
    the offsets omega0 +- x both land at x, so the one-sided filter carries
    a lobe at omega0 and its mirror at -omega0.
    """
    axis: FilterAxis
    T_op: float
    omega0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'axis', FilterAxis(self.axis))
        ensure_positive('T_op', self.T_op)
        ensure_nonnegative('omega0', self.omega0)

    @property
    def centers(self):
        if self.axis is FilterAxis.transverse:
            return (self.omega0, -self.omega0)
        return (0.0,)


def _lobe(T, x):
    # sin^2(T x / 2) / x^2 with its limit T^2/4 at x = 0
    return (T / 2) ** 2 * np.sinc(T * x / (2 * math.pi)) ** 2


def _filter(f, omega):
    return sum(_lobe(f.T_op, omega - c) for c in f.centers)


def filter_sq(f, omega):
    """|H(omega)|^2 in s^2."""
    values = _filter(f, _ensure_frequencies(omega))
    return float(values) if np.ndim(values) == 0 else values


def white_filter_gain(f):
    """(1/pi) * integral |H|^2 d omega over [0, inf): T/4 or T/2, whatever omega0."""
    return len(f.centers) * f.T_op / 4


def _quad(fn, a, b, points=None):
    kwargs = dict(limit=200, epsabs=0.0, epsrel=RTOL / 100, full_output=1)
    if points:
        kwargs['points'] = points
    result = integrate.quad(fn, a, b, **kwargs)
    if len(result) > 3:
        message = result[3]
        # roundoff on a piece is tolerated; the total is checked below
        if 'roundoff' not in message:
            raise QuadratureError("quadrature on [%g, %g] failed: %s" % (a, b, message),
                                  estimate=result[1])
        logger.debug("quadrature on [%g, %g]: %s", a, b, message)
    return result[0], result[1]


def infidelity_from_noise(model, f):
    """Infidelity of an idling or driven qubit under the given noise.

    Within N_LOBES lobes of every filter center the integral is split at the
    filter nodes c + 2*pi*k/T (plus any corner of the spectrum). Away from
    the centers the oscillating filter is replaced by its mean envelope
    sum 1/(2 (omega - c)^2). The tail past the last node is integrated in
    u = top/omega on (0, 1], where the envelope stays bounded.

    Arguments:
        model : NoiseModel
        f : FilterFunction

    Returns :: dimensionless infidelity
    """
    _ensure_model(model)
    T = f.T_op
    width = 2 * math.pi * N_LOBES / T
    corners = sorted(model.corner_frequencies())

    def integrand(x):
        return float(model.psd(x)) * float(_filter(f, x))

    def envelope(x):
        return float(model.psd(x)) * sum(0.5 / (x - c) ** 2 for c in f.centers)

    nodes = set()
    for c in f.centers:
        nodes.update(c + 2 * math.pi * k / T for k in range(-N_LOBES, N_LOBES + 1))
        if abs(c) <= width:
            nodes.add(0.0)
    nodes = sorted(x for x in nodes if x >= 0)
    low, top = nodes[0], nodes[-1]

    total, error = 0.0, 0.0
    if low > 0:
        # below every resolved lobe
        value, err = _quad(envelope, 0.0, low, [c for c in corners if c < low])
        total += value
        error += err
    for a, b in zip(nodes[:-1], nodes[1:]):
        inside = [c for c in corners if a < c < b]
        value, err = _quad(integrand, a, b, inside)
        total += value
        error += err

    def tail(u):
        return float(model.psd(top / u)) * sum(0.5 * top / (top - c * u) ** 2 for c in f.centers)

    value, err = _quad(tail, 0.0, 1.0, sorted(top / c for c in corners if c > top))
    total += value
    error += err
    logger.debug("noise integral %r over %r: %.6g +- %.2g", model, f, total, error)
    if total > 0 and error > RTOL * total:
        raise QuadratureError("noise integral did not converge to %g relative" % RTOL,
                              estimate=error / total)
    return total / math.pi


def allowed_field_psd(budget, axis, sys, target, T_op):
    """Largest white field-noise PSD (G^2/Hz) meeting budget over T_op.

    The allowed angular-frequency PSD follows from the analytic white-noise
    gain; it becomes a field PSD through the Larmor slope of the target.
    At equal budget the transverse allowance is half the parallel one.
    """
    ensure_open_unit('budget', budget)
    f = FilterFunction(axis, T_op)
    level = budget / white_filter_gain(f)
    slope = spin.larmor_slope(sys, target)
    return level / (2 * math.pi * slope) ** 2


def noise_spectrum(model, f, omegas):
    """Rows of (omega, S, |H|^2, S*|H|^2) for plotting."""
    omegas = _ensure_frequencies(omegas)
    spectrum = model.psd(omegas)
    weights = filter_sq(f, omegas)
    return [dict(omega=float(w), psd=float(s), filter_sq=float(h), integrand=float(s * h))
            for w, s, h in zip(omegas, np.broadcast_to(spectrum, omegas.shape),
                               np.broadcast_to(weights, omegas.shape))]
