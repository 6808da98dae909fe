"""
Exceptions raised by colorcell.

Everything derives from ColorcellError. Bad inputs are ValidationErrors
(also ValueErrors, so callers catching ValueError keep working); numerical
failures are NonConvergenceErrors. The command line maps the first family
to exit code 1 and the second to exit code 2.
"""


class ColorcellError(Exception):
    """Base class of every colorcell error."""
    key = None


class ValidationError(ColorcellError, ValueError):
    """A parameter is physically invalid or unknown.

    Arguments:
        message : human readable description
        key : name of the offending parameter, if there is one
    """
    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


class ConfigParseError(ValidationError):
    """A scenario file does not follow the INI grammar."""
    def __init__(self, message, path=None, lineno=None, key=None):
        if lineno is not None:
            message = "%s (line %d)" % (message, lineno)
        super().__init__(message, key=key)
        self.path = path
        self.lineno = lineno


class SpeciesMismatchError(ValidationError):
    """An electron state label was used with the wrong color center."""


class RangeError(ValidationError):
    """A budget cannot be met anywhere inside the searched range."""


class InfiniteBitsError(ValidationError):
    """Perfect NCO fidelity needs an unbounded phase accumulator."""


class StepOverflowError(ValidationError):
    """A pulse simulation would need more steps than allowed."""


class SingularityError(ValidationError):
    """A field point lies on a conductor."""


class NonConvergenceError(ColorcellError, ArithmeticError):
    """A numerical procedure did not reach its tolerance.

    Arguments:
        message : human readable description
        estimate : the best error estimate available when it gave up
    """
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class QuadratureError(NonConvergenceError):
    """Adaptive quadrature of a noise integral failed."""


class DiscretizationError(NonConvergenceError):
    """Refining a filament or segment discretization kept moving the answer."""


class DegenerateLevelError(NonConvergenceError):
    """Eigenvector tracking is ambiguous at a level crossing."""
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


def ensure_positive(key, value):
    """Raise ValidationError unless value > 0."""
    if not value > 0:
        raise ValidationError("%s must be positive. Instead, got %s" % (key, repr(value)), key=key)
    return value


def ensure_nonnegative(key, value):
    """Raise ValidationError unless value >= 0."""
    if not value >= 0:
        raise ValidationError("%s must be nonnegative. Instead, got %s" % (key, repr(value)), key=key)
    return value


def ensure_open_unit(key, value):
    """Raise ValidationError unless 0 < value < 1."""
    if not 0 < value < 1:
        raise ValidationError("%s must lie in (0, 1). Instead, got %s" % (key, repr(value)), key=key)
    return value


def ensure_closed_unit(key, value):
    """Raise ValidationError unless 0 <= value <= 1."""
    if not 0 <= value <= 1:
        raise ValidationError("%s must lie in [0, 1]. Instead, got %s" % (key, repr(value)), key=key)
    return value
