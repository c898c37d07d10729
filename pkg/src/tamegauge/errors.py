"""Exception hierarchy.

Input problems derive from ``ParameterError`` and computation problems from
``ComputationError``. ``TheoremViolation`` is reserved for outcomes that the
underlying mathematics says cannot happen; seeing one means a bug.
"""


class TameGaugeError(Exception):
    pass


class ParameterError(TameGaugeError, ValueError):
    """Invalid or out-of-range input."""


class ScalarTypeError(ParameterError):
    """Principal series exponents coincide (scalar type)."""


class NormFactorError(ParameterError):
    """Cuspidal character factors through the norm."""


class InvalidIndexError(ParameterError):
    """A subset is not an admissible index for the given type."""


class KindError(ParameterError):
    """Operation called on the wrong kind of type or representation."""


class PreconditionError(ParameterError):
    pass


class ComputationError(TameGaugeError):
    pass


class UnsupportedError(ComputationError):
    pass


class NotFoundError(ComputationError):
    pass


class PrecisionError(ComputationError):
    """p-adic precision exhausted; rerun with a larger N."""


class TheoremViolation(TameGaugeError):
    pass
