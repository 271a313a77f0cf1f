"""Exception and warning types shared by every module."""


class WhittakerIndexError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WhittakerIndexError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class PoleError(DomainError):
    """An argument sits on (or within tolerance of) a pole."""


class DegenerateCase(WhittakerIndexError):
    """The simple-pole formula is singular; the double-pole limit must be used."""


class NoConvergence(WhittakerIndexError, ArithmeticError):
    """A series or an adaptive rule exhausted its budget."""


class NonFinite(WhittakerIndexError, ArithmeticError):
    """A NaN or infinity appeared where a finite number was required."""


class ZeroProduct(WhittakerIndexError, ArithmeticError):
    """Logarithmic derivative requested of a product that vanishes."""


class PrecisionLoss(UserWarning):
    """Cancellation destroyed more significant digits than allowed."""


class ConditioningWarning(UserWarning):
    """Evaluation close to a removable singularity; some digits are lost."""


class TailWarning(UserWarning):
    """The quadrature tail criterion could not be met at the largest cut."""
