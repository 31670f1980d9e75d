"""Exception hierarchy shared by all qssa modules."""


class QSSAError(Exception):
    """Base class for every error raised by the package."""


class DomainError(QSSAError, ValueError):
    """An argument lies outside the domain of a function."""


class NotApplicableError(QSSAError):
    """A regime-specific construction was requested where it does not apply."""


class StiffnessError(QSSAError, RuntimeError):
    """The adaptive integrator could not make progress.

    Attributes
    ----------
    t : float
        Time reached before the integrator gave up.
    """

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class InvariantViolationError(QSSAError, RuntimeError):
    """A trajectory left the feasible region by more than the tolerance."""


class DegenerateBoundError(QSSAError, ValueError):
    """A bounded system declared a non-positive supremum bound."""


class ConfigError(QSSAError, ValueError):
    """A scenario configuration could not be parsed or validated."""
