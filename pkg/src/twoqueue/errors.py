"""Exception types shared across the package.

ValueError subclasses signal bad inputs or configuration (CLI exit 2),
NumericalError covers failed computations (exit 3), and RegimeError marks
parameter regimes where the requested quantity does not exist (exit 4).
"""


class TwoQueueError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(TwoQueueError, ValueError):
    """Model or perturbation parameters violate an admissibility constraint."""


class DomainError(TwoQueueError, ValueError):
    """A numeric input is outside the function's domain (e.g. non-finite)."""


class ConfigError(TwoQueueError, ValueError):
    """A configuration file or CLI option could not be interpreted."""


class MeasurementError(TwoQueueError, ValueError):
    """A trajectory measurement was requested on an unsuitable window."""


class BracketError(TwoQueueError, ValueError):
    """A bisection bracket does not actually bracket a stability change."""


class NumericalError(TwoQueueError):
    """A numerical procedure failed to produce a usable result."""


class IntegrationDivergedError(NumericalError):
    """The integrator state left the divergence guard.

    Carries ``last_valid_time``, the last grid time with a finite,
    in-bounds state.
    """

    def __init__(self, message, last_valid_time):
        super().__init__(message)
        self.last_valid_time = last_valid_time


class SolverError(NumericalError):
    """An iterative solver did not converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class RegimeError(TwoQueueError):
    """The parameter regime does not admit the requested object."""


class NoBifurcationError(RegimeError):
    """No delay-induced stability change exists for these parameters."""


class NoLimitCycleError(RegimeError):
    """The delay is below the critical delay, so no limit cycle exists."""


class InvalidRegimeError(RegimeError):
    """A formula's validity condition (e.g. positive denominator) fails."""
