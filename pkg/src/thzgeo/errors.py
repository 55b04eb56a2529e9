"""Exception hierarchy shared by all thzgeo modules."""


class ThzGeoError(Exception):
    """Base class for all thzgeo errors."""


class DomainError(ThzGeoError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class OverflowRangeError(ThzGeoError, ValueError):
    """Evaluation would overflow double precision; the safe range is documented
    on the raising function."""


class ConvergenceError(ThzGeoError, RuntimeError):
    """An iterative scheme failed to converge within its budget."""


class SeriesDivergenceError(ConvergenceError):
    """Successive series terms grew beyond the divergence guard; the series
    expansion is unusable for these parameters."""


class QuadratureError(ThzGeoError, RuntimeError):
    """Numerical integration failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved_error: float | None = None):
        super().__init__(message)
        self.achieved_error = achieved_error


class DegenerateDistributionError(ThzGeoError, ValueError):
    """A probability distribution degenerated (e.g. zero normalising mass)."""


class ConfigError(ThzGeoError, ValueError):
    """A configuration file or key is invalid; the message names the key."""
