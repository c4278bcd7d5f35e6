"""
Exception types raised by the scattering solver.
"""
from typing import Optional


class ScatteringError(Exception):
    """Base class for all solver errors."""


class DomainError(ScatteringError, ValueError):
    """Argument outside the supported domain of a special function."""


class SingularityError(ScatteringError, ValueError):
    """A kernel was evaluated at coincident source and target points."""


class DegenerateGeometryError(ScatteringError, ValueError):
    """Surface, image line, source or evaluation region are inconsistent."""


class InvalidArgumentError(ScatteringError, ValueError):
    """Bad parameter combination (discretization, config value, array length)."""


class NearSingularSystemError(ScatteringError, RuntimeError):
    """The collocation matrix is numerically singular."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition
