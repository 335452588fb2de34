"""Exception types raised across the package."""


class SolarMarkovError(Exception):
    """Base class for all package errors."""


class DataError(SolarMarkovError, ValueError):
    """Malformed or inconsistent input data."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(SolarMarkovError, ValueError):
    """Invalid run configuration."""


class DegenerateDistributionError(SolarMarkovError, ValueError):
    """A state distribution carries no probability mass."""


class GridMismatchError(SolarMarkovError, ValueError):
    """Two state traces do not share a slot grid."""
