"""Exception hierarchy shared by every module."""


class ShrinkRegError(Exception):
    """Base class for all errors raised by shrinkreg."""

    exit_code = 1


class DataError(ShrinkRegError):
    """Malformed or unusable input data."""

    exit_code = 3


class DegenerateColumnError(DataError):
    """A column that must have positive spread is constant."""

    exit_code = 4


class NotPositiveDefiniteError(ShrinkRegError):
    """A matrix expected to be symmetric positive definite is not."""

    exit_code = 5


class ConvergenceError(ShrinkRegError):
    """An iterative routine did not reach its tolerance."""

    exit_code = 6


class ConfigError(ShrinkRegError, ValueError):
    """Invalid penalty, grid or run configuration."""

    exit_code = 2
