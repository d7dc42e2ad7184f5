"""The copacrr exceptions that are to be raised when an error occurs."""

class CopacrrException(Exception):
    """Raise this error when an error occurs in the ranking pipeline."""

    exit_code = 1

class ConfigError(CopacrrException):
    """Raise this error when a configuration value, a path or a key is invalid."""

    exit_code = 2

class ShapeError(ConfigError):
    """Raise this error when the shapes given to an operation do not agree."""

class DataError(CopacrrException):
    """Raise this error when an input file or a data record cannot be used."""

    exit_code = 3

class CheckpointError(DataError):
    """Raise this error when a checkpoint or a cache file is corrupted."""

class NumericalError(CopacrrException):
    """Raise this error when a non-finite value appears in a computation."""

    exit_code = 4
