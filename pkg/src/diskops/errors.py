"""Exception types shared by every module."""


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field or JSON node."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class NumericalFailure(ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class ResourceLimit(RuntimeError):
    """A grid or net would exceed the configured cell cap."""
