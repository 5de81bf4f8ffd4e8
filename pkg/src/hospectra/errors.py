"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A configuration or argument value violates a documented precondition."""


class DataError(ValueError):
    """An input file or data stream could not be read or parsed."""
