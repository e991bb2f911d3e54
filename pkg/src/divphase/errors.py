"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class DegenerateInputError(InvalidInputError):
    """Raised when inputs are valid in form but carry no usable content."""


class ImageIOError(OSError):
    """Raised when a raster file cannot be read or written."""
