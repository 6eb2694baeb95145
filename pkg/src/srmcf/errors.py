"""Exception types shared across the package.

The CLI maps these onto distinct exit codes: I/O failures -> 2,
configuration problems -> 3, numerical blow-ups -> 4.
"""


class ConfigurationError(ValueError):
    """Invalid grid, parameter, mask, or config-file input."""


class ImageIOError(OSError):
    """Unreadable, unwritable, or unsupported image file."""


class NumericalError(RuntimeError):
    """NaN/Inf detected during a flow; message names the first bad node."""
