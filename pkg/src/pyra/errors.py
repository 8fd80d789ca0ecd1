"""Exception types shared across the toolkit.

The CLI maps :class:`ValidationError` (and plain ``ValueError``) to exit
code 1 and I/O-side failures (:class:`CorruptImageError`,
:class:`UnsupportedImageError`, ``OSError``) to exit code 2.
"""


class PyraError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(PyraError, ValueError):
    """An input violates a documented invariant or precondition."""


class ManifestError(ValidationError):
    """A dataset manifest is malformed or inconsistent."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedImageError(PyraError, OSError):
    """The file decodes but is not an 8-bit 1/3/4-channel image (or a
    16-bit grayscale map where one is expected)."""


class CorruptImageError(PyraError, OSError):
    """The file exists but its stream cannot be decoded."""
