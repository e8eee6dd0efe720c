"""Exception types shared across the package."""


class ParalensError(Exception):
    """Base class for every error raised by this package."""


class CompositionError(ParalensError):
    """Two morphisms or lenses were glued along boundaries that disagree."""


class SizeCapError(ParalensError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class UnsupportedOperationError(ParalensError):
    """The operation is not defined on this base (e.g. table equality of smooth maps)."""


class NumericError(ParalensError):
    """A numeric value failed validation (non-finite entries, wrong dimension)."""


class SpecFormatError(ParalensError):
    """A JSON spec failed validation; ``path`` points at the offending field."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
