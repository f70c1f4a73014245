"""Exception types shared across the package."""


class WeekfitError(Exception):
    """Base class for input and domain errors raised by this package."""


class CsvFormatError(WeekfitError):
    """A CSV row failed to parse; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GapError(WeekfitError):
    """Hourly coverage has a hole; the message names the first missing hour."""


class SeriesTooShortError(WeekfitError):
    """A series does not cover the required number of samples."""


class ModelFormatError(WeekfitError):
    """A model parameter file is malformed or violates an invariant."""


class ConstantActualError(WeekfitError):
    """R2 is undefined because the actual values have zero variance."""
