"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter value violates a documented constraint."""


class UndefinedMetricError(ValueError):
    """A metric is undefined for the given inputs (e.g. fewer than two points)."""


class DatasetFormatError(ValueError):
    """A dataset file is malformed.

    ``line`` is the 1-based line number the problem was detected on,
    or None when the problem is not tied to a single line.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedVersionError(DatasetFormatError):
    """The dataset file declares a format version this code cannot read."""


class SweepSpecError(ValueError):
    """A benchmark sweep specification is invalid."""


class ResultsFileError(ValueError):
    """A benchmark results file is missing, empty, or corrupt."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
