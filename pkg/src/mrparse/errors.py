"""Exception hierarchy.

Everything raised for bad *data* derives from :class:`DataError`, which the
command line maps to exit code 1.
"""


class DataError(ValueError):
    """Input data is malformed or inconsistent."""


class TreebankParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TreeStructureError(DataError):
    """A tree violates a structural invariant (yields, terminal indices)."""


class DependencyValidationError(DataError):
    """Head column out of range, self-loop or cycle."""


class UnsupportedFormatError(DataError):
    """Tree cannot be written in the requested format."""


class AlignmentError(DataError):
    """Two inputs that must be token-aligned are not."""


class CheckpointFormatError(DataError):
    pass


class CheckpointVersionError(CheckpointFormatError):
    pass
