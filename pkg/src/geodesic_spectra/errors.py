"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: data-shaped failures (files, ordering,
completeness, coverage) exit 3, numeric/analytic failures (poles, tracking,
consistency, unsupported formulas) exit 4.
"""


class SpectraError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SpectraError):
    """Malformed input file; carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderError(ParseError):
    """Entries out of ascending order."""


class DomainError(SpectraError):
    """Argument outside an operation's domain."""


class CompletenessError(SpectraError):
    """Query beyond the certified completeness height of a dataset."""


class CoverageError(SpectraError):
    """Query beyond the range covered by a phase track or grid."""


class PoleError(SpectraError):
    """Evaluation at (or too close to) a pole; carries the location."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(message)


class TrackError(SpectraError):
    """Phase tracking failed to resolve a step (refinement depth exhausted)."""


class ConsistencyError(SpectraError):
    """Two routes that must agree exactly did not; flags a formula bug."""


class UnsupportedSurfaceError(SpectraError):
    """Requested formula is not available for this surface family."""
