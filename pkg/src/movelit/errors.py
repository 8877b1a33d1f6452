"""Exception types shared across the engine."""


class MovelitError(Exception):
    """Base class for all engine errors."""


class StreamOrderError(MovelitError):
    """A landmark frame arrived with a non-increasing timestamp."""


class FrameSchemaError(MovelitError):
    """A landmark frame is missing slots or carries malformed values."""


class TraceParseError(MovelitError):
    """A trace file line could not be parsed.

    Carries the 1-based line number for CLI reporting.
    """

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ScaleUnavailableError(MovelitError):
    """Body scale cannot be computed because a defining landmark is occluded."""


class EmptyWindowError(MovelitError):
    """A counting window with end <= start."""


class DegenerateDistributionError(MovelitError):
    """All dataset values are equal; skew class is undefined."""


class ResponseShapeError(MovelitError):
    """A graded response does not match the question kind's expected shape."""


class ConfigurationError(MovelitError):
    """Invalid round or engine configuration."""


class PhaseError(MovelitError):
    """An operation was applied in the wrong game phase."""


class LogIntegrityError(MovelitError):
    """A session log violates ordering or totals invariants."""


class StatsInputError(MovelitError):
    """Invalid input to a statistics operation."""
