class HeadlineSignalException(Exception):
    """Base exception for headlinesignal errors."""


class RecordException(HeadlineSignalException):
    pass


class ParseError(RecordException, ValueError):
    """Raised when an input row or cell does not match the schema."""

    def __init__(self, message, line=None, field=None, value=None):
        self.reason = message
        self.line = line
        self.field = field
        self.value = value
        where = []
        if line is not None:
            where.append('line {}'.format(line))
        if field is not None:
            where.append('field {!r}'.format(field))
        if where:
            message = '{}: {}'.format(', '.join(where), message)
        super().__init__(message)


class DuplicateKeyError(RecordException):
    """Raised when a dataset repeats a unique key."""


class CalendarException(HeadlineSignalException):
    """Raised when a timestamp falls outside the trading calendar."""


class BreakpointUndefined(HeadlineSignalException):
    """Raised if no NYSE market caps exist on the requested date."""


class ScorerException(HeadlineSignalException):
    pass


class BackendException(ScorerException):
    """Raised when a scorer backend cannot deliver a response."""

    def __init__(self, message, story_id=None):
        self.story_id = story_id
        if story_id is not None:
            message = 'story {}: {}'.format(story_id, message)
        super().__init__(message)


class RateLimited(BackendException):
    pass


class ResponseParseError(ScorerException):
    """Raised when a response has no YES/NO/UNKNOWN first line."""

    def __init__(self, message, raw=None):
        self.raw = raw
        super().__init__(message)


class EstimationException(HeadlineSignalException):
    pass


class ConvergenceError(EstimationException):
    def __init__(self, message, residual=None):
        self.residual = residual
        super().__init__(message)


class RankDeficient(EstimationException):
    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


class InsufficientClusters(EstimationException):
    pass


class DegenerateOutcome(EstimationException):
    pass


class EmptySample(EstimationException):
    pass


class ConfigException(HeadlineSignalException):
    pass


class PipelineDependencyError(HeadlineSignalException):
    """Raised when a command runs before the command it depends on."""

    def __init__(self, message, required=None):
        self.required = required
        super().__init__(message)
