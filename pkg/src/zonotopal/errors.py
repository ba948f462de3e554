"""Exception hierarchy shared across the package."""


class ZonotopalError(Exception):
    """Base class for all library errors."""


class InputError(ZonotopalError):
    """Malformed problem input (parsing or schema)."""


class ValidationError(ZonotopalError):
    """A verified precondition failed on user-supplied data."""


class AssignmentError(ValidationError):
    """The flat assignment input is malformed."""


class GenerationExhaustedError(ValidationError):
    """Rejection sampling ran out of attempts (pathological configuration)."""


class NoSolutionError(ZonotopalError):
    """The linear system is inconsistent."""


class UnderdeterminedError(ZonotopalError):
    """The linear system has several solutions where a unique one was required."""


class InternalConsistencyError(ZonotopalError):
    """A property the theory guarantees failed at runtime; indicates a bug."""
