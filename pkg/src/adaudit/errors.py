"""Exception hierarchy shared across the audit framework."""


class AuditError(Exception):
    """Base class for all framework errors."""


class InvalidAge(AuditError):
    """Age outside the accepted minor (16-17) / adult (20-21) bands."""


class MismatchedPair(AuditError):
    """Paired agents differ on a controlled variable (gender, interest, locale)."""


class InvariantViolation(AuditError):
    """A structural invariant of a record or derived artifact is broken."""


class MalformedRecord(AuditError):
    """A serialized record could not be parsed; carries line number and field."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        super().__init__(f"{message}" + (f" ({', '.join(loc)})" if loc else ""))


class ConfigError(AuditError):
    """Scenario configuration is invalid; carries the offending field path."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class UnknownUser(AuditError):
    """Feed operation for a user the platform has never seen."""


class SessionClosed(AuditError):
    """Feed operation on a session that is not open."""


class UnknownVideoForUser(AuditError):
    """Engagement reported for a video not served to the user in the open session."""


class PredictorUnavailable(AuditError):
    """External interaction-predictor adapter could not be reached."""


class PairDesync(AuditError):
    """Internal assertion: the per-item barrier between paired agents broke."""


class ServiceUnreachable(AuditError):
    """Platform service could not be reached."""


class NoBaselineUsers(AuditError):
    """No same-age-group user with a different interest exists in the dataset."""


class JoinFailure(AuditError):
    """A classification result is missing for an observed exposure."""


class InvalidCounts(AuditError):
    """Proportion test inputs violate 0 <= x <= n, n > 0."""


class EmptyIntersection(AuditError):
    """Two annotation sets share no video ids."""


class MissingArtifact(AuditError):
    """A pipeline stage requires an artifact a previous stage has not produced."""
