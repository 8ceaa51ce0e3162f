from __future__ import annotations


class ReactiveError(Exception):
    """Base class for every error raised by reactenv."""


class UnknownEntity(ReactiveError, LookupError):
    pass


class SubscriptionError(ReactiveError, ValueError):
    """Illegal edit of the subscription graph (self-edge, duplicate, missing edge)."""


class SchedulingError(ReactiveError, ValueError):
    """An event was requested in the past, or a timer period is not positive."""


class RoutingError(ReactiveError):
    """A stimulus travelled along an edge that is not in the graph."""


class HookError(ReactiveError):
    """A behavior hook raised. Aborts the run."""

    def __init__(self, entity: str, hook: str, time: float, cause: BaseException) -> None:
        self.entity = entity
        self.hook = hook
        self.time = time
        self.cause = cause
        super().__init__(
            f"hook {hook!r} of entity {entity!r} failed at t={time:.6f}: "
            f"{type(cause).__name__}: {cause}"
        )


class ConfigError(ReactiveError, ValueError):
    pass


class TraceFormatError(ReactiveError, ValueError):
    def __init__(self, line: int, message: str) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}")
