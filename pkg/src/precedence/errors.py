"""Semantic exception hierarchy.

Public functions raise these instead of bare ValueError so callers (and the
CLI exit-code mapping) can tell input problems apart from verification
failures and from genuinely invalid models.
"""


class PrecedenceError(Exception):
    """Base error for this package."""


class DomainError(PrecedenceError, ValueError):
    """Arguments violate a documented precondition (bad index, wrong m, ...)."""


class RationalParseError(PrecedenceError, ValueError):
    """Text is not a valid rational literal, or has a zero denominator."""


class InputFormatError(PrecedenceError, ValueError):
    """A JSON document violates its schema; the message names the field."""


class InvalidModelError(PrecedenceError):
    """A load-sharing model loses probability mass before all components fail."""


class ScheduleError(PrecedenceError):
    """An epsilon schedule produces non-positive rates or fails its conditions."""


class InfeasibleTargetError(PrecedenceError):
    """A target signature puts mass on a failure step no ordering can realize."""


class SimulationError(PrecedenceError):
    """The sampler reached a state with zero total rate."""
