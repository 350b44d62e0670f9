"""Exception types shared across the toolkit."""


class MacselError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(MacselError):
    """A configuration document failed to parse or validate.

    ``violations`` lists human-readable messages, each naming the
    offending field.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class SaturatedError(MacselError):
    """The CSMA/CA collision fixed point has no root below 1.

    Raised when the offered load exceeds the validity region of the
    collision model ("saturated").
    """


class DegenerateCPFError(MacselError):
    """The combined performance function denominator is zero."""


class RegistryError(MacselError):
    """Invalid registry operation (duplicate id, dangling reference, ...)."""


class SelectionError(MacselError):
    """Protocol selection cannot produce a result (no satisfying category)."""


class ScheduleError(MacselError):
    """A contention-free schedule cannot be built or is inconsistent."""
