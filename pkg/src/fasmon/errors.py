"""Exception types shared across the library."""


class FasmonError(Exception):
    """Base class for all library errors."""


class DomainError(FasmonError, ValueError):
    """An argument lies outside the domain a function is defined on."""


class ComputationError(FasmonError, ArithmeticError):
    """A computed intermediate is numerically inconsistent (e.g. a radicand
    that should be nonnegative comes out below tolerance)."""


class ConstraintInfeasibleError(ComputationError):
    """A requested rate lies outside the feasible band [r_min, r_max]."""


class DegenerateRateError(ComputationError):
    """R = 0 makes the destination outage constraint unsatisfiable: the
    outage probability is 0 for every jamming power."""


class AccuracyError(FasmonError):
    """An iterative numerical procedure failed to reach its tolerance.

    Carries the last two successive estimates so callers can judge how far
    the refinement got.
    """

    def __init__(self, message: str, last_estimate: float, previous_estimate: float):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.previous_estimate = previous_estimate


class ConfigError(FasmonError):
    """A configuration file or override is invalid.

    ``key`` names the offending entry; ``line`` is the 1-based line number in
    the source file when known (0 for CLI overrides and JSON input).
    """

    def __init__(self, message: str, key: str = "", line: int = 0):
        super().__init__(message)
        self.key = key
        self.line = line
