"""Exception types shared across the package."""


class TamperestError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(TamperestError, ValueError):
    """An input (state, symbol, cost table, observation, ...) is malformed."""


class ConfigurationError(TamperestError):
    """Two otherwise-valid objects do not fit together (alphabet mismatch)."""


class PreconditionError(TamperestError):
    """A structural assumption required by an analysis does not hold.

    `kind` is one of ``"liveness"`` or ``"unobservable-cycle"``; `witness`
    carries the offending state or cycle.
    """

    def __init__(self, message, kind, witness):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


class OracleBudgetError(TamperestError):
    """A brute-force reference computation refused an oversized input."""
