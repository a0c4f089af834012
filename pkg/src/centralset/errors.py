"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so the split between "bad input",
"honest absence within bounds" and "refused as infeasible" matters.
"""


class CentralSetError(Exception):
    """Base class for all package errors."""


class InvalidInput(CentralSetError, ValueError):
    """Input violates a schema, a type invariant or an operation precondition."""


class WrongAlgorithm(InvalidInput):
    """A commutative-only procedure was handed a non-commutative semigroup."""


class PreconditionError(InvalidInput):
    """An operation's stated precondition does not hold (e.g. set not pws)."""


class SearchExhausted(CentralSetError):
    """A bounded search finished without a result. Not a mathematical 'no'."""

    def __init__(self, message: str, bound: str | None = None):
        super().__init__(message)
        self.bound = bound


class TruncationTooSmall(SearchExhausted):
    pass


class WindowTooSmall(SearchExhausted):
    pass


class DepthTooSmall(SearchExhausted):
    pass


class InfeasibleError(CentralSetError):
    """Work estimate exceeds the configured budget; refused before starting."""
