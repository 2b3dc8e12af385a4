"""Exception types shared across the package."""


class OstroquadError(Exception):
    """Base class for all package errors."""


class DomainError(OstroquadError, ValueError):
    """An argument lies outside the domain of a function, weight or interval."""


class UnknownIdError(OstroquadError, KeyError):
    """A registry or enumeration lookup used an unknown name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown id"


class OracleError(OstroquadError, ArithmeticError):
    """Reference integration failed: non-finite values or tolerance not met."""


class ToleranceNotMet(OstroquadError):
    """Adaptive integration hit its depth cap before reaching the target bound.

    The best result obtained is kept on ``result``.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
