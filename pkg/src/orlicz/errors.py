"""Exception types shared across the package."""


class OrliczError(Exception):
    """Base class for all package-specific errors."""


class DomainError(OrliczError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(OrliczError, ValueError):
    """An object or config fragment is structurally invalid."""


class PreconditionError(OrliczError, ValueError):
    """A documented precondition of an operation does not hold."""


class NotInSpaceError(OrliczError, ArithmeticError):
    """The modular stays infinite at every tested scale."""


class CriterionBoundError(OrliczError, RuntimeError):
    """A certified bound required by a construction cannot be met."""
