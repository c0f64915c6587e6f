"""Exception types shared across the package."""


class OppLearnError(Exception):
    """Base class for all opplearn errors."""


class DomainError(OppLearnError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class DegenerateRangeError(OppLearnError, ValueError):
    """An operation needs a non-degenerate range (min < max) and got min == max."""


class InsufficientDataError(OppLearnError, ValueError):
    """Too few data rows to run the requested operation."""


class ConfigError(OppLearnError, ValueError):
    """Invalid training or experiment configuration."""


class InversionError(OppLearnError, ArithmeticError):
    """An analytic inverse failed its round-trip validation."""


class SchemeMismatchError(OppLearnError, RuntimeError):
    """An oppositeness scheme sent most evaluation targets outside a function's image."""
