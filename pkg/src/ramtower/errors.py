"""Exceptions shared across the package."""


class RamtowerError(Exception):
    """Base class for all domain errors raised by ramtower."""


class InsufficientPrecision(RamtowerError):
    """A truncated series does not carry enough known digits to decide the result.

    Raised, for example, when asking for the valuation of a series whose known
    coefficients are all zero but whose precision is finite, or when a resultant's
    valuation cannot be read off from the available digits.
    """


class FieldMismatch(RamtowerError):
    """Two operands live over different coefficient fields."""


class GuardViolation(RamtowerError):
    """A formula was evaluated outside the range where it is valid."""


class IntegralityError(RamtowerError):
    """A coefficient that must be integral at p has a leftover denominator.

    Carries the offending monomial so the failure is reproducible.
    """

    def __init__(self, message, monomial=None):
        super().__init__(message)
        self.monomial = monomial
