class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ContractViolation(ValueError):
    """Input breaks a documented precondition (e.g. an unnormalized mode)."""


class RegimeWarning(UserWarning):
    """A formula is evaluated outside the regime where it is meaningful."""
