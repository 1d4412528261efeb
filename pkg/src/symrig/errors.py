"""Exception types shared across modules."""


class InternalDisagreement(RuntimeError):
    """Two independent computations of the same fact disagree."""


class TooLarge(ValueError):
    """Instance exceeds an enumeration guard."""


class NotInClass(ValueError):
    """Input graph is outside the class an operation requires."""
