"""Exception hierarchy shared by all modules."""


class AsymmetryError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(AsymmetryError, ValueError):
    """Input failed a structural or physical validity check."""


class DimensionMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class InvalidState(ValidationError):
    pass


class InvalidSpin(ValidationError):
    pass


class InvalidOrder(ValidationError):
    pass


class InvalidDilation(ValidationError):
    pass


class InvalidGroup(ValidationError):
    pass


class GroupMismatch(ValidationError):
    pass


class NotPure(ValidationError):
    pass


class UnknownInstance(ValidationError):
    pass


class ZeroAsymmetry(AsymmetryError):
    """The state carries no phase information, so the bound is infinite."""


class NumericalInconsistency(AsymmetryError, ArithmeticError):
    """A quantity that must be nonnegative came out clearly negative."""
