"""Exception types shared across the package."""


class EntrevError(Exception):
    """Base class for all errors raised by entrev."""


class EmptyInputError(EntrevError):
    """Raised when an input stream or file contains no symbols."""


class KeyCapacityError(EntrevError):
    """Raised when a tuple key would not fit the 64-bit integer encoding."""


class ZeroContextError(EntrevError):
    """Raised when a conditional model is queried at a context with zero mass."""

    def __init__(self, context, message=None):
        self.context = tuple(context)
        super().__init__(message or f"context {self.context} has zero probability mass")


class ZeroProbabilityError(EntrevError):
    """Raised when an observed tuple has zero model probability.

    Carries the offending tuple so the caller can see exactly which event
    made the entropy infinite.
    """

    def __init__(self, offending_tuple, message=None):
        self.offending_tuple = tuple(offending_tuple)
        super().__init__(
            message or f"tuple {self.offending_tuple} has zero probability under the model"
        )


class NonStationaryJointError(EntrevError):
    """Raised when an operation requires a stationary joint but got none."""


class ConvergenceError(EntrevError):
    """Raised when power iteration cannot produce a unique stationary vector."""


class OrderMismatchError(EntrevError):
    """Raised when models or tables of incompatible orders are combined."""


class ModelFormatError(EntrevError):
    """Raised when a model/joint/transition file fails validation."""
