"""Exception hierarchy shared by every subpackage."""


class QSBOError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(QSBOError, ValueError):
    """An argument has an invalid value (non-finite angle, bad pmf, ...)."""


class StructuralError(QSBOError, ValueError):
    """Qubit indices or register layouts do not fit together."""


class ResourceError(QSBOError, RuntimeError):
    """A computation would exceed a size or iteration budget.

    ``partial`` carries whatever intermediate result was available.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NumericalError(QSBOError, ArithmeticError):
    """A linear system or likelihood is numerically degenerate."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TrainingDivergence(QSBOError, RuntimeError):
    """qGAN training produced a non-finite loss; the trace so far is attached."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
