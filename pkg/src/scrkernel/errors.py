"""Exception hierarchy shared by all modules."""


class ScrKernelError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(ScrKernelError, ValueError):
    """Shapes, lengths or basic structure of an argument are wrong."""


class ConvergenceError(ScrKernelError, RuntimeError):
    """An iterative routine hit its iteration cap.

    The last residual is kept on ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(ScrKernelError, ArithmeticError):
    """A linear system has no unique solution."""


class DataError(ScrKernelError, ValueError):
    """Input data is non-finite, unparsable or too short."""


class ColumnError(DataError, KeyError):
    """A requested CSV column does not exist."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class PreconditionError(ScrKernelError, ValueError):
    """An operation was called outside the regime it is defined for."""


class StructureViolation(ScrKernelError):
    """A motif basis does not have the symmetry the theory predicts."""


class ResourceError(ScrKernelError, MemoryError):
    """A dense construction would exceed the configured size guard."""


class AmbiguityError(ScrKernelError):
    """A motif cannot be assigned to a single frequency."""
