"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class HeunSexticError(Exception):
    """Base class for all library errors."""


class DomainError(HeunSexticError):
    """Arguments outside the mathematical domain of an operation."""


class NotQesError(DomainError):
    """Equation parameters do not admit a quasi-exactly solvable reading."""


class UnsupportedError(HeunSexticError):
    """Request is outside the validated scope of the library."""


class SingularRecurrenceError(HeunSexticError):
    """A leading recurrence coefficient R_n vanished; the forward solve is ill posed."""

    def __init__(self, n: int, message: str | None = None):
        self.n = n
        super().__init__(message or f"recurrence coefficient R_{n} is zero")


class ComplexRootsError(HeunSexticError):
    """Fewer real termination-polynomial roots than levels requested."""


class MultipleRootError(HeunSexticError):
    """Termination-polynomial roots too close to separate into distinct levels."""


class ConvergenceFailureError(HeunSexticError):
    """An iterative numerical procedure failed to converge."""


class UnresolvedNodesError(HeunSexticError):
    """Node counting did not stabilize under grid refinement."""


class IncompatibleShapesError(HeunSexticError):
    """Two functions fail to be proportional within tolerance on a shared grid."""


class DomainWarning(UserWarning):
    """Soft warning: results are returned but an assumption looks strained."""
