"""Exception types shared across the package."""

from __future__ import annotations


class MultipointError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MultipointError):
    """Input violates a documented precondition or invariant.

    Carries ``residual`` when the violation is quantitative (e.g. the
    unitarity defect of a matrix that was supposed to be unitary).
    """

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class GridMismatchError(ValidationError):
    """Two sampled functions do not live on the same grid."""


class ConvergenceError(MultipointError):
    """An iterative kernel failed to converge; ``residual`` holds the last defect."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class SingularMatrixError(MultipointError):
    """A linear solve hit a pivot below the singularity threshold."""

    def __init__(self, message: str, pivot: float | None = None):
        super().__init__(message)
        self.pivot = pivot


class PointSpectrumError(MultipointError):
    """The inner boundary solve is singular: lambda sits in the point spectrum.

    ``nearest`` holds the closest spectrum entry when one could be located.
    """

    def __init__(self, message: str, lam: float, nearest=None):
        super().__init__(message)
        self.lam = lam
        self.nearest = nearest
