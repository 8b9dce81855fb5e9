"""Exception types shared across the package.

The CLI maps :class:`PreconditionError` to exit code 2 and
:class:`PromiseViolationError` to exit code 3.
"""


class PreconditionError(ValueError):
    """An input violates a documented precondition."""


class NoNonzeroEigenvalueError(PreconditionError):
    """Every eigenvalue of the matrix lies below the zero threshold."""


class PromiseViolationError(ValueError):
    """A spectral gap or promise assumed by an algorithm does not hold."""


class GapViolationError(PromiseViolationError):
    """Singular values fall inside the forbidden band of a threshold polynomial."""
