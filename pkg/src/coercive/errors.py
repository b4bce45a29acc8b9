"""Exception types shared across the package.

Errors that abort an iteration mid-flight (:class:`MaxIterationsExceeded`,
:class:`BudgetExceeded`) carry the partial report produced so far in their
``report`` attribute.
"""


class CoerciveError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(CoerciveError):
    """Operand length does not match the space dimension."""


class NotSymmetric(CoerciveError):
    """Gram matrix is not bit-exact symmetric."""


class NotPositiveDefinite(CoerciveError):
    """Cholesky factorization failed (a pivot was not positive)."""


class DegenerateSample(CoerciveError):
    """Random sampling kept producing coincident pairs."""


class NotAContraction(CoerciveError):
    """The claimed Lipschitz constant is not below one."""


class InvalidContraction(CoerciveError):
    """Contraction parameters outside their valid range."""


class MaxIterationsExceeded(CoerciveError):
    """Fixed-point iteration ran out of budget; ``report`` holds partial state."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BudgetExceeded(CoerciveError):
    """Minimizing sequence ran out of steps; ``report`` holds partial state."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RankDeficientBasis(CoerciveError):
    """Spanning columns are linearly dependent in the ambient geometry."""


class NotCoercive(CoerciveError):
    """Coercivity constant is not positive."""


class InconsistentConstants(CoerciveError):
    """Supplied coercivity constant exceeds the continuity constant."""


class RhoOutOfRange(CoerciveError):
    """Relaxation parameter outside the admissible open interval."""


class SingularSystem(CoerciveError):
    """Direct linear solve hit a singular matrix."""


class MeshInvalid(CoerciveError):
    """1D mesh nodes are not strictly increasing on [0, 1]."""


class UnknownCase(CoerciveError):
    """Unknown manufactured-solution identifier."""
