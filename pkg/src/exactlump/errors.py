"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class LumpingError(Exception):
    """Base class for all errors raised by exactlump."""


class InvalidInputError(LumpingError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad arguments."""


class SingularMatrixError(LumpingError):
    """A matrix that must have full row rank does not."""

    def __init__(self, message: str, rank: int, expected: int):
        super().__init__(f"{message} (rank {rank}, expected {expected})")
        self.rank = rank
        self.expected = expected


class NotSymmetricError(InvalidInputError):
    def __init__(self, asymmetry: float, limit: float):
        super().__init__(
            f"matrix is not symmetric: max |m - m.T| = {asymmetry:.3e} > {limit:.3e}"
        )
        self.asymmetry = asymmetry
        self.limit = limit


class NotExactlyLumpableError(LumpingError):
    """The row space of M is not invariant, so no exact lumped matrix exists."""

    def __init__(self, residual: float, tolerance: float, side: str = "A"):
        super().__init__(
            f"M is not an exact lumping of {side}: residual {residual:.3e} "
            f"exceeds tolerance {tolerance:.3e}"
        )
        self.residual = residual
        self.tolerance = tolerance
        self.side = side


class DecompositionError(LumpingError):
    """A = -s(I - T) cannot be formed for the given matrix."""


class NotControllableError(LumpingError):
    def __init__(self, report):
        rr = report.rank_result
        super().__init__(
            f"system is not completely controllable: rank {rr.rank}/{report.state_dim} "
            f"(tol {rr.tolerance_used:.3e})"
        )
        self.report = report


class IllConditionedError(LumpingError):
    def __init__(self, condition: float, limit: float):
        super().__init__(
            f"controllability Gramian condition number {condition:.3e} exceeds {limit:.1e}"
        )
        self.condition = condition
        self.limit = limit
