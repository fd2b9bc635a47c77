"""Dense matrix helpers: toleranced rank, right pseudo-inverse, symmetric eigenpairs.

Matrices are plain ``float64`` numpy arrays. :func:`as_matrix` is the single
entry point that validates shape and finiteness and returns a read-only array,
so values handed around the package cannot be mutated in place.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NotSymmetricError, SingularMatrixError

EPS = float(np.finfo(np.float64).eps)

SYMMETRY_RTOL = 1e-12


def as_matrix(x, name: str = "matrix") -> np.ndarray:
    """Validate ``x`` as a non-empty, finite 2-D real matrix.

    1-D input is rejected rather than silently promoted; callers that mean a
    row or column vector must say so.
    """
    try:
        arr = np.array(x, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}: not a real matrix ({exc})") from None
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D matrix, got ndim={arr.ndim}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInputError(f"{name}: dimension-zero matrix {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or infinite entries")
    arr.flags.writeable = False
    return arr


def inf_norm(m: np.ndarray) -> float:
    """Induced infinity norm (max absolute row sum)."""
    return float(np.max(np.sum(np.abs(m), axis=1))) if m.size else 0.0


@dataclass(frozen=True)
class RankResult:
    rank: int
    singular_values: tuple[float, ...]
    tolerance_used: float

    @property
    def gap(self) -> tuple[float, float] | None:
        """Last singular value kept and first one dropped, when both exist."""
        sv = self.singular_values
        if 0 < self.rank < len(sv):
            return sv[self.rank - 1], sv[self.rank]
        return None

    @property
    def margin(self) -> float:
        """Factor separating the cutoff from the nearest singular value.

        Always at least 1. Values close to 1 mean the decision sits at the
        rounding floor and a tiny perturbation could change the rank; an
        exactly zero matrix and an empty dropped set give ``inf``.
        """
        sv, tol = self.singular_values, self.tolerance_used
        kept = sv[self.rank - 1] / tol if self.rank > 0 else math.inf
        dropped = tol / sv[self.rank] if self.rank < len(sv) and sv[self.rank] > 0 else math.inf
        return min(kept, dropped)


def rank(m, rel_tol: float | None = None) -> RankResult:
    """Numerical rank from the singular values of ``m``.

    The cutoff is ``rel_tol * sigma_max`` with ``rel_tol`` defaulting to
    ``max(rows, cols) * eps``. Singular values strictly above the cutoff
    count. An all-zero matrix has rank 0 and reports ``eps`` as the cutoff.
    """
    m = as_matrix(m)
    if rel_tol is not None and not (0.0 < rel_tol < 1.0):
        raise InvalidInputError(f"rel_tol must lie in (0, 1), got {rel_tol!r}")
    sv = np.linalg.svd(m, compute_uv=False)
    sigma_max = float(sv[0]) if sv.size else 0.0
    if sigma_max == 0.0:
        return RankResult(0, tuple(float(s) for s in sv), EPS)
    if rel_tol is None:
        rel_tol = max(m.shape) * EPS
    tol = rel_tol * sigma_max
    return RankResult(int(np.sum(sv > tol)), tuple(float(s) for s in sv), tol)


def right_pseudo_inverse(m) -> np.ndarray:
    """Return ``M.T @ inv(M @ M.T)`` for a full-row-rank ``M``.

    The Gram matrix is never inverted explicitly; the result is obtained from
    a linear solve against ``M``.
    """
    m = as_matrix(m, "M")
    rows, cols = m.shape
    rr = rank(m)
    if rows > cols or rr.rank < rows:
        raise SingularMatrixError("M must have full row rank", rr.rank, rows)
    gram = m @ m.T
    # gram is symmetric, so solve(gram, M).T == M.T @ inv(gram)
    p = np.linalg.solve(gram, m).T
    return as_matrix(p, "pseudo-inverse")


def _check_symmetric(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got {m.shape}")
    asym = float(np.max(np.abs(m - m.T)))
    limit = SYMMETRY_RTOL * inf_norm(m)
    if asym > limit:
        raise NotSymmetricError(asym, limit)


def symmetric_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (as columns)."""
    m = as_matrix(m)
    _check_symmetric(m)
    values, vectors = np.linalg.eigh(0.5 * (m + m.T))
    values.flags.writeable = False
    vectors.flags.writeable = False
    return values, vectors


def spectral_radius_symmetric(m) -> float:
    values, _ = symmetric_eigen(m)
    return float(np.max(np.abs(values)))
