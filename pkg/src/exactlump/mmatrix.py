"""Splitting ``A = -s (I - T)`` and M-matrix classification.

Only the restricted notion is implemented: ``T`` must be nonnegative,
symmetric and irreducible, and ``A`` is an M-matrix when the spectral radius
of ``T`` is at most one (singular when it equals one).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DecompositionError, InvalidInputError
from .linalg import SYMMETRY_RTOL, as_matrix, inf_norm, spectral_radius_symmetric

RHO_TOL = 1e-9
PATTERN_RTOL = 1e-12
POWER_TOL = 1e-10


class Classification(str, enum.Enum):
    NOT_APPLICABLE = "NotApplicable"
    SINGULAR = "SingularMMatrix"
    NONSINGULAR = "NonsingularMMatrix"


def _square(a) -> np.ndarray:
    a = as_matrix(a, "A")
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"A must be square, got {a.shape}")
    return a


def decompose_with_s(a, s: float) -> tuple[float, np.ndarray]:
    a = _square(a)
    if not s > 0:
        raise DecompositionError(f"s must be positive, got {s!r}")
    t = np.eye(a.shape[0]) + a / s
    return float(s), as_matrix(t, "T")


def decompose(a) -> tuple[float, np.ndarray]:
    """Canonical splitting with ``s = max |a_ii|`` and ``T = I + A / s``."""
    a = _square(a)
    diag = np.diag(a)
    if not np.any(diag < 0):
        raise DecompositionError("A needs at least one strictly negative diagonal entry")
    return decompose_with_s(a, float(np.max(np.abs(diag))))


def is_irreducible(t, rtol: float = PATTERN_RTOL) -> bool:
    """Strong connectivity of the directed graph of nonzero entries."""
    t = np.asarray(t)
    if t.shape[0] == 1:
        return True
    pattern = np.abs(t) > rtol * inf_norm(t)
    ncomp, _ = connected_components(pattern.astype(np.int8), directed=True, connection="strong")
    return ncomp == 1


def spectral_radius_nonnegative(t, tol: float = POWER_TOL, max_iter: int = 200_000) -> float:
    """Spectral radius of ``|T|`` by power iteration.

    Iterates on ``I + |T|``, which is primitive whenever ``|T|`` is
    irreducible, and stops when the Collatz-Wielandt bounds agree to ``tol``.
    """
    t = np.abs(np.asarray(t, dtype=np.float64))
    shifted = t + np.eye(t.shape[0])
    x = np.ones(t.shape[0])
    lo = hi = 1.0
    for _ in range(max_iter):
        y = shifted @ x
        pos = x > 0
        ratios = y[pos] / x[pos]
        lo, hi = float(ratios.min()), float(ratios.max())
        if hi - lo <= tol * max(1.0, hi):
            break
        x = y / np.max(y)
    return max(0.5 * (lo + hi) - 1.0, 0.0)


@dataclass(frozen=True)
class MMatrixReport:
    s: float | None
    t: np.ndarray | None
    t_nonnegative: bool
    t_symmetric: bool
    t_irreducible: bool
    rho: float
    classification: Classification
    reason: str = ""


def classify(a, s_override: float | None = None) -> MMatrixReport:
    """Classify ``a`` as a singular/nonsingular M-matrix or NotApplicable."""
    a = _square(a)
    try:
        s, t = decompose(a) if s_override is None else decompose_with_s(a, s_override)
    except DecompositionError as exc:
        return MMatrixReport(None, None, False, False, False, float("nan"),
                             Classification.NOT_APPLICABLE, str(exc))

    scale = inf_norm(t)
    nonneg = bool(np.all(t >= -PATTERN_RTOL * scale))
    symmetric = bool(np.max(np.abs(t - t.T)) <= SYMMETRY_RTOL * scale)
    irreducible = is_irreducible(t)
    if symmetric:
        rho = spectral_radius_symmetric(0.5 * (t + t.T))
    else:
        rho = spectral_radius_nonnegative(t)

    reasons = []
    if not nonneg:
        reasons.append("T has negative entries")
    if not symmetric:
        reasons.append("T is not symmetric")
    if not irreducible:
        reasons.append("T is reducible")
    if reasons:
        cls = Classification.NOT_APPLICABLE
    elif abs(rho - 1.0) <= RHO_TOL:
        cls = Classification.SINGULAR
    elif rho < 1.0 - RHO_TOL:
        cls = Classification.NONSINGULAR
    else:
        cls = Classification.NOT_APPLICABLE
        reasons.append(f"spectral radius {rho:.12g} exceeds 1")
    return MMatrixReport(s, t, nonneg, symmetric, irreducible, rho, cls, "; ".join(reasons))


def is_compartmental(a, rtol: float = 1e-12, atol: float = 0.0) -> bool:
    """Off-diagonal entries nonnegative and every column sum nonpositive.

    Both tests allow a slack of ``max(rtol * ||a||_inf, atol)``; pass ``atol``
    when ``a`` was derived from a larger matrix and carries its rounding noise.
    """
    a = _square(a)
    tol = max(rtol * inf_norm(a), atol)
    off = a - np.diag(np.diag(a))
    if np.any(off < -tol):
        return False
    return bool(np.all(a.sum(axis=0) <= tol))
