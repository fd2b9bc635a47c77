"""Exact linear lumping: schemes, lumped and dual-lumped systems, preservation checks.

A full-row-rank ``M`` (l x n) lumps ``x' = A x + B u`` exactly when some
``A_hat`` satisfies ``A_hat M = M A``. The candidate is always
``A_hat = M A M+`` with ``M+`` the right pseudo-inverse; the residual
``||A_hat M - M A||`` decides exactness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidInputError, NotExactlyLumpableError
from .linalg import as_matrix, inf_norm, rank, right_pseudo_inverse, symmetric_eigen
from .lti import AnalysisReport, LtiSystem, is_controllable, krylov_blocks, pair_report

DEFAULT_EXACT_TOL = 1e-9


def _residual(a_hat: np.ndarray, m: np.ndarray, ma: np.ndarray) -> float:
    return inf_norm(a_hat @ m - ma) / (1.0 + inf_norm(ma))


def lumped_a(a, m) -> tuple[np.ndarray, float]:
    """Lumped state matrix ``M A M+`` and its relative exactness residual.

    The residual is ``||A_hat M - M A||_inf / (1 + ||M A||_inf)``; it is zero
    (to rounding) exactly when the row space of ``M`` is invariant under
    ``A.T``.
    """
    a = as_matrix(a, "A")
    m = as_matrix(m, "M")
    n = a.shape[0]
    if a.shape != (n, n):
        raise InvalidInputError(f"A must be square, got {a.shape}")
    if m.shape[1] != n:
        raise InvalidInputError(f"M must have {n} columns, got {m.shape}")
    p = right_pseudo_inverse(m)
    ma = m @ a
    a_hat = ma @ p
    return as_matrix(a_hat, "A_hat"), _residual(a_hat, m, ma)


@dataclass(frozen=True)
class LumpingScheme:
    m: np.ndarray
    a_hat: np.ndarray
    m_pinv: np.ndarray
    residual: float
    exact_tol: float = DEFAULT_EXACT_TOL

    @property
    def l(self) -> int:
        return self.m.shape[0]

    @property
    def n(self) -> int:
        return self.m.shape[1]


def make_scheme(a, m, exact_tol: float = DEFAULT_EXACT_TOL) -> LumpingScheme:
    """Build a scheme, refusing any ``M`` that is not an exact lumping of ``a``."""
    if not exact_tol > 0:
        raise InvalidInputError(f"exact_tol must be positive, got {exact_tol!r}")
    m = as_matrix(m, "M")
    a_hat, res = lumped_a(a, m)
    if res > exact_tol:
        raise NotExactlyLumpableError(res, exact_tol)
    return LumpingScheme(m, a_hat, right_pseudo_inverse(m), res, exact_tol)


def _normalize_eigenvector(v: np.ndarray) -> np.ndarray:
    # largest |entry| becomes 1 in magnitude, first nonzero entry positive
    v = v / np.max(np.abs(v))
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    if v[nz[0]] < 0:
        v = -v
    # snap rounding noise so integer eigenvectors come out as integers
    snapped = np.round(v)
    return np.where(np.abs(v - snapped) < 1e-12, snapped, v)


def build_m_from_eigenvectors(a, selection: Sequence[int], n_mix=None) -> np.ndarray:
    """``M = N F`` with ``F`` the selected eigenvectors of a symmetric ``a``.

    ``selection`` holds 0-based indices into the eigenpairs sorted by
    ascending eigenvalue. Each selected vector is scaled so its largest
    entry has magnitude 1 and its first nonzero entry is positive; for the
    diffusion chains this yields the integer vectors (1, 1, 1), (1, 0, -1).
    Inside a repeated eigenvalue any orthonormal basis may be returned.
    """
    a = as_matrix(a, "A")
    values, vectors = symmetric_eigen(a)
    n = a.shape[0]
    sel = [int(i) for i in selection]
    if not sel:
        raise InvalidInputError("selection must not be empty")
    if len(set(sel)) != len(sel):
        raise InvalidInputError(f"selection indices must be distinct: {sel}")
    if any(i < 0 or i >= n for i in sel):
        raise InvalidInputError(f"selection indices must lie in [0, {n}): {sel}")
    l = len(sel)
    n_mix = np.eye(l) if n_mix is None else as_matrix(n_mix, "N")
    if n_mix.shape != (l, l):
        raise InvalidInputError(f"N must be {l}x{l}, got {n_mix.shape}")
    nr = rank(n_mix)
    if nr.rank < l:
        raise InvalidInputError(f"N is singular (rank {nr.rank} < {l})")
    f = np.vstack([_normalize_eigenvector(vectors[:, i]) for i in sel])
    return as_matrix(n_mix @ f, "M")


@dataclass(frozen=True)
class LumpedSystem:
    """Forward lumped pair ``(A_hat, M B)`` together with the dual pair ``(A_tilde, M C.T)``.

    No observation matrix is defined for the forward lumped system; its
    observability is judged through the dual pair.
    """

    a: np.ndarray
    b: np.ndarray
    a_dual: np.ndarray
    c_dual: np.ndarray
    dual_residual: float
    exact_tol: float

    @property
    def l(self) -> int:
        return self.a.shape[0]

    def controllability_matrix(self) -> np.ndarray:
        return krylov_blocks(self.a, self.b)

    def is_controllable(self, rel_tol: float | None = None) -> AnalysisReport:
        return pair_report(self.a, self.b, "controllability", rel_tol)

    def is_observable(self, rel_tol: float | None = None) -> AnalysisReport:
        if self.dual_residual > self.exact_tol:
            raise NotExactlyLumpableError(self.dual_residual, self.exact_tol, side="A.T")
        return pair_report(self.a_dual, self.c_dual, "observability", rel_tol)


def _check_scheme_fits(sys: LtiSystem, scheme: LumpingScheme) -> None:
    if scheme.n != sys.n:
        raise InvalidInputError(f"scheme has {scheme.n} columns, system has n={sys.n}")


def lump_system(sys: LtiSystem, scheme: LumpingScheme) -> LumpedSystem:
    _check_scheme_fits(sys, scheme)
    m = scheme.m
    ma_t = m @ sys.a.T
    a_tilde = ma_t @ scheme.m_pinv
    return LumpedSystem(
        a=scheme.a_hat,
        b=as_matrix(m @ sys.b, "MB"),
        a_dual=as_matrix(a_tilde, "A_tilde"),
        c_dual=as_matrix(m @ sys.c.T, "MC^T"),
        dual_residual=_residual(a_tilde, m, ma_t),
        exact_tol=scheme.exact_tol,
    )


def dual_lumped(sys: LtiSystem, scheme: LumpingScheme) -> LtiSystem:
    """Lumping of the dual system: ``(A_tilde, M C.T, (M B).T)``.

    Requires the row space of ``M`` to be invariant under ``A`` as well,
    which always holds for symmetric ``A``.
    """
    lumped = lump_system(sys, scheme)
    if lumped.dual_residual > scheme.exact_tol:
        raise NotExactlyLumpableError(lumped.dual_residual, scheme.exact_tol, side="A.T")
    return LtiSystem(lumped.a_dual, lumped.c_dual, lumped.b.T)


@dataclass(frozen=True)
class KineticCheck:
    ok: bool
    pivots: tuple[int, ...] | None
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def is_kinetic_lumping(m, zero_tol: float = 1e-12) -> KineticCheck:
    """Nonnegative ``M`` in which every row owns a column it alone touches.

    ``pivots[i]`` is the (0-based) column whose only nonzero entry sits in
    row ``i``. Entries with magnitude at most ``zero_tol * max|M|`` count as
    zero.
    """
    m = as_matrix(m, "M")
    scale = float(np.max(np.abs(m)))
    thresh = zero_tol * scale
    if np.any(m < -thresh):
        i, j = np.argwhere(m < -thresh)[0]
        return KineticCheck(False, None, f"negative entry M[{i},{j}] = {m[i, j]!r}")
    nonzero = m > thresh
    sole = nonzero & (nonzero.sum(axis=0) == 1)[None, :]
    pivots = []
    for i in range(m.shape[0]):
        cols = np.flatnonzero(sole[i])
        if cols.size == 0:
            return KineticCheck(False, None, f"row {i} has no column where it is the sole nonzero")
        pivots.append(int(cols[0]))
    return KineticCheck(True, tuple(pivots), "ok")


@dataclass(frozen=True)
class PreservationReport:
    original_controllable: bool
    lumped_controllable: bool
    original_rank: int
    lumped_rank: int
    state_dim: int
    lumped_dim: int

    @property
    def theorem_consistent(self) -> bool:
        return not (self.original_controllable and not self.lumped_controllable)


def verify_preservation(
    sys: LtiSystem, scheme: LumpingScheme, rel_tol: float | None = None
) -> PreservationReport:
    """Controllability verdicts before and after lumping.

    An exact lumping of a controllable system is always controllable, so
    ``theorem_consistent`` being false points at a numerical or software
    fault rather than a counterexample.
    """
    orig = is_controllable(sys, rel_tol)
    lumped = lump_system(sys, scheme).is_controllable(rel_tol)
    return PreservationReport(
        original_controllable=orig.verdict,
        lumped_controllable=lumped.verdict,
        original_rank=orig.rank,
        lumped_rank=lumped.rank,
        state_dim=sys.n,
        lumped_dim=scheme.l,
    )
