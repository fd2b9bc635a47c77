"""State-space data model, Kalman rank tests and the dual system."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidInputError
from .linalg import RankResult, as_matrix, rank


@dataclass(frozen=True)
class LtiSystem:
    """``x' = A x + B u``, ``y = C x`` with ``A`` n x n, ``B`` n x r, ``C`` p x n."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    labels: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        a = as_matrix(self.a, "A")
        b = as_matrix(self.b, "B")
        c = as_matrix(self.c, "C")
        n = a.shape[0]
        if a.shape != (n, n):
            raise InvalidInputError(f"A must be square, got {a.shape}")
        if b.shape[0] != n:
            raise InvalidInputError(f"B must have {n} rows, got {b.shape}")
        if c.shape[1] != n:
            raise InvalidInputError(f"C must have {n} columns, got {c.shape}")
        labels = None if self.labels is None else tuple(str(s) for s in self.labels)
        if labels is not None and len(labels) != n:
            raise InvalidInputError(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def r(self) -> int:
        return self.b.shape[1]

    @property
    def p(self) -> int:
        return self.c.shape[0]

    def with_matrices(self, a=None, b=None, c=None) -> "LtiSystem":
        return LtiSystem(
            self.a if a is None else a,
            self.b if b is None else b,
            self.c if c is None else c,
            self.labels,
        )

    def __eq__(self, other):
        if not isinstance(other, LtiSystem):
            return NotImplemented
        return (
            np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.c, other.c)
            and self.labels == other.labels
        )

    __hash__ = None


@dataclass(frozen=True)
class AnalysisReport:
    kind: Literal["controllability", "observability"]
    test_matrix_dims: tuple[int, int]
    rank_result: RankResult
    state_dim: int

    @property
    def verdict(self) -> bool:
        return self.rank_result.rank == self.state_dim

    @property
    def rank(self) -> int:
        return self.rank_result.rank


def krylov_blocks(a, b, blocks: int | None = None) -> np.ndarray:
    """``[b | a b | ... | a^(blocks-1) b]``, built by repeated multiplication.

    ``blocks`` defaults to the state dimension.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if blocks is None:
        blocks = a.shape[0]
    out = [b]
    for _ in range(blocks - 1):
        out.append(a @ out[-1])
    return np.hstack(out)


def controllability_matrix(sys: LtiSystem) -> np.ndarray:
    return as_matrix(krylov_blocks(sys.a, sys.b), "W_AB")


def observability_matrix(sys: LtiSystem) -> np.ndarray:
    """``[C.T | A.T C.T | ... | (A.T)^(n-1) C.T]``, an n x (p n) matrix."""
    return as_matrix(krylov_blocks(sys.a.T, sys.c.T), "V_CA")


def pair_report(a, b, kind="controllability", rel_tol: float | None = None) -> AnalysisReport:
    """Rank report of the Krylov matrix of an arbitrary ``(a, b)`` pair."""
    w = krylov_blocks(a, b)
    return AnalysisReport(kind, w.shape, rank(w, rel_tol), np.shape(a)[0])


def is_controllable(sys: LtiSystem, rel_tol: float | None = None) -> AnalysisReport:
    w = controllability_matrix(sys)
    return AnalysisReport("controllability", w.shape, rank(w, rel_tol), sys.n)


def is_observable(sys: LtiSystem, rel_tol: float | None = None) -> AnalysisReport:
    v = observability_matrix(sys)
    return AnalysisReport("observability", v.shape, rank(v, rel_tol), sys.n)


def dual(sys: LtiSystem) -> LtiSystem:
    """The system ``(A.T, C.T, B.T)``; observability of ``sys`` is its controllability."""
    return LtiSystem(sys.a.T, sys.c.T, sys.b.T, sys.labels)


def coerce_vector(x: Sequence[float] | np.ndarray, n: int, name: str = "vector") -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(-1)
    if v.shape != (n,):
        raise InvalidInputError(f"{name}: expected length {n}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name}: contains NaN or infinite entries")
    return v
