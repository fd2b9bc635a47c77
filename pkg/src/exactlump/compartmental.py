"""Diffusion chains ``X1 <-> X2 <-> ... <-> Xn`` with a uniform rate constant.

The chain is the induced kinetic (mass-action) equation of the reversible
first-order reactions between neighbours. Its state matrix is tridiagonal
with ``-k`` at both ends of the diagonal and ``-2k`` inside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .linalg import as_matrix
from .lti import LtiSystem


@dataclass(frozen=True)
class ChainSpec:
    n: int
    k: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidInputError(f"chain needs n >= 2 species, got {self.n!r}")
        if not (np.isfinite(self.k) and self.k > 0):
            raise InvalidInputError(f"rate constant must be positive, got {self.k!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", float(self.k))


def species_labels(n: int) -> tuple[str, ...]:
    return tuple(f"X{i + 1}" for i in range(n))


def chain_matrix(spec: ChainSpec) -> np.ndarray:
    n, k = spec.n, spec.k
    a = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx, idx + 1] = k
    a[idx + 1, idx] = k
    a[np.arange(n), np.arange(n)] = -2.0 * k
    a[0, 0] = a[-1, -1] = -k
    return as_matrix(a, "A")


def gen_chain(spec: ChainSpec, b=None, c=None) -> LtiSystem:
    """Chain system with ``B = C = I`` unless the caller supplies them."""
    n = spec.n
    return LtiSystem(
        chain_matrix(spec),
        np.eye(n) if b is None else b,
        np.eye(n) if c is None else c,
        species_labels(n),
    )


def chain_spectrum(spec: ChainSpec) -> np.ndarray:
    """Closed-form eigenvalues ``-4k sin^2((h-1) pi / 2n)``, ascending."""
    h = np.arange(1, spec.n + 1)
    vals = -4.0 * spec.k * np.sin((h - 1) * np.pi / (2 * spec.n)) ** 2
    return np.sort(vals)


def chain_eigenvectors(spec: ChainSpec) -> np.ndarray:
    """Orthonormal eigenvectors as rows.

    Row ``eta`` (0-based) is ``sqrt(2/n) cos((2q-1) eta pi / 2n)``, with the
    constant row ``1/sqrt(n)`` first, and belongs to the eigenvalue
    ``-4k sin^2(eta pi / 2n)``. Rows thus run from eigenvalue 0 downwards.
    """
    n = spec.n
    q = np.arange(1, n + 1)
    eta = np.arange(n)[:, None]
    f = np.sqrt(2.0 / n) * np.cos((2 * q - 1) * eta * np.pi / (2 * n))
    f[0] = 1.0 / np.sqrt(n)
    # first entry is cos(eta pi / 2n) > 0 for eta < n, so rows are already
    # sign-normalized; kept explicit in case the formula is changed
    signs = np.sign(f[np.arange(n), np.argmax(np.abs(f) > 1e-12, axis=1)])
    return as_matrix(f * signs[:, None], "F")


def standard_two_row_m(n: int) -> np.ndarray:
    """Integer two-row kinetic lumping matrix for the chain of length ``n``.

    ``n = 3`` gives ``[[2,1,0],[0,1,2]]``. For even ``n`` the rows are
    ``1 + f`` and ``1 - f`` where ``f`` repeats ``(-1, 1, 1, -1)``, an
    eigenvector of the chain with eigenvalue ``-2k``.

    The lumped matrix is ``[[-k/2, k/2], [k/2, -k/2]]`` for ``n = 3`` and
    ``[[-k, k], [k, -k]]`` for every even ``n``, so the two lumped species
    exchange at rate ``k / 2`` and ``k`` respectively.
    """
    if n == 3:
        return as_matrix([[2.0, 1.0, 0.0], [0.0, 1.0, 2.0]], "M")
    if n < 2 or n % 2:
        raise InvalidInputError(
            f"no standard two-row lumping for n={n}; supported: n = 3, "
            "n = 4*theta (theta >= 1) and n = 4*theta + 2 (theta >= 0)"
        )
    f = np.resize([-1.0, 1.0, 1.0, -1.0], n)
    return as_matrix(np.vstack([1.0 + f, 1.0 - f]), "M")


@dataclass(frozen=True)
class Reaction:
    source: int
    target: int
    rate: float


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple[str, ...]
    reactions: tuple[Reaction, ...]

    def __post_init__(self):
        species = tuple(self.species)
        reactions = tuple(r if isinstance(r, Reaction) else Reaction(*r) for r in self.reactions)
        ns = len(species)
        if ns == 0:
            raise InvalidInputError("network needs at least one species")
        for r in reactions:
            if not (0 <= r.source < ns and 0 <= r.target < ns):
                raise InvalidInputError(f"reaction {r} refers to an unknown species")
            if r.source == r.target:
                raise InvalidInputError(f"self-loop reaction {r} is not allowed")
            if not (np.isfinite(r.rate) and r.rate > 0):
                raise InvalidInputError(f"reaction {r} needs a positive rate")
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "reactions", reactions)


def network_to_system(net: ReactionNetwork, b=None, c=None) -> LtiSystem:
    """Induced kinetic equation of a first-order network."""
    ns = len(net.species)
    a = np.zeros((ns, ns))
    for r in net.reactions:
        a[r.target, r.source] += r.rate
        a[r.source, r.source] -= r.rate
    return LtiSystem(
        a,
        np.eye(ns) if b is None else b,
        np.eye(ns) if c is None else c,
        net.species,
    )


def chain_to_network(spec: ChainSpec) -> ReactionNetwork:
    reactions = []
    for i in range(spec.n - 1):
        reactions.append(Reaction(i, i + 1, spec.k))
        reactions.append(Reaction(i + 1, i, spec.k))
    return ReactionNetwork(species_labels(spec.n), tuple(reactions))
