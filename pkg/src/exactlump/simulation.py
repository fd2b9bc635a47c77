"""Fixed-step RK4 trajectories and minimum-energy steering.

Controls are piecewise constant. Within one integration step the control is
frozen at its value at the step midpoint, which is exact whenever the
control breakpoints lie on the integration grid.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import IO

import numpy as np
from scipy.linalg import expm

from .errors import IllConditionedError, InvalidInputError, NotControllableError
from .linalg import as_matrix, inf_norm
from .lti import LtiSystem, coerce_vector, is_controllable
from .lumping import LumpingScheme, lumped_a

GRAMIAN_COND_LIMIT = 1e12


@dataclass(frozen=True)
class ControlSignal:
    """Value ``values[i]`` is held on ``[times[i], times[i+1])``.

    With ``times=None`` the single row of ``values`` is held forever. Outside
    the time grid the first/last value is held.
    """

    times: np.ndarray | None
    values: np.ndarray

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=np.float64))
        if self.times is None:
            if values.shape[0] != 1:
                raise InvalidInputError("a constant control has exactly one value row")
            times = None
        else:
            times = np.asarray(self.times, dtype=np.float64).reshape(-1)
            if times.size != values.shape[0] + 1:
                raise InvalidInputError(
                    f"need len(times) == len(values) + 1, got {times.size} and {values.shape[0]}"
                )
            if np.any(np.diff(times) <= 0):
                raise InvalidInputError("control times must be strictly ascending")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("control values must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, r: int) -> "ControlSignal":
        return cls(None, np.zeros((1, r)))

    @classmethod
    def constant(cls, value) -> "ControlSignal":
        return cls(None, np.asarray(value, dtype=np.float64).reshape(1, -1))

    @property
    def r(self) -> int:
        return self.values.shape[1]

    def at(self, t: float) -> np.ndarray:
        if self.times is None:
            return self.values[0]
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.values[min(max(i, 0), self.values.shape[0] - 1)]


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def write_csv(self, fh: IO[str]) -> None:
        """Header ``t,x1,...,xn`` and one row per time point, 17 significant digits."""
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + [f"x{i + 1}" for i in range(self.states.shape[1])])
        for t, x in zip(self.times, self.states):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in x])


def _grid(t_end: float, dt: float) -> np.ndarray:
    if not (t_end > 0 and dt > 0):
        raise InvalidInputError(f"t_end and dt must be positive, got {t_end!r}, {dt!r}")
    if dt > t_end:
        raise InvalidInputError(f"dt={dt!r} exceeds t_end={t_end!r}")
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    return np.linspace(0.0, t_end, steps + 1)


def integrate(a, b, x0, u: ControlSignal | None, t_end: float, dt: float) -> Trajectory:
    """Classical RK4 for ``x' = a x + b u``.

    The step is shrunk so that a whole number of steps ends exactly at
    ``t_end``.
    """
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    n, r = b.shape
    if a.shape != (n, n):
        raise InvalidInputError(f"A is {a.shape} but B has {n} rows")
    x = coerce_vector(x0, n, "x0")
    if u is None:
        u = ControlSignal.zero(r)
    if u.r != r:
        raise InvalidInputError(f"control has {u.r} channels, B expects {r}")
    times = _grid(t_end, dt)
    h = float(times[1] - times[0])
    if h * inf_norm(a) > 0.5:
        warnings.warn(f"step {h:g} is large for ||A||={inf_norm(a):g}; RK4 accuracy may suffer")

    states = np.empty((times.size, n))
    states[0] = x
    for i in range(times.size - 1):
        bu = b @ u.at(times[i] + 0.5 * h)
        k1 = a @ x + bu
        k2 = a @ (x + 0.5 * h * k1) + bu
        k3 = a @ (x + 0.5 * h * k2) + bu
        k4 = a @ (x + h * k3) + bu
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[i + 1] = x
    times.flags.writeable = False
    states.flags.writeable = False
    return Trajectory(times, states)


def simulate(sys: LtiSystem, x0, u: ControlSignal | None = None, t_end: float = 1.0,
             dt: float = 1e-3) -> Trajectory:
    return integrate(sys.a, sys.b, x0, u, t_end, dt)


def projection_discrepancy(sys: LtiSystem, m, x0, u=None, t_end=1.0, dt=1e-3, a_hat=None) -> float:
    """``max_t ||M x(t) - xhat(t)||_inf`` for full versus reduced dynamics.

    ``xhat`` solves ``xhat' = a_hat xhat + M B u`` from ``M x0``. When
    ``a_hat`` is omitted, ``M A M+`` is used without any exactness check, so
    this also quantifies how badly a non-exact ``M`` fails.
    """
    m = as_matrix(m, "M")
    if a_hat is None:
        a_hat, _ = lumped_a(sys.a, m)
    x0 = coerce_vector(x0, sys.n, "x0")
    full = simulate(sys, x0, u, t_end, dt)
    reduced = integrate(a_hat, m @ sys.b, m @ x0, u, t_end, dt)
    return float(np.max(np.abs(full.states @ m.T - reduced.states)))


def lumped_trajectory_check(sys: LtiSystem, scheme: LumpingScheme, x0, u=None,
                            t_end=1.0, dt=1e-3) -> float:
    return projection_discrepancy(sys, scheme.m, x0, u, t_end, dt, a_hat=scheme.a_hat)


def controllability_gramian(a, b, t1: float, steps: int) -> np.ndarray:
    """Composite midpoint rule for ``int_0^t1 e^{A s} B B^T e^{A^T s} ds``."""
    h = t1 / steps
    w = np.zeros((a.shape[0], a.shape[0]))
    for i in range(steps):
        g = expm(a * (t1 - (i + 0.5) * h)) @ b
        w += g @ g.T
    return w * h


def steer(sys: LtiSystem, x0, x1, t1: float, steps: int = 400,
          rel_tol: float | None = None) -> ControlSignal:
    """Minimum-energy control taking ``x0`` to ``x1`` in time ``t1``.

    ``u(t) = B^T e^{A^T (t1 - t)} W^{-1} (x1 - e^{A t1} x0)`` with ``W`` the
    finite-horizon Gramian, sampled at the midpoint of each of ``steps``
    panels and held piecewise constant.
    """
    report = is_controllable(sys, rel_tol)
    if not report.verdict:
        raise NotControllableError(report)
    if not t1 > 0 or int(steps) < 1:
        raise InvalidInputError(f"need t1 > 0 and steps >= 1, got {t1!r}, {steps!r}")
    steps = int(steps)
    x0 = coerce_vector(x0, sys.n, "x0")
    x1 = coerce_vector(x1, sys.n, "x1")
    a, b = sys.a, sys.b

    w = controllability_gramian(a, b, t1, steps)
    cond = float(np.linalg.cond(w))
    if not cond <= GRAMIAN_COND_LIMIT:
        raise IllConditionedError(cond, GRAMIAN_COND_LIMIT)
    lam = np.linalg.solve(w, x1 - expm(a * t1) @ x0)

    h = t1 / steps
    values = np.empty((steps, sys.r))
    for i in range(steps):
        values[i] = b.T @ expm(a.T * (t1 - (i + 0.5) * h)) @ lam
    return ControlSignal(np.linspace(0.0, t1, steps + 1), values)
