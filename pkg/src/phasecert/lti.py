"""Real LTI state-space algebra.

Continuous-time models ``G(s) = C (sI - A)^{-1} B + D`` with real matrices.
``n = 0`` states encodes a static gain. All operations return new models;
instances are treated as immutable and are safe to evaluate concurrently.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .errors import IllPosedLoopError, SingularResolventError

__all__ = [
    "StateSpaceModel",
    "FrequencyGrid",
    "StabilityResult",
    "static_gain",
    "integrator",
    "series",
    "parallel",
    "add",
    "feedback",
    "inverse",
    "block_diag",
    "left_multiply",
    "right_multiply",
    "times_s",
    "rotate_ports",
    "is_stable",
]

#: tolerance on eigenvalue real parts used by stability tests
STABILITY_RTOL = 1e-9


def _as_matrix(M, rows=None, cols=None):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if rows is not None and M.shape[0] != rows:
        raise ValueError(f"expected {rows} rows, got {M.shape[0]}")
    if cols is not None and M.shape[1] != cols:
        raise ValueError(f"expected {cols} columns, got {M.shape[1]}")
    return M


class StateSpaceModel:
    """State-space realization (A, B, C, D) of a real LTI system.

    Parameters
    ----------
    A : (n, n) array_like
        State matrix. ``n = 0`` is allowed and encodes a static gain.
    B : (n, m) array_like
    C : (p, n) array_like
    D : (p, m) array_like
    """

    __slots__ = ("A", "B", "C", "D")

    def __init__(self, A, B, C, D):
        A = np.asarray(A, dtype=float)
        A = A.reshape(0, 0) if A.size == 0 else np.atleast_2d(A)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("A must be square")
        D = _as_matrix(D)
        p, m = D.shape
        B = np.asarray(B, dtype=float).reshape(n, m) if n else np.zeros((0, m))
        C = np.asarray(C, dtype=float).reshape(p, n) if n else np.zeros((p, 0))
        self.A, self.B, self.C, self.D = A, B, C, D

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.D.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.D.shape[0]

    def __repr__(self):
        return (
            f"StateSpaceModel(n={self.n_states}, "
            f"inputs={self.n_inputs}, outputs={self.n_outputs})"
        )

    def evaluate(self, s: complex) -> np.ndarray:
        """Frequency response ``C (sI - A)^{-1} B + D`` at a single point.

        Raises
        ------
        SingularResolventError
            If ``s`` is (numerically) an eigenvalue of ``A``.
        """
        if self.n_states == 0:
            return self.D.astype(complex)
        M = s * np.eye(self.n_states) - self.A
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                X = scipy.linalg.lu_solve(scipy.linalg.lu_factor(M), self.B)
        except (scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError) as exc:
            raise SingularResolventError(f"s = {s} is a pole of the model") from exc
        if not np.all(np.isfinite(X)):
            raise SingularResolventError(f"s = {s} is (numerically) a pole of the model")
        return self.C @ X + self.D

    def frequency_response(self, omegas: Sequence[float]) -> np.ndarray:
        """Stack of responses at ``s = j*omega`` for each omega in rad/s."""
        return np.stack([self.evaluate(1j * w) for w in np.asarray(omegas, float)])

    def poles(self) -> np.ndarray:
        return np.linalg.eigvals(self.A) if self.n_states else np.array([])


def static_gain(D) -> StateSpaceModel:
    """Zero-state model realizing a constant matrix gain."""
    D = _as_matrix(D)
    return StateSpaceModel(np.zeros((0, 0)), np.zeros((0, D.shape[1])), np.zeros((D.shape[0], 0)), D)


def identity(size: int) -> StateSpaceModel:
    return static_gain(np.eye(size))


def integrator(size: int = 1, gain: float = 1.0) -> StateSpaceModel:
    """``gain / s`` on each of ``size`` channels."""
    I = np.eye(size)
    return StateSpaceModel(np.zeros((size, size)), I, gain * I, np.zeros((size, size)))


def series(first: StateSpaceModel, second: StateSpaceModel) -> StateSpaceModel:
    """Cascade ``u -> first -> second -> y``, i.e. ``second(s) @ first(s)``."""
    if second.n_inputs != first.n_outputs:
        raise ValueError("series: dimension mismatch")
    n1, n2 = first.n_states, second.n_states
    A = np.block(
        [
            [first.A, np.zeros((n1, n2))],
            [second.B @ first.C, second.A],
        ]
    ) if n1 + n2 else np.zeros((0, 0))
    B = np.vstack([first.B, second.B @ first.D])
    C = np.hstack([second.D @ first.C, second.C])
    D = second.D @ first.D
    return StateSpaceModel(A, B, C, D)


def parallel(g1: StateSpaceModel, g2: StateSpaceModel) -> StateSpaceModel:
    """Sum of responses ``g1(s) + g2(s)`` (shared input, added outputs)."""
    if g1.n_inputs != g2.n_inputs or g1.n_outputs != g2.n_outputs:
        raise ValueError("parallel: dimension mismatch")
    A = scipy.linalg.block_diag(g1.A, g2.A)
    B = np.vstack([g1.B, g2.B])
    C = np.hstack([g1.C, g2.C])
    return StateSpaceModel(A, B, C, g1.D + g2.D)


add = parallel


def block_diag(models: Sequence[StateSpaceModel]) -> StateSpaceModel:
    """Block-diagonal aggregation: stacked inputs and outputs, no coupling."""
    A = scipy.linalg.block_diag(*[g.A for g in models])
    B = scipy.linalg.block_diag(*[g.B for g in models])
    C = scipy.linalg.block_diag(*[g.C for g in models])
    D = scipy.linalg.block_diag(*[g.D for g in models])
    return StateSpaceModel(A, B, C, D)


def left_multiply(M, g: StateSpaceModel) -> StateSpaceModel:
    """Constant pre-multiplication ``M @ g(s)``."""
    M = _as_matrix(M, cols=g.n_outputs)
    return StateSpaceModel(g.A, g.B, M @ g.C, M @ g.D)


def right_multiply(g: StateSpaceModel, M) -> StateSpaceModel:
    """Constant post-multiplication ``g(s) @ M``."""
    M = _as_matrix(M, rows=g.n_inputs)
    return StateSpaceModel(g.A, g.B @ M, g.C, g.D @ M)


def times_s(g: StateSpaceModel, tol: float = 1e-12) -> StateSpaceModel:
    """Realization of ``s * g(s)`` for strictly proper ``g``.

    Uses ``s (sI-A)^{-1} = I + A (sI-A)^{-1}``, so the result is
    ``(A, B, C A, C B)``; requires ``D = 0``.
    """
    scale = max(np.abs(g.C).max() if g.C.size else 0.0, 1.0)
    if g.D.size and np.abs(g.D).max() > tol * scale:
        raise ValueError("times_s requires a strictly proper model (D = 0)")
    return StateSpaceModel(g.A, g.B, g.C @ g.A, g.C @ g.B)


def feedback(plant: StateSpaceModel, controller: StateSpaceModel, sign: int = -1) -> StateSpaceModel:
    """Closed loop ``r -> y`` of the standard two-block feedback system.

    The plant output feeds the controller, whose output re-enters the plant
    input with the given sign: ``u = r + sign * controller(y)``. For the
    default negative feedback the transfer is ``P (I + K P)^{-1}``.

    Raises
    ------
    IllPosedLoopError
        If ``I - sign * D1 D2`` is singular (algebraic loop ill-posed).
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    P, K = plant, controller
    if P.n_outputs != K.n_inputs or K.n_outputs != P.n_inputs:
        raise ValueError("feedback: dimension mismatch")
    E = np.eye(P.n_outputs) - sign * (P.D @ K.D)
    cond = np.linalg.cond(E)
    if not np.isfinite(cond) or cond > 1e12:
        raise IllPosedLoopError("direct-feedthrough loop matrix is singular")
    Einv = np.linalg.inv(E)
    n1, n2 = P.n_states, K.n_states
    # y = Einv @ (C1 x1 + sign D1 C2 x2 + D1 r)
    Y_x1 = Einv @ P.C
    Y_x2 = sign * Einv @ (P.D @ K.C)
    Y_r = Einv @ P.D
    # u = r + sign C2 x2 + sign D2 y
    U_x1 = sign * K.D @ Y_x1
    U_x2 = sign * K.C + sign * K.D @ Y_x2
    U_r = np.eye(P.n_inputs) + sign * K.D @ Y_r
    A = np.block(
        [
            [P.A + P.B @ U_x1, P.B @ U_x2],
            [K.B @ Y_x1, K.A + K.B @ Y_x2],
        ]
    ) if n1 + n2 else np.zeros((0, 0))
    B = np.vstack([P.B @ U_r, K.B @ Y_r])
    return StateSpaceModel(A, B, np.hstack([Y_x1, Y_x2]), Y_r)


def inverse(g: StateSpaceModel) -> StateSpaceModel:
    """Inverse system ``g(s)^{-1}``; requires square invertible ``D``."""
    if g.n_inputs != g.n_outputs:
        raise ValueError("inverse requires a square system")
    D = g.D
    cond = np.linalg.cond(D) if D.size else np.inf
    if not np.isfinite(cond) or cond > 1e12:
        raise IllPosedLoopError("inverse requires invertible feedthrough D")
    Dinv = np.linalg.inv(D)
    return StateSpaceModel(g.A - g.B @ Dinv @ g.C, g.B @ Dinv, -Dinv @ g.C, Dinv)


def rotate_ports(g: StateSpaceModel, angles: Sequence[float]) -> StateSpaceModel:
    """Rotate each (d, q) input/output pair by its angle: ``R G R^T``.

    ``angles`` has one entry per 2x2 port block; used to express per-bus
    models in a common global dq reference frame.
    """
    angles = np.asarray(angles, dtype=float)
    if 2 * len(angles) != g.n_inputs or g.n_inputs != g.n_outputs:
        raise ValueError("rotate_ports: need one angle per (d, q) port pair")
    R = scipy.linalg.block_diag(
        *[np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]]) for a in angles]
    )
    return StateSpaceModel(g.A, g.B @ R.T, R @ g.C, R @ g.D @ R.T)


class StabilityResult(NamedTuple):
    stable: bool
    spectrum: np.ndarray
    max_real: float


def is_stable(model: StateSpaceModel, margin: float = 0.0) -> StabilityResult:
    """Hurwitz test: every eigenvalue of A strictly left of ``-margin``.

    Eigenvalues within ``STABILITY_RTOL`` of the boundary count as unstable
    (conservative: purely imaginary poles are never certified stable).
    """
    spectrum = model.poles()
    if spectrum.size == 0:
        return StabilityResult(True, spectrum, -np.inf)
    scale = max(1.0, np.abs(spectrum).max())
    max_real = float(spectrum.real.max())
    return StabilityResult(max_real < -margin - STABILITY_RTOL * scale, spectrum, max_real)


class FrequencyGrid:
    """Sorted, unique, non-negative evaluation frequencies in Hz.

    Zero is allowed as an exact grid point. Iteration yields Hz values;
    ``omegas`` gives rad/s.
    """

    __slots__ = ("f_hz",)

    def __init__(self, f_hz):
        f = np.asarray(f_hz, dtype=float)
        if f.ndim != 1 or f.size == 0:
            raise ValueError("frequency grid must be a non-empty 1-d sequence")
        if np.any(f < 0) or np.any(~np.isfinite(f)):
            raise ValueError("frequencies must be finite and non-negative")
        if np.any(np.diff(f) <= 0):
            f = np.unique(f)
        self.f_hz = f

    @classmethod
    def default(cls, f_min: float = 0.01, f_max: float = 1e4, points: int = 400,
                include_zero: bool = True) -> "FrequencyGrid":
        """Log-spaced grid plus the exact zero-frequency point."""
        f = np.logspace(np.log10(f_min), np.log10(f_max), points)
        if include_zero:
            f = np.concatenate([[0.0], f])
        return cls(f)

    @property
    def omegas(self) -> np.ndarray:
        return 2.0 * np.pi * self.f_hz

    def __len__(self):
        return self.f_hz.size

    def __iter__(self):
        return iter(self.f_hz)

    def __eq__(self, other):
        return isinstance(other, FrequencyGrid) and np.array_equal(self.f_hz, other.f_hz)
