"""Descriptor (generalized state-space) systems for eigenvalue studies.

A descriptor model realizes ``G(s) = C (sE - A)^{-1} B + D`` with a possibly
singular ``E``. This covers improper transfer matrices (derivative action)
and algebraic interconnection constraints, both of which appear when
loop-shaping weights carry inverse-admittance dynamics. Only the operations
needed for pole/zero studies are provided; frequency sweeps should evaluate
proper models or plain matrices instead.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import SingularResolventError
from .lti import StateSpaceModel

__all__ = ["DescriptorModel", "from_state_space", "closed_loop_poles"]

#: generalized eigenvalues with |lambda| above this are treated as infinite
_FINITE_EIG_CAP = 1e10


class DescriptorModel:
    """Realization ``(E, A, B, C, D)`` of ``C (sE - A)^{-1} B + D``."""

    __slots__ = ("E", "A", "B", "C", "D")

    def __init__(self, E, A, B, C, D):
        E = np.atleast_2d(np.asarray(E, dtype=float))
        A = np.atleast_2d(np.asarray(A, dtype=float))
        D = np.atleast_2d(np.asarray(D, dtype=float))
        n = A.shape[0]
        p, m = D.shape
        B = np.asarray(B, dtype=float).reshape(n, m)
        C = np.asarray(C, dtype=float).reshape(p, n)
        if E.shape != (n, n) and n == 0:
            E = np.zeros((0, 0))
        if E.shape != A.shape:
            raise ValueError("E and A must have identical shapes")
        self.E, self.A, self.B, self.C, self.D = E, A, B, C, D

    @property
    def n_vars(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.D.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.D.shape[0]

    def evaluate(self, s: complex) -> np.ndarray:
        if self.n_vars == 0:
            return self.D.astype(complex)
        M = s * self.E - self.A
        try:
            X = np.linalg.solve(M, self.B)
        except np.linalg.LinAlgError as exc:
            raise SingularResolventError(f"s = {s} is a pole of the descriptor model") from exc
        return self.C @ X + self.D

    def poles(self) -> np.ndarray:
        """Finite generalized eigenvalues of (A, E)."""
        return _finite_eigs(self.A, self.E)

    def zeros(self) -> np.ndarray:
        """Finite invariant zeros (square systems): eigenvalues of the
        Rosenbrock pencil ``([A B; C D], blkdiag(E, 0))``."""
        n, m = self.n_vars, self.n_inputs
        if m != self.n_outputs:
            raise ValueError("zeros defined for square systems only")
        Abig = np.block([[self.A, self.B], [self.C, self.D]])
        Ebig = scipy.linalg.block_diag(self.E, np.zeros((m, m)))
        return _finite_eigs(Abig, Ebig)

    def inverse(self) -> "DescriptorModel":
        """Inverse system: poles of the result are the zeros of this one."""
        n, m = self.n_vars, self.n_inputs
        if m != self.n_outputs:
            raise ValueError("inverse requires a square system")
        E = scipy.linalg.block_diag(self.E, np.zeros((m, m)))
        A = np.block([[self.A, self.B], [self.C, self.D]])
        B = np.vstack([np.zeros((n, m)), -np.eye(m)])
        C = np.hstack([np.zeros((m, n)), np.eye(m)])
        return DescriptorModel(E, A, B, C, np.zeros((m, m)))

    def series(self, second: "DescriptorModel") -> "DescriptorModel":
        """Cascade ``u -> self -> second``, i.e. ``second(s) @ self(s)``."""
        if second.n_inputs != self.n_outputs:
            raise ValueError("series: dimension mismatch")
        n1, n2 = self.n_vars, second.n_vars
        E = scipy.linalg.block_diag(self.E, second.E)
        A = np.block(
            [
                [self.A, np.zeros((n1, n2))],
                [second.B @ self.C, second.A],
            ]
        )
        B = np.vstack([self.B, second.B @ self.D])
        C = np.hstack([second.D @ self.C, second.C])
        return DescriptorModel(E, A, B, C, second.D @ self.D)

    def add(self, other: "DescriptorModel") -> "DescriptorModel":
        if self.n_inputs != other.n_inputs or self.n_outputs != other.n_outputs:
            raise ValueError("add: dimension mismatch")
        E = scipy.linalg.block_diag(self.E, other.E)
        A = scipy.linalg.block_diag(self.A, other.A)
        B = np.vstack([self.B, other.B])
        C = np.hstack([self.C, other.C])
        return DescriptorModel(E, A, B, C, self.D + other.D)


def from_state_space(g: StateSpaceModel) -> DescriptorModel:
    return DescriptorModel(np.eye(g.n_states), g.A, g.B, g.C, g.D)


def constant(M) -> DescriptorModel:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    p, m = M.shape
    z = np.zeros((0, 0))
    return DescriptorModel(z, z, np.zeros((0, m)), np.zeros((p, 0)), M)


def derivative_gain(F) -> DescriptorModel:
    """Descriptor realization of ``y = F * du/dt`` (transfer ``s F``)."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    p, m = F.shape
    E = np.block([[np.zeros((m, m)), np.eye(m)], [np.zeros((m, 2 * m))]])
    A = np.eye(2 * m)
    B = np.vstack([np.zeros((m, m)), -np.eye(m)])
    C = np.hstack([F, np.zeros((p, m))])
    return DescriptorModel(E, A, B, C, np.zeros((p, m)))


def _finite_eigs(A: np.ndarray, E: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0:
        return np.array([], dtype=complex)
    w = scipy.linalg.eig(A, E, right=False)
    w = w[np.isfinite(w)]
    return w[np.abs(w) < _FINITE_EIG_CAP]


def closed_loop_poles(side_a: Sequence[StateSpaceModel], side_b: StateSpaceModel) -> np.ndarray:
    """Poles of the admittance interconnection of two one-port groups.

    ``side_a`` holds one 2x2 model per bus (block-diagonal aggregate) and
    ``side_b`` the matching multi-port model. The shared bus voltages are
    algebraic pencil variables, so no feedthrough invertibility is needed:
    the finite eigenvalues of the KCL-constrained pencil are exactly the
    zeros of ``det(Ya(s) + Yb(s))``.
    """
    models = list(side_a) + [side_b]
    m = side_b.n_inputs
    if side_a and sum(g.n_inputs for g in side_a) != m:
        raise ValueError("port dimension mismatch between the two sides")
    n_tot = sum(g.n_states for g in models)
    N = n_tot + m
    A = np.zeros((N, N))
    E = np.zeros((N, N))
    E[:n_tot, :n_tot] = np.eye(n_tot)
    Dsum = np.zeros((m, m))
    row = 0
    col_in = 0
    for g in side_a:
        n, k = g.n_states, g.n_inputs
        A[row:row + n, row:row + n] = g.A
        A[row:row + n, n_tot + col_in:n_tot + col_in + k] = g.B
        A[n_tot + col_in:n_tot + col_in + k, row:row + n] = g.C
        Dsum[col_in:col_in + k, col_in:col_in + k] += g.D
        row += n
        col_in += k
    g = side_b
    n = g.n_states
    A[row:row + n, row:row + n] = g.A
    A[row:row + n, n_tot:] = g.B
    A[n_tot:, row:row + n] = g.C
    Dsum += g.D
    A[n_tot:, n_tot:] = Dsum
    return _finite_eigs(A, E)
