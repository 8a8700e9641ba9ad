"""Numerical range, sectoriality, and matrix phases.

The numerical range ``W(A) = {x* A x : ||x|| = 1}`` is convex and contains
the spectrum. A matrix is sectorial when ``0`` lies strictly outside
``W(A)``; quasi-/semi-sectorial when ``0`` sits on the boundary with phase
spread below / up to pi. For (quasi-)sectorial matrices the phases are the
arguments of the diagonal of the congruence ``A = T* D T`` and bound the
eigenvalue arguments of products the same way singular values bound their
magnitudes.

Classification searches the rotation angle maximizing the smallest
eigenvalue of ``Herm(e^{j theta} A)``; the maximizer is also the
best-conditioned rotation for extracting phases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NotSectorialError

__all__ = [
    "Sectoriality",
    "PhaseInterval",
    "GainExtrema",
    "PhaseProfile",
    "NON_SECTORIAL_INTERVAL",
    "numerical_range_support",
    "classify",
    "matrix_phases",
    "gain_extrema",
    "phase_profile",
]

#: relative tolerance separating boundary membership from strict interior
DEFAULT_TOL = 1e-8

#: sentinel phase interval reported for non-sectorial matrices
NON_SECTORIAL_INTERVAL = (-2.0 * np.pi, 2.0 * np.pi)

_SCAN_POINTS = 720


class Sectoriality(enum.Enum):
    STRICT = "strict"
    QUASI = "quasi"
    SEMI = "semi"
    NON = "non"

    @property
    def at_least_quasi(self) -> bool:
        return self in (Sectoriality.STRICT, Sectoriality.QUASI)


class PhaseInterval(NamedTuple):
    lo: float
    hi: float

    @property
    def spread(self) -> float:
        return self.hi - self.lo


class GainExtrema(NamedTuple):
    sigma_min: float
    sigma_max: float


@dataclass(frozen=True)
class Classification:
    kind: Sectoriality
    theta_star: float
    support_min: float


@dataclass(frozen=True)
class MatrixPhases:
    kind: Sectoriality
    theta_star: float
    phases: np.ndarray
    interval: PhaseInterval


@dataclass(frozen=True)
class PhaseProfile:
    """Per-frequency summary of one matrix response: class, phases, gains."""

    kind: Sectoriality
    interval: PhaseInterval
    gains: GainExtrema


def _hermitian_part_min(A: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """lambda_min(Herm(e^{j theta} A)) for a batch of angles."""
    n = A.shape[0]
    if n == 1:
        return np.real(np.exp(1j * thetas) * A[0, 0])
    R = np.exp(1j * thetas)[:, None, None] * A[None, :, :]
    H = 0.5 * (R + np.conjugate(np.swapaxes(R, 1, 2)))
    if n == 2:
        a = H[:, 0, 0].real
        b = H[:, 1, 1].real
        c = H[:, 0, 1]
        mid = 0.5 * (a + b)
        rad = np.sqrt((0.5 * (a - b)) ** 2 + np.abs(c) ** 2)
        return mid - rad
    return np.linalg.eigvalsh(H)[:, 0]


def numerical_range_support(A, theta: float) -> float:
    """Support function of W(A): max over unit x of ``Re(e^{j theta} x* A x)``.

    Equals the largest eigenvalue of the Hermitian part of ``e^{j theta} A``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.exp(1j * theta) * A
    return float(np.linalg.eigvalsh(0.5 * (B + B.conj().T))[-1])


def gain_extrema(A) -> GainExtrema:
    """Smallest and largest singular values."""
    sv = np.linalg.svd(np.asarray(A, dtype=complex), compute_uv=False)
    return GainExtrema(float(sv[-1]), float(sv[0]))


def _search_rotation(A: np.ndarray, scale: float, tol: float):
    """Angle maximizing lambda_min(Herm(e^{j theta} A)).

    A 720-point scan brackets the maximizer; a golden-section pass refines
    isolated maxima. Boundary cases produce plateaus of near-zero minima,
    where the plateau midpoint gives the best-conditioned rotation.
    """
    thetas = np.linspace(0.0, 2.0 * np.pi, _SCAN_POINTS, endpoint=False)
    m = _hermitian_part_min(A, thetas)
    m_star = m.max()
    atol = max(tol * scale, 1e-14 * scale)
    on_plateau = m >= m_star - atol
    if on_plateau.sum() > 1:
        # circular midpoint of the longest contiguous plateau arc
        idx = np.flatnonzero(on_plateau)
        breaks = np.flatnonzero(np.diff(idx) > 1)
        runs = np.split(idx, breaks + 1)
        if on_plateau[0] and on_plateau[-1] and len(runs) > 1:
            runs[0] = np.concatenate([runs[-1] - _SCAN_POINTS, runs[0]])
            runs.pop()
        run = max(runs, key=len)
        theta_c = thetas[run[len(run) // 2] % _SCAN_POINTS]
        return float(theta_c), float(_hermitian_part_min(A, np.array([theta_c]))[0])
    k = int(np.argmax(m))
    step = 2.0 * np.pi / _SCAN_POINTS
    # refinement only matters when the scan maximum sits within curvature
    # error (~ scale * step^2) of the boundary decision; elsewhere the
    # classification and the (rotation-independent) phases are unaffected
    curv = scale * step**2
    if abs(m_star) > atol + curv:
        return float(thetas[k]), float(m_star)
    a, b = thetas[k] - step, thetas[k] + step
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc = _hermitian_part_min(A, np.array([c]))[0]
    fd = _hermitian_part_min(A, np.array([d]))[0]
    for _ in range(30):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = _hermitian_part_min(A, np.array([c]))[0]
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = _hermitian_part_min(A, np.array([d]))[0]
    theta = 0.5 * (a + b)
    return float(theta % (2.0 * np.pi)), float(_hermitian_part_min(A, np.array([theta]))[0])


def classify(A, tol: float = DEFAULT_TOL) -> Classification:
    """Sectoriality class of a complex square matrix.

    ``tol`` is relative to the spectral norm: boundary membership of the
    origin is decided by ``|lambda_min| <= tol * sigma_max`` at the optimal
    rotation. Quasi vs. semi is separated by the phase spread on the
    regular part (< pi vs. <= pi). Matrices whose spread equals pi exactly
    may be reported non-sectorial when the boundary rotation leaves phase
    content in the kernel of the Hermitian part; this errs on the
    conservative side for every downstream stability test.
    """
    A = np.asarray(A, dtype=complex)
    scale = float(np.linalg.norm(A, 2))
    if scale == 0.0:
        # W({0}) = {0}: origin on the (degenerate) boundary, spread zero
        return Classification(Sectoriality.SEMI, 0.0, 0.0)
    theta, m_star = _search_rotation(A, scale, tol)
    if m_star > tol * scale:
        return Classification(Sectoriality.STRICT, theta, m_star)
    if m_star < -tol * scale:
        return Classification(Sectoriality.NON, theta, m_star)
    result = _phases_at(A, theta, scale, tol)
    if result is None:
        return Classification(Sectoriality.NON, theta, m_star)
    phases = result
    if phases.size == 0:
        return Classification(Sectoriality.SEMI, theta, m_star)
    spread = phases[-1] - phases[0]
    kind = Sectoriality.QUASI if spread < np.pi - 1e-12 else Sectoriality.SEMI
    return Classification(kind, theta, m_star)


def _phases_at(A: np.ndarray, theta: float, scale: float, tol: float):
    """Phases of A using the rotation theta; None if the kernel of the
    Hermitian part couples into the skew part (origin interior in effect)."""
    B = np.exp(1j * theta) * A
    H = 0.5 * (B + B.conj().T)
    S = (B - B.conj().T) / 2j
    lam, U = np.linalg.eigh(H)
    keep = lam > tol * scale
    if not np.any(keep):
        return np.array([])
    Ur = U[:, keep]
    if not np.all(keep):
        Uk = U[:, ~keep]
        coupling = np.linalg.norm(Uk.conj().T @ S)
        if coupling > np.sqrt(tol) * scale:
            return None
    Hr = Ur.conj().T @ H @ Ur
    Sr = Ur.conj().T @ S @ Ur
    w, V = np.linalg.eigh(Hr)
    Hmh = V @ np.diag(1.0 / np.sqrt(w)) @ V.conj().T
    K = Hmh @ Sr @ Hmh
    kappa = np.linalg.eigvalsh(0.5 * (K + K.conj().T))
    phases = np.sort(np.arctan(kappa) - theta)
    # arctan keeps the set inside a width-pi window; shift the whole set
    # (never element-wise, which would split clusters straddling +-pi)
    # so its midpoint lands in (-pi, pi]
    mid = 0.5 * (phases[0] + phases[-1])
    phases -= 2.0 * np.pi * np.floor((mid + np.pi) / (2.0 * np.pi))
    if 0.5 * (phases[0] + phases[-1]) <= -np.pi:
        phases += 2.0 * np.pi
    return phases


def matrix_phases(A, tol: float = DEFAULT_TOL) -> MatrixPhases:
    """All matrix phases plus the enclosing interval.

    Raises
    ------
    NotSectorialError
        For non-sectorial input; callers wanting the sentinel interval
        should use :func:`phase_profile` instead.
    """
    A = np.asarray(A, dtype=complex)
    cls = classify(A, tol)
    if cls.kind is Sectoriality.NON:
        raise NotSectorialError("matrix is not (semi-)sectorial; phases undefined")
    scale = float(np.linalg.norm(A, 2))
    if scale == 0.0:
        phases = np.array([])
    else:
        phases = _phases_at(A, cls.theta_star, scale, tol)
        if phases is None:
            raise NotSectorialError("kernel coupling: phases undefined")
    if phases.size == 0:
        interval = PhaseInterval(0.0, 0.0)
    else:
        interval = PhaseInterval(float(phases[0]), float(phases[-1]))
    return MatrixPhases(cls.kind, cls.theta_star, phases, interval)


def phase_profile(A, tol: float = DEFAULT_TOL) -> PhaseProfile:
    """Classification + phase interval + gain extrema in one call.

    Non-sectorial matrices get the sentinel interval ``[-2 pi, 2 pi]``
    instead of an error, matching the plotting convention for regions
    where the phase is undefined.
    """
    A = np.asarray(A, dtype=complex)
    gains = gain_extrema(A)
    cls = classify(A, tol)
    if cls.kind is Sectoriality.NON:
        return PhaseProfile(cls.kind, PhaseInterval(*NON_SECTORIAL_INTERVAL), gains)
    scale = float(np.linalg.norm(A, 2))
    phases = _phases_at(A, cls.theta_star, scale, tol) if scale else np.array([])
    if phases is None or phases.size == 0:
        if cls.kind is Sectoriality.SEMI:
            # degenerate semi-sectorial point: no usable phases
            return PhaseProfile(cls.kind, PhaseInterval(*NON_SECTORIAL_INTERVAL), gains)
        phases = np.array([0.0])
    return PhaseProfile(cls.kind, PhaseInterval(float(phases[0]), float(phases[-1])), gains)
