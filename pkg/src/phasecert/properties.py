"""Randomized structural property suites.

These are the library's self-checks over random draws: the eigenvalue
bounds from gains and phases, the converter DC structure, the power-polar
DC structure, and the determinant equivalence of loop-shaping frames. The
``verify`` CLI subcommand runs them with a fixed seed; the acceptance
tests reuse the same functions with pinned tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .converter import GfmParameters, OperatingPoint, build_converter, check_dc_structure
from .phase import Sectoriality, classify, gain_extrema, matrix_phases
from .transforms import (
    blended_set,
    naive_blended_set,
    polar_matrices,
    power_polar_set,
    rectangular_set,
)

__all__ = [
    "SuiteResult",
    "random_sectorial_matrix",
    "random_operating_point",
    "random_gfm_parameters",
    "bound_property_suite",
    "dc_structure_suite",
    "polar_dc_suite",
    "det_equivalence_suite",
    "run_all_suites",
]


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: int
    worst_violation: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


def random_sectorial_matrix(rng: np.random.Generator, n: int,
                            center: float, half_width: float):
    """Strictly sectorial matrix synthesized as ``T* D T`` with known
    diagonal phases; returns (matrix, phases sorted)."""
    phases = np.sort(rng.uniform(center - half_width, center + half_width, n))
    mags = rng.uniform(0.3, 3.0, n)
    D = np.diag(mags * np.exp(1j * phases))
    # well-conditioned random congruence
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    T = Q @ np.diag(rng.uniform(0.5, 2.0, n))
    return T.conj().T @ D @ T, phases


def random_operating_point(rng: np.random.Generator) -> OperatingPoint:
    """Local-frame operating point (v_q = 0), load-convention current."""
    v = rng.uniform(0.9, 1.1)
    p = rng.uniform(-0.9, 0.9)
    q = rng.uniform(-0.4, 0.4)
    i_inj = np.conj(complex(p, q) / v)
    return OperatingPoint(v, 0.0, -i_inj.real, -i_inj.imag)


def random_gfm_parameters(rng: np.random.Generator) -> GfmParameters:
    return GfmParameters(
        inertia=rng.uniform(0.005, 0.08),
        damping=rng.uniform(0.05, 1.5),
        r_v=rng.uniform(0.01, 0.1),
        l_v=rng.uniform(0.08, 0.3),
        k_p=rng.uniform(0.5, 3.0),
        k_r=rng.uniform(20.0, 300.0),
        k_pq=rng.uniform(0.02, 0.3),
        k_iq=rng.uniform(2.0, 30.0),
        q_control=bool(rng.integers(0, 2)),
        ideal_tracking=bool(rng.integers(0, 4) == 0),
    )


def bound_property_suite(seed: int = 0, trials: int = 1000,
                         slack: float = 1e-9) -> SuiteResult:
    """Eigenvalues of products bounded by gain products and phase sums.

    Pairs are drawn strictly sectorial with phase windows keeping the
    summed intervals inside (-pi, pi), so eigenvalue arguments need no
    unwrapping.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        A, _ = random_sectorial_matrix(rng, n, rng.uniform(-0.7, 0.7), rng.uniform(0.1, 0.6))
        B, _ = random_sectorial_matrix(rng, n, rng.uniform(-0.7, 0.7), rng.uniform(0.1, 0.6))
        lam = np.linalg.eigvals(A @ B)
        ga, gb = gain_extrema(A), gain_extrema(B)
        pa, pb = matrix_phases(A), matrix_phases(B)
        lo = pa.interval.lo + pb.interval.lo
        hi = pa.interval.hi + pb.interval.hi
        v = max(
            float(np.max(np.abs(lam)) - ga.sigma_max * gb.sigma_max),
            float(ga.sigma_min * gb.sigma_min - np.min(np.abs(lam))),
            float(np.max(np.angle(lam)) - hi),
            float(lo - np.min(np.angle(lam))),
        )
        worst = max(worst, v)
        if v > slack:
            failures += 1
    return SuiteResult("eigenvalue gain/phase bounds", trials, failures, worst)


def dc_structure_suite(seed: int = 0, trials: int = 100,
                       tol: float = 1e-8) -> SuiteResult:
    """Converter DC template, null trace, rotation identity, and loss of
    sectoriality over random parameter/operating-point draws.

    "Not sectorial" means the origin lies in the numerical range: the
    generic build classifies NON (origin interior); constant-Q control
    pins both powers at DC, degenerating the range to a segment through
    the origin (SEMI). Either class defeats the phase conditions.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        op = random_operating_point(rng)
        params = random_gfm_parameters(rng)
        conv = build_converter(params, op)
        rep = check_dc_structure(conv)
        v = max(rep.template_error, abs(rep.trace), rep.identity_error)
        worst = max(worst, v)
        sectorial_enough = rep.sectoriality.at_least_quasi
        wrong_generic = (not params.q_control) and rep.sectoriality is not Sectoriality.NON
        if v > tol or sectorial_enough or wrong_generic:
            failures += 1
    return SuiteResult("converter DC structure", trials, failures, worst)


def polar_dc_suite(seed: int = 0, trials: int = 100,
                   tol: float = 1e-8) -> SuiteResult:
    """Power-polar frame at DC: zero first row/column and quasi-sectorial.

    Draws keep the reactive-power loop disabled (the model's stated
    default): an active constant-Q loop zeroes the voltage-to-reactive
    sensitivity too, collapsing the response to the zero matrix.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        op = random_operating_point(rng)
        params = random_gfm_parameters(rng).with_updates(q_control=False)
        conv = build_converter(params, op)
        tri = polar_matrices(op)
        J0 = (tri.E @ conv.y_DQ.evaluate(0.0).real + tri.C) @ tri.F
        v = float(max(np.abs(J0[0, :]).max(), np.abs(J0[:, 0]).max()))
        worst = max(worst, v)
        kind = classify(J0).kind
        if v > tol or kind is not Sectoriality.QUASI:
            failures += 1
    return SuiteResult("power-polar DC structure", trials, failures, worst)


def det_equivalence_suite(seed: int = 0, trials: int = 50,
                          rtol: float = 1e-8) -> SuiteResult:
    """``det(J_C + J_net) = det(E) det(Y_C + Y_net) det(F)`` for every
    frame kind at random complex frequencies and responses."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        n_conv = int(rng.integers(1, 4))
        ops = [random_operating_point(rng).rotated(rng.uniform(-np.pi, np.pi))
               for _ in range(n_conv)]
        wc = 2 * np.pi * rng.uniform(2.0, 30.0)
        sets = [
            rectangular_set(n_conv),
            power_polar_set(ops),
            blended_set(ops, wc, "va_ref", va_ref=(0.05, 0.15)),
            naive_blended_set(ops, wc),
        ]
        s = complex(rng.normal(), rng.normal()) * rng.uniform(0.1, 100.0)
        m = 2 * n_conv
        Yc = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        Yn = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        Yc_blocks = [Yc[2 * i:2 * i + 2, 2 * i:2 * i + 2] for i in range(n_conv)]
        import scipy.linalg
        for tset in sets:
            Jc = scipy.linalg.block_diag(
                *[tset.converter_response(Yc_blocks[i], i, s) for i in range(n_conv)]
            )
            Yc_blk = scipy.linalg.block_diag(*Yc_blocks)
            Jn = tset.network_response(Yn, s)
            lhs = np.linalg.det(Jc + Jn)
            rhs = (
                np.linalg.det(tset.E_block(s))
                * np.linalg.det(Yc_blk + Yn)
                * np.linalg.det(tset.F_block(s))
            )
            v = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
            worst = max(worst, v)
            if v > rtol:
                failures += 1
    return SuiteResult("determinant equivalence", trials, failures, worst)


def run_all_suites(seed: int = 0, trials: int = 200) -> List[SuiteResult]:
    return [
        bound_property_suite(seed, trials),
        dc_structure_suite(seed + 1, max(trials // 2, 50)),
        polar_dc_suite(seed + 2, max(trials // 2, 50)),
        det_equivalence_suite(seed + 3, max(trials // 4, 25)),
    ]
