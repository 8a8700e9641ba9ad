"""Numerical range, sectoriality classes, matrix phases, gain extrema."""

import numpy as np
import pytest

from phasecert.errors import NotSectorialError
from phasecert.phase import (
    NON_SECTORIAL_INTERVAL,
    Sectoriality,
    classify,
    gain_extrema,
    matrix_phases,
    numerical_range_support,
    phase_profile,
)


def synth_sectorial(rng, n, phases):
    """T* D T with prescribed diagonal arguments; phases of the result are
    exactly the prescribed ones (congruence canonical form)."""
    mags = rng.uniform(0.3, 3.0, n)
    D = np.diag(mags * np.exp(1j * np.asarray(phases)))
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    T = Q @ np.diag(rng.uniform(0.5, 2.0, n))
    return T.conj().T @ D @ T


class TestSupport:
    def test_identity(self):
        for th in [0.0, 0.7, 2.0, -1.2]:
            assert numerical_range_support(np.eye(2), th) == pytest.approx(np.cos(th))

    def test_segment_one_to_j(self):
        assert numerical_range_support(np.diag([1.0, 1j]), 0.0) == pytest.approx(1.0)

    def test_monte_carlo_hull(self, rng):
        # oracle: stochastic ascent of Re(e^{j th} x* A x) over unit vectors
        # (bulk sampling plus shrinking local resampling, ~1e5 draws per
        # angle, no eigendecomposition)
        A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))

        def mc_support(th):
            w = np.exp(1j * th)
            X = rng.normal(size=(40_000, 3)) + 1j * rng.normal(size=(40_000, 3))
            X /= np.linalg.norm(X, axis=1, keepdims=True)
            vals = np.real(w * np.einsum("ki,ij,kj->k", X.conj(), A, X))
            best = X[np.argmax(vals)]
            best_val = vals.max()
            radius = 0.3
            for _ in range(6):
                X = best + radius * (rng.normal(size=(10_000, 3))
                                     + 1j * rng.normal(size=(10_000, 3)))
                X /= np.linalg.norm(X, axis=1, keepdims=True)
                vals = np.real(w * np.einsum("ki,ij,kj->k", X.conj(), A, X))
                if vals.max() > best_val:
                    best_val = vals.max()
                    best = X[np.argmax(vals)]
                radius *= 0.35
            return best_val

        for th in np.linspace(0, 2 * np.pi, 64, endpoint=False):
            mc = mc_support(th)
            hull = numerical_range_support(A, th)
            assert mc <= hull + 1e-9
            assert hull - mc <= 1e-3 * max(1.0, abs(hull))

    def test_membership_margin(self, rng):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        x = rng.normal(size=4) + 1j * rng.normal(size=4)
        x /= np.linalg.norm(x)
        z = x.conj() @ A @ x
        for th in np.linspace(0, 2 * np.pi, 32, endpoint=False):
            assert np.real(np.exp(1j * th) * z) <= numerical_range_support(A, th) + 1e-9


class TestClassify:
    def test_strict_normal(self):
        assert classify(np.diag([1.0, np.exp(1j * np.pi / 3)])).kind is Sectoriality.STRICT

    def test_quasi_diag(self):
        assert classify(np.diag([0.0, 2.0])).kind is Sectoriality.QUASI
        assert classify(np.diag([0.0, -2.0])).kind is Sectoriality.QUASI

    def test_non_nilpotent(self):
        assert classify(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)).kind is Sectoriality.NON

    def test_zero_matrix_semi(self):
        assert classify(np.zeros((2, 2), dtype=complex)).kind is Sectoriality.SEMI

    def test_indefinite_segment_semi(self):
        assert classify(np.diag([1.0, -1.0]).astype(complex)).kind is Sectoriality.SEMI

    def test_origin_interior_non(self, rng):
        # eigenvalue arguments spread > pi forces 0 into the interior
        A = synth_sectorial(rng, 3, [-2.0, 0.0, 2.0])
        assert classify(A).kind is Sectoriality.NON

    def test_unitary_similarity_invariance(self, rng):
        for _ in range(20):
            A = synth_sectorial(rng, 3, rng.uniform(-1.0, 1.0, 3))
            Q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
            B = Q @ A @ Q.conj().T
            assert classify(B).kind == classify(A).kind
            pa, pb = matrix_phases(A).phases, matrix_phases(B).phases
            assert np.abs(pa - pb).max() < 1e-9


class TestPhases:
    def test_identity_zero(self):
        assert np.allclose(matrix_phases(np.eye(3)).phases, 0.0)

    def test_normal_matrix_args(self):
        mp = matrix_phases(np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 6)]))
        assert np.allclose(mp.phases, [-np.pi / 6, np.pi / 4], atol=1e-9)

    def test_congruence_synthesis(self, rng):
        # the literal invariant: phases of T* D T equal the arguments of D
        for _ in range(200):
            n = int(rng.integers(2, 6))
            phases = np.sort(rng.uniform(-1.3, 1.3, n))
            while phases[-1] - phases[0] >= np.pi - 0.05:
                phases = np.sort(rng.uniform(-1.3, 1.3, n))
            A = synth_sectorial(rng, n, phases)
            got = matrix_phases(A).phases
            assert np.abs(got - phases).max() < 1e-7

    def test_negative_real_axis_cluster(self):
        # phases straddling +-pi must not be split by wrapping
        A = np.diag([np.exp(1j * (np.pi - 0.01)), np.exp(1j * (np.pi - 0.1))])
        mp = matrix_phases(A)
        assert mp.interval.spread == pytest.approx(0.09, abs=1e-9)
        assert abs(abs(mp.phases).max() - (np.pi - 0.01)) < 1e-9

    def test_product_eigenvalue_phase_bound(self, rng):
        # eigensolve oracle for the product bound
        for _ in range(200):
            n = int(rng.integers(2, 6))
            A = synth_sectorial(rng, n, rng.uniform(-0.6, 0.6, n))
            B = synth_sectorial(rng, n, rng.uniform(-0.6, 0.6, n))
            pa, pb = matrix_phases(A), matrix_phases(B)
            args = np.angle(np.linalg.eigvals(A @ B))
            assert args.max() <= pa.interval.hi + pb.interval.hi + 1e-9
            assert args.min() >= pa.interval.lo + pb.interval.lo - 1e-9

    def test_not_sectorial_raises(self):
        with pytest.raises(NotSectorialError):
            matrix_phases(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))

    def test_sentinel_interval(self):
        prof = phase_profile(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
        assert prof.kind is Sectoriality.NON
        assert prof.interval.lo == NON_SECTORIAL_INTERVAL[0]
        assert prof.interval.hi == NON_SECTORIAL_INTERVAL[1]


class TestGainExtrema:
    def test_diag(self):
        assert gain_extrema(np.diag([3.0, 1.0])) == pytest.approx((1.0, 3.0))

    def test_rotation_unitary(self):
        R = np.array([[0.0, -1.0], [1.0, 0.0]])
        assert gain_extrema(R) == pytest.approx((1.0, 1.0))

    def test_product_magnitude_bound(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 6))
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            ga, gb = gain_extrema(A), gain_extrema(B)
            mags = np.abs(np.linalg.eigvals(A @ B))
            assert mags.max() <= ga.sigma_max * gb.sigma_max + 1e-12
            assert mags.min() >= ga.sigma_min * gb.sigma_min - 1e-12

    def test_gain_bounds_spectrum(self, rng):
        A = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        g = gain_extrema(A)
        mags = np.abs(np.linalg.eigvals(A))
        assert np.all(mags <= g.sigma_max + 1e-12)
        assert np.all(mags >= g.sigma_min - 1e-12)


class TestNormalGroundTruth:
    def test_normal_matrix(self, rng):
        for _ in range(20):
            args = rng.uniform(-1.2, 1.2, 4)
            mags = rng.uniform(0.2, 4.0, 4)
            lam = mags * np.exp(1j * args)
            Q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            A = Q @ np.diag(lam) @ Q.conj().T
            g = gain_extrema(A)
            assert g.sigma_min == pytest.approx(mags.min(), rel=1e-9)
            assert g.sigma_max == pytest.approx(mags.max(), rel=1e-9)
            if args.max() - args.min() < np.pi - 1e-6:
                mp = matrix_phases(A)
                assert np.abs(np.sort(args) - mp.phases).max() < 1e-8


class TestEllipse:
    def test_2x2_numerical_range_is_ellipse(self, rng):
        # closed form: foci at the eigenvalues, minor semi-axis from
        # sqrt(tr(A*A) - |l1|^2 - |l2|^2) / 2
        for _ in range(25):
            A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            lam = np.linalg.eigvals(A)
            b2 = np.trace(A.conj().T @ A).real - np.abs(lam[0]) ** 2 - np.abs(lam[1]) ** 2
            b_e = np.sqrt(max(b2, 0.0)) / 2.0
            c_f = abs(lam[0] - lam[1]) / 2.0
            a_e = np.hypot(b_e, c_f)
            center = 0.5 * (lam[0] + lam[1])
            psi = np.angle(lam[0] - lam[1]) if c_f > 0 else 0.0
            for th in np.linspace(0, 2 * np.pi, 24, endpoint=False):
                expected = np.real(np.exp(1j * th) * center) + np.hypot(
                    a_e * np.cos(psi + th), b_e * np.sin(psi + th)
                )
                got = numerical_range_support(A, th)
                assert got == pytest.approx(expected, rel=1e-8, abs=1e-9)


class TestScaleInvariance:
    def test_classification_invariant_under_positive_scaling(self, rng):
        # the boundary tolerance is relative, so extreme positive scalings
        # must not change the class
        mats = [
            np.diag([0.0, 2.0]).astype(complex),
            np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
            synth_sectorial(np.random.default_rng(3), 3, [-0.5, 0.1, 0.7]),
        ]
        for A in mats:
            base = classify(A).kind
            for c in (1e-8, 1e-3, 1e3, 1e8):
                assert classify(c * A).kind == base

    def test_phases_homogeneous_degree_zero(self, rng):
        A = synth_sectorial(rng, 3, [-0.4, 0.2, 0.8])
        base = matrix_phases(A).phases
        for c in (1e-6, 7.3, 1e6):
            got = matrix_phases(c * A).phases
            assert np.abs(got - base).max() < 1e-8
