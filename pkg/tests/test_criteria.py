"""Gain/phase conditions, certification sweep, ground truth, reporting."""

import io
import json

import numpy as np
import pytest

from phasecert import lti
from phasecert.criteria import (
    certify,
    certify_centralized,
    gain_condition,
    ground_truth,
    phase_condition,
)
from phasecert.errors import OpenLoopUnstableError
from phasecert.lti import FrequencyGrid
from phasecert.phase import matrix_phases
from phasecert.reporting import (
    report_dict,
    write_eig_csv,
    write_eigphase_csv,
    write_sweep_csv,
)
from phasecert.transforms import rectangular_set


class TestGainCondition:
    def test_trivial_pass(self):
        v = gain_condition([0.5 * np.eye(2)], 2.0 * np.eye(2))
        assert v.ok and v.lhs == 0.5 and v.rhs == 2.0

    def test_trivial_fail(self):
        v = gain_condition([3.0 * np.eye(2)], np.diag([1.0, 5.0]))
        assert not v.ok

    def test_strictness(self):
        assert not gain_condition([np.eye(2)], np.eye(2)).ok

    def test_scaling_monotonicity(self, rng):
        # shrinking every converter response can never break the gain test
        for _ in range(50):
            convs = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                     for _ in range(3)]
            net = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            base = gain_condition(convs, net)
            alpha = rng.uniform(0.05, 0.95)
            shrunk = gain_condition([alpha * c for c in convs], net)
            if base.ok:
                assert shrunk.ok


class TestPhaseCondition:
    def test_hermitian_pd_passes(self, rng):
        convs = []
        for _ in range(2):
            M = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            convs.append(M @ M.conj().T + 3 * np.eye(2))
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        inv = M @ M.conj().T + 5 * np.eye(4)
        v = phase_condition(convs, inv)
        assert v.ok and v.reason == "ok"

    def test_interval_arithmetic(self):
        conv = np.diag([np.exp(-0.2j), np.exp(0.3j)])
        inv = np.diag([np.exp(-0.1j), np.exp(0.2j)])
        v = phase_condition([conv], inv)
        assert v.ok  # 0.3 + 0.2 < pi and -0.2 - 0.1 > -pi

    def test_non_sectorial_blocks(self):
        nonsec = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        v = phase_condition([nonsec], np.eye(2))
        assert not v.ok and v.reason == "non-sectorial"

    def test_overlap_detected(self):
        conv = np.diag([np.exp(1.6j), np.exp(1.7j)])
        inv = np.diag([np.exp(1.5j), np.exp(1.6j)])
        v = phase_condition([conv], inv)
        assert not v.ok and v.reason == "overlap"


def _static_network(Y):
    """Duck-typed network stub for synthetic criteria tests."""

    class _Stub:
        def __init__(self, Y):
            self.model = lti.static_gain(Y)
            self.ports = list(range(Y.shape[0] // 2))

        def port_response(self, f_hz):
            return self.model.D.astype(complex)

    return _Stub(Y)


class TestCertify:
    def test_static_gain_certificate(self):
        net = _static_network(2.0 * np.eye(2))
        conv = [lti.static_gain(0.5 * np.eye(2))]
        grid = FrequencyGrid([0.0, 1.0, 10.0])
        rep = certify(conv, [1], net, rectangular_set(1), grid)
        assert rep.certified
        assert all(v.gain.ok for v in rep.verdicts)

    def test_requires_converters(self):
        net = _static_network(np.eye(2))
        with pytest.raises(OpenLoopUnstableError):
            certify([], [], net, rectangular_set(0), FrequencyGrid([1.0]))

    def test_open_loop_gate(self):
        net = _static_network(2.0 * np.eye(2))
        unstable = lti.StateSpaceModel([[0.5]], [[1.0, 0.0]], [[1.0], [0.0]],
                                       0.1 * np.eye(2))
        with pytest.raises(OpenLoopUnstableError):
            certify([unstable], [1], net, rectangular_set(1), FrequencyGrid([1.0]))

    def test_determinism(self, infbus_stable):
        asm = infbus_stable
        grid = FrequencyGrid.default(points=40)
        reps = []
        for _ in range(2):
            rep = certify(asm.conv_models, asm.buses, asm.network,
                          asm.transform_set(), grid, scenario=asm.name)
            reps.append(json.dumps(report_dict(rep), sort_keys=True))
        assert reps[0] == reps[1]

    def test_report_carries_one_frame(self, certified_infbus_stable):
        d = report_dict(certified_infbus_stable)
        assert d["frame"]["kind"] == "blended"
        assert "caveat" in d and "finite" in d["caveat"]

    def test_refinement_adds_points(self, infbus_unstable):
        asm = infbus_unstable
        grid = FrequencyGrid.default(points=40)
        r0 = certify(asm.conv_models, asm.buses, asm.network, asm.transform_set(),
                     grid, refine=False)
        r1 = certify(asm.conv_models, asm.buses, asm.network, asm.transform_set(),
                     grid, refine=True)
        assert len(r1.grid) > len(r0.grid)
        assert not r1.certified
        assert r1.note != ""

    def test_verdict_consistency(self, certified_infbus_stable):
        for v in certified_infbus_stable.verdicts:
            assert v.satisfied == (v.gain.ok or v.phase.ok)


class TestCentralized:
    def test_static_example(self):
        net = _static_network(np.linalg.inv(0.9 * np.eye(2)))
        conv = [lti.static_gain(0.5 * np.eye(2))]
        grid = FrequencyGrid([0.0, 1.0])
        rep = certify_centralized(conv, [1], net, rectangular_set(1), grid)
        assert rep.certified
        assert all(v.gain.lhs == pytest.approx(0.45) for v in rep.verdicts)

    def test_decentralized_implies_centralized(self, infbus_stable,
                                               certified_infbus_stable):
        assert certified_infbus_stable.certified
        asm = infbus_stable
        rep = certify_centralized(asm.conv_models, asm.buses, asm.network,
                                  asm.transform_set(), FrequencyGrid.default(points=60))
        assert rep.certified

    def test_phase_verdict_vs_loop_eigenvalues(self, rng):
        # when the centralized phase test passes, the loop eigenvalue
        # arguments must stay inside the summed bounds (eigensolve oracle)
        from phasecert.properties import random_sectorial_matrix
        for _ in range(50):
            H1, _ = random_sectorial_matrix(rng, 3, rng.uniform(-0.5, 0.5), 0.4)
            H2, _ = random_sectorial_matrix(rng, 3, rng.uniform(-0.5, 0.5), 0.4)
            p1, p2 = matrix_phases(H1), matrix_phases(H2)
            if p1.interval.hi + p2.interval.hi < np.pi and \
               p1.interval.lo + p2.interval.lo > -np.pi:
                args = np.angle(np.linalg.eigvals(H1 @ H2))
                assert args.max() <= p1.interval.hi + p2.interval.hi + 1e-9
                assert args.min() >= p1.interval.lo + p2.interval.lo - 1e-9


class TestGroundTruth:
    def test_network_alone_stable(self, rng):
        from phasecert.network import BranchData, BusData, NetworkData, assemble, kron_reduce
        data = NetworkData(
            [BusData(1, "slack"), BusData(2, p_load=0.2)],
            [BranchData(1, 2, 0.05, 0.4, 0.01)],
            2 * np.pi * 50,
        )
        asm = assemble(data, grounded=[1], port_buses=[2])
        na = kron_reduce(asm, internal=[])
        gt = ground_truth([], na)
        assert gt.stable

    def test_stable_fixture(self, ground_truths):
        assert ground_truths["infbus_stable"].stable

    def test_unstable_fixture_mode(self, ground_truths):
        gt = ground_truths["infbus_unstable"]
        assert not gt.stable
        assert 0.5 <= gt.dominant_mode_hz <= 3.0
        assert (gt.eigenvalues.real > 0).sum() == 2


class TestReporting:
    def test_sweep_csv_schema(self, certified_infbus_stable):
        buf = io.StringIO()
        write_sweep_csv(certified_infbus_stable, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("# schema=phasecert.sweep.v1")
        header = lines[1].split(",")
        assert header[0] == "f_hz" and "satisfied" in header
        f = [float(l.split(",")[0]) for l in lines[2:]]
        assert all(b > a for a, b in zip(f, f[1:]))

    def test_eigphase_csv(self, certified_infbus_stable):
        buf = io.StringIO()
        write_eigphase_csv(certified_infbus_stable, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("# schema=phasecert.eigphase.v1")
        assert "arg_lam0" in lines[1]

    def test_eig_csv(self, ground_truths):
        buf = io.StringIO()
        write_eig_csv(ground_truths["infbus_stable"], buf, scenario="infbus_stable")
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("# schema=phasecert.eig.v1")
        assert lines[1] == "index,real,imag,freq_hz,damping"
        assert len(lines) > 3

    def test_bounds_enclose_eig_args_when_defined(self, certified_infbus_stable):
        # mirror of the product phase bound on the actual sweep data
        for v in certified_infbus_stable.verdicts:
            if v.phase.reason == "non-sectorial":
                continue
            inv = v.phase.net_inv_profile.interval
            hi = max(p.interval.hi for p in v.phase.converter_profiles) + inv.hi
            lo = min(p.interval.lo for p in v.phase.converter_profiles) + inv.lo
            assert v.loop_eig_args.max() <= hi + 1e-9
            assert v.loop_eig_args.min() >= lo - 1e-9


class TestPencilResiduals:
    def test_closed_loop_eigs_null_the_characteristic_determinant(
            self, infbus_unstable, ground_truths):
        asm = infbus_unstable
        gt = ground_truths["infbus_unstable"]
        conv, net = asm.conv_models[0], asm.network

        def det_at(s):
            return np.linalg.det(conv.evaluate(s) + net.model.evaluate(s))

        checked = 0
        for lam in gt.eigenvalues:
            if abs(lam.imag) < 1e-6 or abs(lam) > 1e4:
                continue
            base = abs(det_at(lam + 0.3 * abs(lam)))
            assert abs(det_at(lam)) < 1e-5 * max(base, 1e-12)
            checked += 1
        assert checked >= 4
