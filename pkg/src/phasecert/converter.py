"""Grid-forming converter small-signal admittance.

The converter is modeled in its swing (controller) dq frame and embedded
into the local steady DQ frame through the synchronization path. Current
is counted positive INTO the converter, so the converter and the network
admittances add in the bus KCL; a converter delivering active power then
has a negative d-axis operating current.

Inner control (stationary-frame design mapped to dq by the exact shift
``s -> s + j w0``): proportional-resonant current controller around an RL
output filter, virtual-admittance voltage loop generating the current
reference, optional PI reactive-power control trimming the voltage
reference. Synchronization: virtual synchronous machine, swing transfer
``1/(J s + D)`` from measured power to frequency, integrated to the swing
angle.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import lti
from .errors import AssumptionError, IllPosedLoopError
from .lti import StateSpaceModel
from .phase import Sectoriality, classify

__all__ = [
    "OperatingPoint",
    "GfmParameters",
    "ConverterAdmittance",
    "Prop1Report",
    "build_inner_admittance",
    "power_gain",
    "synchronization_gain",
    "frame_embed",
    "build_converter",
    "check_dc_structure",
]

#: 90-degree rotation (the dq image of multiplication by j)
ROT90 = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class OperatingPoint:
    """Steady-state bus voltage and converter current (load convention).

    Components are in the frame the containing model works in; ``rotated``
    re-expresses the point in a frame leading by ``angle``. ``i_d/i_q`` are
    the current INTO the converter, i.e. minus the power-flow injection.
    """

    v_d: float
    v_q: float
    i_d: float
    i_q: float

    @property
    def v_mag(self) -> float:
        return float(np.hypot(self.v_d, self.v_q))

    @property
    def v_vec(self) -> np.ndarray:
        """Row vector [v_d, v_q]."""
        return np.array([self.v_d, self.v_q])

    @property
    def i_vec(self) -> np.ndarray:
        return np.array([self.i_d, self.i_q])

    @property
    def v_rot(self) -> np.ndarray:
        """Linearized rotation term for the voltage: [-v_q, v_d]^T."""
        return np.array([-self.v_q, self.v_d])

    @property
    def i_rot(self) -> np.ndarray:
        return np.array([-self.i_q, self.i_d])

    def rotated(self, angle: float) -> "OperatingPoint":
        c, s = np.cos(angle), np.sin(angle)
        R = np.array([[c, -s], [s, c]])
        v = R @ self.v_vec
        i = R @ self.i_vec
        return OperatingPoint(float(v[0]), float(v[1]), float(i[0]), float(i[1]))

    def local(self) -> "OperatingPoint":
        """Rotate so the d-axis aligns with the bus voltage (v_q = 0)."""
        return self.rotated(-self.angle)

    @property
    def angle(self) -> float:
        return float(np.arctan2(self.v_q, self.v_d))

    def validate(self):
        if self.v_mag <= 0.0:
            raise AssumptionError("operating point requires nonzero voltage magnitude")


@dataclass(frozen=True)
class GfmParameters:
    """Control and filter parameters, per-unit on the converter base.

    Reactances (``l_*``) are p.u. at the nominal frequency; the builders
    convert to inductances internally. ``ideal_tracking`` removes the
    current-control and filter dynamics (current equals its reference),
    leaving the pure virtual-admittance response.
    """

    w0: float = 2.0 * np.pi * 50.0
    inertia: float = 0.02        # VSM J
    damping: float = 0.5         # VSM D
    r_v: float = 0.05            # virtual resistance
    l_v: float = 0.15            # virtual reactance at w0
    k_p: float = 1.0             # PR proportional gain
    k_r: float = 100.0           # PR resonant gain
    r_f: float = 0.01            # output filter resistance
    l_f: float = 0.08            # output filter reactance at w0
    k_pq: float = 0.1            # reactive-power PI, proportional
    k_iq: float = 10.0           # reactive-power PI, integral
    q_filter: float = 2.0 * np.pi * 5.0  # Q-measurement filter (2nd order)
    q_control: bool = False
    ideal_tracking: bool = False

    def validate(self):
        if self.inertia <= 0 or self.damping <= 0:
            raise AssumptionError("VSM requires J > 0 and D > 0")
        if self.l_v <= 0 or self.r_v < 0:
            raise AssumptionError("virtual admittance requires l_v > 0, r_v >= 0")
        if not self.ideal_tracking and self.l_f <= 0:
            raise AssumptionError("output filter requires l_f > 0")

    def with_updates(self, **kw) -> "GfmParameters":
        return replace(self, **kw)


def virtual_admittance(p: GfmParameters) -> StateSpaceModel:
    """2x2 dq admittance of the virtual RL element, ``Z_v(s)^{-1}``."""
    lv = p.l_v / p.w0
    A = (-p.r_v * np.eye(2) - p.l_v * ROT90) / lv
    B = np.eye(2) / lv
    return StateSpaceModel(A, B, np.eye(2), np.zeros((2, 2)))


def virtual_impedance_matrices(p: GfmParameters):
    """(R, L) real 2x2 pair with ``Z_v(s) = R + s L`` in the dq frame."""
    lv = p.l_v / p.w0
    return p.r_v * np.eye(2) + p.l_v * ROT90, lv * np.eye(2)


def _pr_controller_dq(k_p: float, k_r: float, w0: float) -> StateSpaceModel:
    """Stationary-frame PR controller ``k_p + k_r s / (s^2 + w0^2)`` mapped
    to dq; the resonant pair lands at dq frequencies 0 and -2 w0."""
    A = np.zeros((4, 4))
    A[2:, 2:] = np.array([[0.0, 2.0 * w0], [-2.0 * w0, 0.0]])
    B = np.vstack([np.eye(2), np.eye(2)])
    C = np.hstack([0.5 * k_r * np.eye(2), 0.5 * k_r * np.eye(2)])
    D = k_p * np.eye(2)
    return StateSpaceModel(A, B, C, D)


def build_inner_admittance(p: GfmParameters, op: OperatingPoint) -> StateSpaceModel:
    """Swing-frame admittance from PCC voltage to converter current.

    The operating point (swing = local frame, v_q = 0 after the canonical
    rotation) enters only through the reactive-power measurement, so it is
    unused when the Q loop is disabled.
    """
    p.validate()
    op.validate()
    lv = p.l_v / p.w0
    I2 = np.eye(2)

    # reactive power measured on the delivered current i_del = -i:
    # q_del = v_q i_del_d - v_d i_del_q, with I_del0 = -I0
    dq_didel = np.array([op.v_q, -op.v_d])
    dq_dv = np.array([op.i_q, -op.i_d])
    # state layout: x_v (2, current reference); without ideal tracking
    # x_f (2, delivered current) and z_pr (4); with Q control a 2nd-order
    # measurement filter (2) and the PI integrator (1)
    i_v = 0
    if p.ideal_tracking:
        i_del_idx = i_v
        nxt = 2
    else:
        i_del_idx, i_z = 2, 4
        nxt = 8
    if p.q_control:
        i_qf, i_qi = nxt, nxt + 2
        n = nxt + 3
    else:
        n = nxt
    A = np.zeros((n, n))
    B = np.zeros((n, 2))

    # virtual admittance: lv x_v' = (v_ref - v) - r_v x_v - l_v ROT90 x_v
    A[i_v:i_v + 2, i_v:i_v + 2] = (-p.r_v * I2 - p.l_v * ROT90) / lv
    B[i_v:i_v + 2, :] = -I2 / lv
    if p.q_control:
        wq = p.q_filter
        # filtered measurement: xqf1' = wq (q_del - xqf1); xqf2' = wq (xqf1 - xqf2)
        A[i_qf, i_del_idx:i_del_idx + 2] = wq * dq_didel
        A[i_qf, i_qf] = -wq
        B[i_qf, :] = wq * dq_dv
        A[i_qf + 1, i_qf] = wq
        A[i_qf + 1, i_qf + 1] = -wq
        # v_ref_d = -(k_pq xqf2 + k_iq xqi); xqi' = xqf2
        A[i_v, i_qf + 1] = -p.k_pq / lv
        A[i_v, i_qi] = -p.k_iq / lv
        A[i_qi, i_qf + 1] = 1.0

    if not p.ideal_tracking:
        lf = p.l_f / p.w0
        # PR: e = x_v - x_f; z1' = e; z2' = [[0, 2w0], [-2w0, 0]] z2 + e
        A[i_z:i_z + 2, i_v:i_v + 2] = I2
        A[i_z:i_z + 2, i_del_idx:i_del_idx + 2] = -I2
        A[i_z + 2:i_z + 4, i_v:i_v + 2] = I2
        A[i_z + 2:i_z + 4, i_del_idx:i_del_idx + 2] = -I2
        A[i_z + 2:i_z + 4, i_z + 2:i_z + 4] = np.array(
            [[0.0, 2.0 * p.w0], [-2.0 * p.w0, 0.0]]
        )
        # filter: lf x_f' = v_c - v - r_f x_f - l_f ROT90 x_f
        # with v_c = k_p e + (k_r / 2)(z1 + z2)
        A[i_del_idx:i_del_idx + 2, i_v:i_v + 2] = (p.k_p / lf) * I2
        A[i_del_idx:i_del_idx + 2, i_del_idx:i_del_idx + 2] = \
            (-(p.k_p + p.r_f) * I2 - p.l_f * ROT90) / lf
        A[i_del_idx:i_del_idx + 2, i_z:i_z + 2] = (0.5 * p.k_r / lf) * I2
        A[i_del_idx:i_del_idx + 2, i_z + 2:i_z + 4] = (0.5 * p.k_r / lf) * I2
        B[i_del_idx:i_del_idx + 2, :] += -I2 / lf

    C = np.zeros((2, n))
    C[:, i_del_idx:i_del_idx + 2] = -I2  # current into converter = -i_del
    return StateSpaceModel(A, B, C, np.zeros((2, 2)))


def power_gain(y_dq: StateSpaceModel, op: OperatingPoint) -> StateSpaceModel:
    """Active-power sensitivity row ``V0 @ Y_dq(s) + I0`` (1x2)."""
    gp = lti.left_multiply(op.v_vec.reshape(1, 2), y_dq)
    return lti.parallel(gp, lti.static_gain(op.i_vec.reshape(1, 2)))


def swing_transfer(p: GfmParameters) -> StateSpaceModel:
    """Power-to-frequency transfer ``1 / (J s + D)`` of the VSM."""
    return StateSpaceModel([[-p.damping / p.inertia]], [[1.0 / p.inertia]],
                           [[1.0]], [[0.0]])


def synchronization_gain(h_p: StateSpaceModel, g_p: StateSpaceModel) -> StateSpaceModel:
    """Voltage-to-angle path: exact integrator in series with ``h_p * g_p``."""
    if h_p.n_outputs != 1 or h_p.n_inputs != 1:
        raise ValueError("swing transfer must be scalar")
    return lti.series(lti.series(g_p, h_p), lti.integrator(1))


def frame_embed(y_dq: StateSpaceModel, k_v: StateSpaceModel,
                op: OperatingPoint) -> StateSpaceModel:
    """Embed the swing-frame admittance into the local steady frame.

    Realizes ``(Y_dq + I0e K_v)(I + V0e K_v)^{-1}`` as the underlying
    signal flow (swing voltage = input minus angle rotation, angle = k_v
    of the swing voltage), which shares states between the two factors
    instead of duplicating the synchronization dynamics.

    Raises
    ------
    IllPosedLoopError
        When the scalar feedthrough loop ``1 + K_v(inf) V0e`` vanishes.
    """
    op.validate()
    if k_v.n_outputs != 1 or k_v.n_inputs != 2:
        raise ValueError("angle path must be 1x2")
    v0e = op.v_rot
    i0e = op.i_rot
    den = 1.0 + float((k_v.D @ v0e)[0])
    if abs(den) < 1e-12:
        raise IllPosedLoopError("frame embedding feedthrough loop is singular")
    ny, nk = y_dq.n_states, k_v.n_states
    # eps = (Ck xk + Dk u) / den ; v_dq = u - eps v0e
    eps_x = np.hstack([np.zeros((1, ny)), k_v.C]) / den
    eps_u = k_v.D / den
    A = np.zeros((ny + nk, ny + nk))
    B = np.zeros((ny + nk, 2))
    A[:ny, :ny] = y_dq.A
    A[:ny, :] -= np.outer(y_dq.B @ v0e, eps_x)
    B[:ny, :] = y_dq.B - np.outer(y_dq.B @ v0e, eps_u)
    A[ny:, ny:] = k_v.A
    A[ny:, :] -= np.outer(k_v.B @ v0e, eps_x)
    B[ny:, :] = k_v.B - np.outer(k_v.B @ v0e, eps_u)
    C = np.zeros((2, ny + nk))
    C[:, :ny] = y_dq.C
    C -= np.outer(y_dq.D @ v0e - i0e, eps_x)
    D = y_dq.D - np.outer(y_dq.D @ v0e - i0e, eps_u)
    return StateSpaceModel(A, B, C, D)


@dataclass(frozen=True)
class ConverterAdmittance:
    """Converter admittance bundle in the local steady frame."""

    y_dq: StateSpaceModel
    k_v: StateSpaceModel
    y_DQ: StateSpaceModel
    op: OperatingPoint
    params: GfmParameters
    bus: Optional[int] = None


def build_converter(p: GfmParameters, op: OperatingPoint,
                    bus: Optional[int] = None) -> ConverterAdmittance:
    """Full converter build: inner loops, VSM sync path, frame embedding.

    The embedding is realized directly as a signal-flow loop (the swing
    angle is a state), which shares the inner-loop states instead of
    duplicating them as the generic :func:`frame_embed` composition does.
    ``op`` must be in the local frame (v_q = 0).
    """
    op = op.local() if abs(op.v_q) > 1e-12 * op.v_mag else op
    p.validate()
    op.validate()
    y_dq = build_inner_admittance(p, op)
    g_p = power_gain(y_dq, op)
    k_v = synchronization_gain(swing_transfer(p), g_p)

    n = y_dq.n_states
    v0e = op.v_rot
    i0e = op.i_rot
    # states: [x_inner, x_h (swing frequency), x_eps (swing angle)]
    # v_dq = u - x_eps * v0e; P = rowP_x x_inner + rowP_v v_dq
    rowP_x = op.v_vec @ y_dq.C
    rowP_v = op.v_vec @ y_dq.D + op.i_vec
    N = n + 2
    A = np.zeros((N, N))
    B = np.zeros((N, 2))
    A[:n, :n] = y_dq.A
    A[:n, n + 1] = -y_dq.B @ v0e
    B[:n, :] = y_dq.B
    A[n, :n] = rowP_x / p.inertia
    A[n, n] = -p.damping / p.inertia
    A[n, n + 1] = -(rowP_v @ v0e) / p.inertia
    B[n, :] = rowP_v / p.inertia
    A[n + 1, n] = 1.0
    C = np.zeros((2, N))
    C[:, :n] = y_dq.C
    C[:, n + 1] = -y_dq.D @ v0e + i0e
    y_DQ = StateSpaceModel(A, B, C, y_dq.D.copy())
    return ConverterAdmittance(y_dq, k_v, y_DQ, op, p, bus)


@dataclass(frozen=True)
class Prop1Report:
    """DC structure of the embedded admittance."""

    matrix: np.ndarray
    beta: float
    trace: float
    template_error: float
    identity_error: float
    sectoriality: Sectoriality


def check_dc_structure(conv: ConverterAdmittance) -> Prop1Report:
    """Verify the zero-frequency structure of the embedded admittance.

    At s = 0 the matrix must match the constant-power template
    ``[[-i_d/v_d, -i_q/v_d], [beta, i_d/v_d]]`` (zero trace), satisfy
    ``Y(0) @ [-v_q, v_d]^T = [-i_q, i_d]^T``, and fail sectoriality.

    Raises
    ------
    AssumptionError
        If the operating point is not in canonical local form or the
        synchronization path vanishes.
    """
    op = conv.op
    if abs(op.v_q) > 1e-9 * op.v_mag or op.v_d == 0.0:
        raise AssumptionError("DC structure check requires v_q = 0, v_d != 0")
    kv_gain = conv.k_v.evaluate(1.0) @ op.v_rot.reshape(2, 1)
    if abs(complex(kv_gain[0, 0])) == 0.0:
        raise AssumptionError("synchronization path K_v V0e is identically zero")
    Y0 = conv.y_DQ.evaluate(0.0).real
    beta = float(Y0[1, 0])
    template = np.array(
        [
            [-op.i_d / op.v_d, -op.i_q / op.v_d],
            [beta, op.i_d / op.v_d],
        ]
    )
    template_error = float(np.abs(Y0 - template).max())
    identity_error = float(np.abs(Y0 @ op.v_rot - op.i_rot).max())
    return Prop1Report(
        matrix=Y0,
        beta=beta,
        trace=float(np.trace(Y0)),
        template_error=template_error,
        identity_error=identity_error,
        sectoriality=classify(Y0).kind,
    )
