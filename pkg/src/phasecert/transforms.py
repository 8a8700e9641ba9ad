"""Loop-shaping frames.

A frame maps the converter relation ``i = Y_C(s) v`` into new coordinates
``J_C(s) = (E(s) Y_C(s) + C(s)) F(s)`` and the network into
``J_net(s) = (E(s) Y_net(s) - C(s)) F(s)`` (network current flows opposite
to the converter's). The translation term cancels in the sum, so
``det(J_C + J_net) = det(E) det(Y_C + Y_net) det(F)`` and closed-loop zeros
are preserved whenever the frame is well posed.

Available frames:

* rectangular: identity (plain admittances);
* power-polar: constant matrices mapping (voltage angle, magnitude) to
  (active, reactive power), which moves the constant-power behavior of a
  grid-forming converter into a quasi-sectorial DC response;
* blended: power-polar at low frequency, crossfaded through first-order
  filters into a weighted rectangular frame at high frequency. Only the
  offset and the input map are filtered; the output map stays constant.
  The default weight carries the inverse of a reference virtual admittance
  so the converter response flattens to (a scaled) identity around the
  nominal frequency;
* naive blended: the same crossfade applied to all three matrices; kept
  because it demonstrably loses sectoriality near the filter cutoff.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg

from . import descriptor as dsc
from . import lti
from .converter import OperatingPoint, ROT90
from .descriptor import DescriptorModel
from .errors import AssumptionError, UnstableInverseError
from .lti import StateSpaceModel

__all__ = [
    "FrameKind",
    "PolarTriple",
    "FilterPair",
    "VaWeight",
    "ConverterFrame",
    "TransformSet",
    "polar_matrices",
    "rectangular_set",
    "power_polar_set",
    "blended_set",
    "naive_blended_set",
    "transform_converter",
    "transform_network_model",
    "va_compensation",
    "check_transformed_openloop",
    "OpenLoopReport",
]


class FrameKind(enum.Enum):
    RECTANGULAR = "rectangular"
    POWER_POLAR = "power-polar"
    BLENDED = "blended"
    NAIVE_BLENDED = "naive-blended"


@dataclass(frozen=True)
class PolarTriple:
    """Constant matrices of the power-polar change of variables."""

    E: np.ndarray
    F: np.ndarray
    C: np.ndarray


def polar_matrices(op: OperatingPoint) -> PolarTriple:
    """Linearized (angle, magnitude) -> (P, Q) coordinate change.

    Rows follow the nonlinear definitions ``phi = atan2(v_q, v_d)``,
    ``|V| = hypot(v_d, v_q)``, ``P = v_d i_d + v_q i_q``,
    ``Q = v_q i_d - v_d i_q``:

    * output map ``E = [[v_d, v_q], [v_q, -v_d]]`` (current to power),
    * offset ``C = [[i_d, i_q], [-i_q, i_d]]`` (voltage to power),
    * inverse input map rows ``[-v_q, v_d] / |V|^2`` and
      ``[v_d, v_q] / |V|``.
    """
    op.validate()
    vd, vq, vm = op.v_d, op.v_q, op.v_mag
    E = np.array([[vd, vq], [vq, -vd]])
    C = np.array([[op.i_d, op.i_q], [-op.i_q, op.i_d]])
    F_inv = np.array([[-vq / vm**2, vd / vm**2], [vd / vm, vq / vm]])
    return PolarTriple(E, np.linalg.inv(F_inv), C)


@dataclass(frozen=True)
class FilterPair:
    """Complementary first-order blend filters, ``lpf + hpf = 1`` exactly."""

    wc: float

    def lpf(self, s: complex) -> complex:
        return self.wc / (s + self.wc)

    def hpf(self, s: complex) -> complex:
        return 1.0 - self.wc / (s + self.wc)

    def lpf_model(self, size: int = 1) -> StateSpaceModel:
        I = np.eye(size)
        return StateSpaceModel(-self.wc * I, self.wc * I, I, np.zeros((size, size)))

    def hpf_model(self, size: int = 1) -> StateSpaceModel:
        I = np.eye(size)
        return StateSpaceModel(-self.wc * I, self.wc * I, -I, I)


@dataclass(frozen=True)
class VaWeight:
    """Weight ``W(s) = scale * (R + s L)`` shaped like an inverse reference
    virtual admittance (2x2 dq impedance)."""

    z0: np.ndarray      # R + w0 L ROT90
    z1: np.ndarray      # L I2
    scale: float = 1.0

    @classmethod
    def from_reference(cls, r_v: float, l_v: float, w0: float, scale: float = 1.0) -> "VaWeight":
        lv = l_v / w0
        return cls(r_v * np.eye(2) + l_v * ROT90, lv * np.eye(2), scale)

    def evaluate(self, s: complex) -> np.ndarray:
        return self.scale * (self.z0 + s * self.z1)


@dataclass(frozen=True)
class ConverterFrame:
    """Per-converter shaping triple with fast per-frequency evaluation."""

    kind: FrameKind
    polar: Optional[PolarTriple] = None
    filters: Optional[FilterPair] = None
    weight: Optional[VaWeight] = None

    def E(self, s: complex) -> np.ndarray:
        if self.kind is FrameKind.RECTANGULAR:
            return np.eye(2)
        if self.kind is FrameKind.NAIVE_BLENDED:
            hl = self.filters.lpf(s)
            return hl * self.polar.E + (1.0 - hl) * np.eye(2)
        return self.polar.E.astype(complex)

    def C(self, s: complex) -> np.ndarray:
        if self.kind is FrameKind.RECTANGULAR:
            return np.zeros((2, 2), dtype=complex)
        if self.kind is FrameKind.POWER_POLAR:
            return self.polar.C.astype(complex)
        return self.filters.lpf(s) * self.polar.C

    def F(self, s: complex) -> np.ndarray:
        if self.kind is FrameKind.RECTANGULAR:
            return np.eye(2)
        if self.kind is FrameKind.POWER_POLAR:
            return self.polar.F.astype(complex)
        hl = self.filters.lpf(s)
        if self.kind is FrameKind.NAIVE_BLENDED:
            return hl * self.polar.F + (1.0 - hl) * np.eye(2)
        Einv = np.linalg.inv(self.polar.E)
        W = self.weight.evaluate(s) if self.weight is not None else np.eye(2)
        return hl * self.polar.F + (1.0 - hl) * W @ Einv


@dataclass(frozen=True)
class TransformSet:
    """Shaping triple for every converter plus block-diagonal aggregates."""

    kind: FrameKind
    frames: List[ConverterFrame]
    wc: Optional[float] = None
    weight_name: str = "identity"

    @property
    def n_converters(self) -> int:
        return len(self.frames)

    def E_block(self, s: complex) -> np.ndarray:
        return scipy.linalg.block_diag(*[f.E(s) for f in self.frames])

    def C_block(self, s: complex) -> np.ndarray:
        return scipy.linalg.block_diag(*[f.C(s) for f in self.frames])

    def F_block(self, s: complex) -> np.ndarray:
        return scipy.linalg.block_diag(*[f.F(s) for f in self.frames])

    def converter_response(self, y_jw: np.ndarray, i: int, s: complex) -> np.ndarray:
        f = self.frames[i]
        return (f.E(s) @ y_jw + f.C(s)) @ f.F(s)

    def network_response(self, y_net_jw: np.ndarray, s: complex) -> np.ndarray:
        return (self.E_block(s) @ y_net_jw - self.C_block(s)) @ self.F_block(s)


def rectangular_set(n_converters: int) -> TransformSet:
    return TransformSet(FrameKind.RECTANGULAR,
                        [ConverterFrame(FrameKind.RECTANGULAR) for _ in range(n_converters)])


def power_polar_set(ops: Sequence[OperatingPoint]) -> TransformSet:
    return TransformSet(
        FrameKind.POWER_POLAR,
        [ConverterFrame(FrameKind.POWER_POLAR, polar_matrices(op)) for op in ops],
    )


def _normalized_weight(polar: PolarTriple, wc: float, r_v: float, l_v: float,
                       w0: float) -> VaWeight:
    """Reference inverse virtual admittance scaled so both blend paths have
    comparable magnitude at the cutoff (keeps F well conditioned through
    the transition)."""
    raw = VaWeight.from_reference(r_v, l_v, w0)
    at_wc = raw.evaluate(1j * wc) @ np.linalg.inv(polar.E)
    denom = np.linalg.norm(at_wc, 2)
    scale = np.linalg.norm(polar.F, 2) / denom if denom > 0 else 1.0
    return VaWeight(raw.z0, raw.z1, scale)


def blended_set(ops: Sequence[OperatingPoint], wc: float,
                weight: str = "va_ref",
                va_ref: Optional[tuple] = None,
                w0: float = 2.0 * np.pi * 50.0) -> TransformSet:
    """Frequency-blended frame: constant output map, filtered offset,
    input map crossfaded from polar into ``W(s) E^{-1}``.

    ``weight`` selects the high-frequency input shape: ``"identity"``
    recovers the rectangular frame (up to similarity) and ``"va_ref"``
    carries the inverse of a shared reference virtual admittance
    ``va_ref = (r_v, l_v)``.
    """
    if wc <= 0:
        raise AssumptionError("blend cutoff must be positive")
    filt = FilterPair(wc)
    frames = []
    for op in ops:
        polar = polar_matrices(op)
        if weight == "va_ref":
            if va_ref is None:
                raise AssumptionError("va_ref weight requires (r_v, l_v)")
            w = _normalized_weight(polar, wc, va_ref[0], va_ref[1], w0)
        elif weight == "identity":
            w = None
        else:
            raise AssumptionError(f"unknown weight '{weight}'")
        frames.append(ConverterFrame(FrameKind.BLENDED, polar, filt, w))
    return TransformSet(FrameKind.BLENDED, frames, wc, weight)


def naive_blended_set(ops: Sequence[OperatingPoint], wc: float) -> TransformSet:
    """All three matrices crossfaded; reproduces the known failure mode of
    losing sectoriality near the cutoff."""
    if wc <= 0:
        raise AssumptionError("blend cutoff must be positive")
    filt = FilterPair(wc)
    return TransformSet(
        FrameKind.NAIVE_BLENDED,
        [ConverterFrame(FrameKind.NAIVE_BLENDED, polar_matrices(op), filt) for op in ops],
        wc,
    )


def _lpf_gain(M: np.ndarray, wc: float) -> StateSpaceModel:
    """First-order low-pass in series with a constant gain, ``lpf(s) M``."""
    I = np.eye(M.shape[1])
    return StateSpaceModel(-wc * I, wc * I, M, np.zeros(M.shape))


def _blend_gain(M_low: np.ndarray, M_high: np.ndarray, wc: float) -> StateSpaceModel:
    """``lpf(s) M_low + hpf(s) M_high``."""
    I = np.eye(M_low.shape[1])
    return StateSpaceModel(-wc * I, wc * I, M_low - M_high, M_high)


def _frame_F_split(frame: ConverterFrame):
    """Proper part and derivative coefficient of F(s): ``F = F_prop + s F1``."""
    polar, wc = frame.polar, frame.filters.wc
    Einv = np.linalg.inv(polar.E)
    if frame.weight is None:
        return _blend_gain(polar.F, Einv, wc), None
    w = frame.weight
    z0 = w.scale * w.z0 @ Einv
    f1 = w.scale * w.z1 @ Einv
    I = np.eye(2)
    C = polar.F - z0 + wc * f1
    D = z0 - wc * f1
    return StateSpaceModel(-wc * I, wc * I, C, D), f1


def transform_converter(y: StateSpaceModel, tset: TransformSet, i: int) -> StateSpaceModel:
    """State-space realization of ``J_C,i = (E_i Y + C_i) F_i``.

    The blended frame with a virtual-admittance weight carries one
    derivative of the input, absorbed by the strictly proper converter
    model; a feedthrough in ``y`` is rejected in that case.
    """
    frame = tset.frames[i]
    if frame.kind is FrameKind.RECTANGULAR:
        return y
    if frame.kind is FrameKind.POWER_POLAR:
        M = lti.parallel(lti.left_multiply(frame.polar.E, y), lti.static_gain(frame.polar.C))
        return lti.series(lti.static_gain(frame.polar.F), M)
    wc = frame.filters.wc
    if frame.kind is FrameKind.NAIVE_BLENDED:
        E_model = _blend_gain(frame.polar.E, np.eye(2), wc)
        F_model = _blend_gain(frame.polar.F, np.eye(2), wc)
        M = lti.parallel(lti.series(y, E_model), _lpf_gain(frame.polar.C, wc))
        return lti.series(F_model, M)
    # blended: E constant, C filtered, F = F_prop + s F1
    M = lti.parallel(lti.left_multiply(frame.polar.E, y), _lpf_gain(frame.polar.C, wc))
    F_prop, f1 = _frame_F_split(frame)
    J = lti.series(F_prop, M)
    if f1 is not None:
        if np.abs(y.D).max() > 1e-12:
            raise AssumptionError(
                "blended va-weight transform needs a strictly proper converter model"
            )
        J = lti.parallel(J, lti.times_s(lti.right_multiply(M, f1)))
    return J


def transform_network_model(y_net: StateSpaceModel, tset: TransformSet) -> DescriptorModel:
    """Descriptor realization of ``J_net = (E Y_net - C) F``.

    Descriptor form is used because the derivative in the weighted input
    map together with a network feedthrough (port conductance) makes
    ``J_net`` improper; its poles and zeros remain well defined.
    """
    n = tset.n_converters
    if y_net.n_inputs != 2 * n:
        raise ValueError("network ports do not match the transform set")
    kind = tset.kind
    if kind is FrameKind.RECTANGULAR:
        return dsc.from_state_space(y_net)
    E_blk = scipy.linalg.block_diag(*[f.polar.E for f in tset.frames])
    C_blk = scipy.linalg.block_diag(*[f.polar.C for f in tset.frames])
    F_blk = scipy.linalg.block_diag(*[f.polar.F for f in tset.frames])
    if kind is FrameKind.POWER_POLAR:
        M = lti.parallel(lti.left_multiply(E_blk, y_net), lti.static_gain(-C_blk))
        return dsc.from_state_space(lti.series(lti.static_gain(F_blk), M))
    wc = tset.frames[0].filters.wc
    if kind is FrameKind.NAIVE_BLENDED:
        E_model = _blend_gain(E_blk, np.eye(2 * n), wc)
        F_model = _blend_gain(F_blk, np.eye(2 * n), wc)
        M = lti.parallel(lti.series(y_net, E_model), _lpf_gain(-C_blk, wc))
        return dsc.from_state_space(lti.series(F_model, M))
    M = lti.parallel(lti.left_multiply(E_blk, y_net), _lpf_gain(-C_blk, wc))
    props, f1s = [], []
    for f in tset.frames:
        prop, f1 = _frame_F_split(f)
        props.append(prop)
        f1s.append(f1 if f1 is not None else np.zeros((2, 2)))
    F_desc = dsc.from_state_space(lti.block_diag(props))
    F1_blk = scipy.linalg.block_diag(*f1s)
    if np.abs(F1_blk).max() > 0:
        F_desc = F_desc.add(dsc.derivative_gain(F1_blk))
    return F_desc.series(dsc.from_state_space(M))


def va_compensation(y: StateSpaceModel, y_v: StateSpaceModel) -> StateSpaceModel:
    """Post-multiply by the inverse of a virtual admittance: ``Y Y_v^{-1}``.

    ``y_v`` must be a strictly proper 2x2 admittance with invertible B and
    C (an RL element), so its inverse is the affine impedance
    ``Z(s) = Z0 + s Z1``; ``y`` must be strictly proper to absorb the
    derivative.

    Raises
    ------
    UnstableInverseError
        If ``y_v`` is not stably invertible in this structural sense.
    """
    if y_v.n_states != y_v.n_inputs or y_v.n_inputs != y_v.n_outputs:
        raise UnstableInverseError("virtual admittance must be a square first-order element")
    if y_v.D.size and np.abs(y_v.D).max() > 1e-12:
        raise UnstableInverseError("virtual admittance must be strictly proper")
    try:
        Binv = np.linalg.inv(y_v.B)
        Cinv = np.linalg.inv(y_v.C)
    except np.linalg.LinAlgError as exc:
        raise UnstableInverseError("virtual admittance is not invertible") from exc
    z1 = Binv @ Cinv
    z0 = -Binv @ y_v.A @ Cinv
    if np.abs(y.D).max() > 1e-12:
        raise UnstableInverseError("compensated model must be strictly proper")
    return lti.parallel(lti.right_multiply(y, z0), lti.times_s(lti.right_multiply(y, z1)))


@dataclass(frozen=True)
class OpenLoopReport:
    """Stability of the transformed open-loop systems.

    ``ok`` gates the stability criteria: every transformed converter, the
    transformed network, and the network inverse must all be stable.
    """

    converters_stable: List[bool]
    network_stable: bool
    network_inverse_stable: bool
    converter_spectra: List[np.ndarray]
    network_zero_spectrum: np.ndarray

    @property
    def ok(self) -> bool:
        return all(self.converters_stable) and self.network_stable \
            and self.network_inverse_stable


def check_transformed_openloop(j_converters: Sequence[StateSpaceModel],
                               j_net: DescriptorModel,
                               margin: float = 0.0) -> OpenLoopReport:
    """Verify stability of each ``J_C,i``, of ``J_net``, and of its inverse.

    Inverse stability is decided by the finite transmission zeros of
    ``J_net`` (the poles of the inverse system); failure blocks criterion
    application but is reported, not raised.
    """
    conv_ok, conv_spec = [], []
    for j in j_converters:
        res = lti.is_stable(j, margin)
        conv_ok.append(bool(res.stable))
        conv_spec.append(res.spectrum)
    net_poles = j_net.poles()
    net_ok = _all_left(net_poles, margin)
    zeros = j_net.zeros()
    inv_ok = _all_left(zeros, margin)
    return OpenLoopReport(conv_ok, net_ok, inv_ok, conv_spec, zeros)


def _all_left(spectrum: np.ndarray, margin: float) -> bool:
    if spectrum.size == 0:
        return True
    scale = max(1.0, np.abs(spectrum).max())
    return bool(spectrum.real.max() < -margin - lti.STABILITY_RTOL * scale)
