"""Mixed small-gain / small-phase certification.

Per frequency, the decentralized test accepts if either

* gain: ``max_i sigma_max(J_C,i) < sigma_min(J_net)``, or
* phase: every ``J_C,i`` is at least quasi-sectorial, ``J_net`` inverse is
  strictly sectorial, and the summed phase intervals clear ``+-pi``:
  ``max_i phi_hi(J_C,i) < pi - phi_hi(J_net^{-1})`` and
  ``min_i phi_lo(J_C,i) > -pi - phi_lo(J_net^{-1})``.

A certificate additionally requires the transformed open-loop systems
(every converter, the network, and the network inverse) to be stable. The
result is sufficient only: a failed certificate carries no instability
claim, and every report records that the conditions were checked on a
finite frequency grid rather than the continuum.

The ground-truth path assembles the exact closed loop (all converters plus
the unreduced network) as a descriptor pencil and solves for its
eigenvalues; it is used to validate soundness, never by the certificate
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import lti
from .descriptor import closed_loop_poles
from .errors import OpenLoopUnstableError
from .lti import FrequencyGrid, StateSpaceModel
from .phase import (
    GainExtrema,
    PhaseProfile,
    Sectoriality,
    gain_extrema,
    phase_profile,
)
from .transforms import (
    OpenLoopReport,
    TransformSet,
    check_transformed_openloop,
    transform_converter,
    transform_network_model,
)

__all__ = [
    "FrequencyVerdict",
    "CertificateReport",
    "GroundTruthResult",
    "gain_condition",
    "phase_condition",
    "certify",
    "certify_centralized",
    "ground_truth",
]

#: strict inequalities must clear this relative slack to count as satisfied
STRICT_SLACK = 1e-9

GRID_CAVEAT = (
    "conditions verified on a finite frequency grid, not the continuum; "
    "refinement narrows but cannot close the gap"
)
INCONCLUSIVE_NOTE = "inconclusive w.r.t. instability: a failed certificate carries no stability claim"


@dataclass(frozen=True)
class GainVerdict:
    ok: bool
    lhs: float      # max over converters of sigma_max
    rhs: float      # sigma_min of the network


def gain_condition(converters: Sequence[np.ndarray], network: np.ndarray) -> GainVerdict:
    """Decentralized gain test at one frequency."""
    lhs = max(gain_extrema(m).sigma_max for m in converters)
    rhs = gain_extrema(network).sigma_min
    slack = STRICT_SLACK * max(lhs, rhs, 1e-300)
    return GainVerdict(bool(lhs < rhs - slack), float(lhs), float(rhs))


@dataclass(frozen=True)
class PhaseVerdict:
    ok: bool
    reason: str     # "ok" | "non-sectorial" | "overlap"
    converter_profiles: List[PhaseProfile]
    net_inv_profile: PhaseProfile


def phase_condition(converters: Sequence[np.ndarray], network_inverse: np.ndarray) -> PhaseVerdict:
    """Decentralized phase test at one frequency.

    Sectoriality gates: each converter at least quasi-sectorial, the
    network inverse strictly sectorial; otherwise the verdict reason is
    ``non-sectorial`` without evaluating the interval inequalities.
    """
    conv = [phase_profile(m) for m in converters]
    inv = phase_profile(network_inverse)
    if any(not p.kind.at_least_quasi for p in conv) or inv.kind is not Sectoriality.STRICT:
        return PhaseVerdict(False, "non-sectorial", conv, inv)
    hi = max(p.interval.hi for p in conv)
    lo = min(p.interval.lo for p in conv)
    slack = STRICT_SLACK * np.pi
    ok = (hi < np.pi - inv.interval.hi - slack) and (lo > -np.pi - inv.interval.lo + slack)
    return PhaseVerdict(bool(ok), "ok" if ok else "overlap", conv, inv)


@dataclass(frozen=True)
class FrequencyVerdict:
    f_hz: float
    gain: GainVerdict
    phase: PhaseVerdict
    net_gains: GainExtrema
    loop_eig_args: np.ndarray
    loop_eig_mags: np.ndarray
    limiting_converter: Optional[int]

    @property
    def satisfied(self) -> bool:
        return self.gain.ok or self.phase.ok

    @property
    def margin(self) -> float:
        """Signed relative margin of the better of the two conditions."""
        g = (self.gain.rhs - self.gain.lhs) / max(self.gain.rhs, self.gain.lhs, 1e-300)
        if self.phase.reason == "non-sectorial":
            p = -1.0
        else:
            inv = self.phase.net_inv_profile.interval
            hi = max(pr.interval.hi for pr in self.phase.converter_profiles)
            lo = min(pr.interval.lo for pr in self.phase.converter_profiles)
            p = min(np.pi - inv.hi - hi, lo + np.pi + inv.lo) / np.pi
        return float(max(g, p))


@dataclass
class CertificateReport:
    scenario: str
    frame_kind: str
    frame_wc_hz: Optional[float]
    frame_weight: str
    grid: FrequencyGrid
    openloop: OpenLoopReport
    verdicts: List[FrequencyVerdict]
    certified: bool
    caveat: str = GRID_CAVEAT
    note: str = ""
    converter_buses: List[int] = field(default_factory=list)

    def failures(self) -> List[FrequencyVerdict]:
        return [v for v in self.verdicts if not v.satisfied]


def _limiting_converter(buses: Sequence[int], gain: GainVerdict,
                        phase: PhaseVerdict) -> Optional[int]:
    """Converter dominating the verdict: the non-sectorial / most phase-
    violating unit when the phase path fails, else the highest-gain unit."""
    if not buses:
        return None
    conv = phase.converter_profiles
    non = [k for k, p in enumerate(conv) if not p.kind.at_least_quasi]
    if non:
        return buses[non[0]]
    if not phase.ok and conv:
        inv = phase.net_inv_profile.interval
        scores = [
            max(p.interval.hi + inv.hi - np.pi, -np.pi - inv.lo - p.interval.lo)
            for p in conv
        ]
        return buses[int(np.argmax(scores))]
    return None


def _evaluate_point(f_hz, conv_models, buses, net, tset) -> FrequencyVerdict:
    import scipy.linalg

    s = 2j * np.pi * f_hz
    y_cs = [m.evaluate(s) for m in conv_models]
    y_net = net.port_response(f_hz)
    j_cs = [tset.converter_response(y, i, s) for i, y in enumerate(y_cs)]
    j_net = tset.network_response(y_net, s)
    j_inv = np.linalg.inv(j_net)
    gv = gain_condition(j_cs, j_net)
    pv = phase_condition(j_cs, j_inv)
    j_blk = scipy.linalg.block_diag(*j_cs)
    lam = np.linalg.eigvals(j_blk @ j_inv)
    eig_args = np.angle(lam)
    if pv.reason != "non-sectorial":
        # express the arguments in the branch of the summed phase bounds,
        # whose window is narrower than 2 pi but may extend past +-pi
        inv = pv.net_inv_profile.interval
        hi = max(p.interval.hi for p in pv.converter_profiles) + inv.hi
        lo = min(p.interval.lo for p in pv.converter_profiles) + inv.lo
        mid = 0.5 * (lo + hi)
        eig_args = eig_args + 2 * np.pi * np.round((mid - eig_args) / (2 * np.pi))
    order = np.argsort(eig_args)
    limiting = _limiting_converter(buses, gv, pv)
    return FrequencyVerdict(float(f_hz), gv, pv, gain_extrema(j_net),
                            eig_args[order], np.abs(lam)[order], limiting)


def certify(conv_models: Sequence[StateSpaceModel], buses: Sequence[int],
            net, tset: TransformSet, grid: FrequencyGrid,
            scenario: str = "", refine: bool = True,
            refine_threshold: float = 0.05, max_refine: int = 120) -> CertificateReport:
    """Run the decentralized certificate over a frequency grid.

    ``conv_models`` are the converter admittances in the global frame (one
    2x2 model per bus in ``buses``); ``net`` is the reduced network
    admittance with matching port order. Raises
    :class:`OpenLoopUnstableError` when the transformed open loop fails its
    stability precondition, since the criterion is then inapplicable.

    With ``refine`` on, extra grid points are inserted where the margin of
    the winning condition falls below ``refine_threshold`` or the verdict
    flips between neighbors.
    """
    if not conv_models:
        raise OpenLoopUnstableError("certification requires at least one converter")
    j_models = [transform_converter(m, tset, i) for i, m in enumerate(conv_models)]
    j_net_model = transform_network_model(net.model, tset)
    openloop = check_transformed_openloop(j_models, j_net_model)
    for m in conv_models:
        if not lti.is_stable(m).stable:
            raise OpenLoopUnstableError("converter admittance is open-loop unstable")
    if not openloop.ok:
        raise OpenLoopUnstableError(
            "transformed open loop unstable "
            f"(converters {openloop.converters_stable}, network {openloop.network_stable}, "
            f"inverse {openloop.network_inverse_stable}); criterion inapplicable"
        )

    verdicts = {
        float(f): _evaluate_point(f, conv_models, buses, net, tset) for f in grid
    }
    if refine:
        budget = max_refine
        frontier = True
        while frontier and budget > 0:
            fs = sorted(verdicts)
            inserts = []
            for a, b in zip(fs[:-1], fs[1:]):
                va, vb = verdicts[a], verdicts[b]
                close = abs(va.margin) < refine_threshold or abs(vb.margin) < refine_threshold
                flip = va.satisfied != vb.satisfied
                if not (close or flip):
                    continue
                mid = 0.5 * (a + b) if a == 0.0 else float(np.sqrt(a * b))
                if mid <= a or mid >= b:
                    continue
                inserts.append(mid)
            inserts = inserts[:budget]
            for f in inserts:
                verdicts[f] = _evaluate_point(f, conv_models, buses, net, tset)
            budget -= len(inserts)
            frontier = bool(inserts)

    ordered = [verdicts[f] for f in sorted(verdicts)]
    certified = openloop.ok and all(v.satisfied for v in ordered)
    return CertificateReport(
        scenario=scenario,
        frame_kind=tset.kind.value,
        frame_wc_hz=(tset.wc / (2 * np.pi) if tset.wc else None),
        frame_weight=tset.weight_name,
        grid=FrequencyGrid(sorted(verdicts)),
        openloop=openloop,
        verdicts=ordered,
        certified=certified,
        note="" if certified else INCONCLUSIVE_NOTE,
        converter_buses=list(buses),
    )


def certify_centralized(conv_models: Sequence[StateSpaceModel], buses: Sequence[int],
                        net, tset: TransformSet, grid: FrequencyGrid,
                        scenario: str = "") -> CertificateReport:
    """Aggregate-loop variant: gain product and summed phases of the full
    block-diagonal converer matrix against the network inverse.

    Accepts at a frequency if ``sigma_max(J_C) sigma_max(J_net^{-1}) < 1``
    or the loop phases clear ``+-pi`` with the aggregate at least
    semi-sectorial and the inverse strictly sectorial.
    """
    import scipy.linalg

    j_models = [transform_converter(m, tset, i) for i, m in enumerate(conv_models)]
    j_net_model = transform_network_model(net.model, tset)
    openloop = check_transformed_openloop(j_models, j_net_model)
    if not openloop.ok:
        raise OpenLoopUnstableError("open loop unstable; criterion inapplicable")

    verdicts = []
    for f in grid:
        s = 2j * np.pi * f
        j_blk = scipy.linalg.block_diag(
            *[tset.converter_response(m.evaluate(s), i, s) for i, m in enumerate(conv_models)]
        )
        j_inv = np.linalg.inv(tset.network_response(net.port_response(f), s))
        p1 = phase_profile(j_blk)
        p2 = phase_profile(j_inv)
        prod = gain_extrema(j_blk).sigma_max * gain_extrema(j_inv).sigma_max
        gv = GainVerdict(bool(prod < 1.0 - STRICT_SLACK), float(prod), 1.0)
        if p1.kind is Sectoriality.NON or p2.kind is not Sectoriality.STRICT:
            pv = PhaseVerdict(False, "non-sectorial", [p1], p2)
        else:
            slack = STRICT_SLACK * np.pi
            ok = (p1.interval.hi + p2.interval.hi < np.pi - slack) and \
                 (p1.interval.lo + p2.interval.lo > -np.pi + slack)
            pv = PhaseVerdict(bool(ok), "ok" if ok else "overlap", [p1], p2)
        lam = np.linalg.eigvals(j_blk @ j_inv)
        order = np.argsort(np.angle(lam))
        verdicts.append(FrequencyVerdict(float(f), gv, pv, gain_extrema(j_inv),
                                         np.angle(lam)[order], np.abs(lam)[order], None))
    certified = all(v.satisfied for v in verdicts)
    return CertificateReport(
        scenario=scenario,
        frame_kind=tset.kind.value,
        frame_wc_hz=(tset.wc / (2 * np.pi) if tset.wc else None),
        frame_weight=tset.weight_name,
        grid=grid,
        openloop=openloop,
        verdicts=verdicts,
        certified=certified,
        note="" if certified else INCONCLUSIVE_NOTE,
        converter_buses=list(buses),
    )


@dataclass(frozen=True)
class GroundTruthResult:
    eigenvalues: np.ndarray
    stable: bool
    max_real: float
    dominant_mode_hz: Optional[float]

    @property
    def unstable_modes(self) -> np.ndarray:
        return self.eigenvalues[self.eigenvalues.real > 0]


def ground_truth(conv_models: Sequence[StateSpaceModel], net) -> GroundTruthResult:
    """Closed-loop spectrum of the exact interconnection.

    The converters and the (unreduced) network share their bus voltages as
    algebraic pencil variables; finite pencil eigenvalues are the
    closed-loop poles, i.e. the zeros of ``det(Y_C(s) + Y_net(s))``.
    """
    eigs = closed_loop_poles(list(conv_models), net.model)
    eigs = np.sort_complex(eigs)
    if eigs.size == 0:
        return GroundTruthResult(eigs, True, -np.inf, None)
    scale = max(1.0, np.abs(eigs).max())
    max_real = float(eigs.real.max())
    stable = max_real < -lti.STABILITY_RTOL * scale
    osc = eigs[np.abs(eigs.imag) > 1e-9]
    if not stable:
        cand = eigs[eigs.real > -lti.STABILITY_RTOL * scale]
        dom = cand[np.argmax(cand.real)]
    elif osc.size:
        dom = osc[np.argmax(osc.real)]
    else:
        dom = None
    dom_hz = float(abs(dom.imag) / (2 * np.pi)) if dom is not None else None
    return GroundTruthResult(eigs, bool(stable), max_real, dom_hz)
