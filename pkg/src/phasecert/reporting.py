"""Report serialization: JSON for the full certificate, CSV for sweeps.

CSV files start with a ``#``-prefixed schema line followed by a column
header row; consumers should treat unknown columns as forward-compatible
additions within a schema version. Output is deterministic for identical
inputs (floats use shortest round-trip repr).
"""

from __future__ import annotations

import json
from typing import TextIO

import numpy as np

from .criteria import CertificateReport, GroundTruthResult

__all__ = [
    "SWEEP_SCHEMA",
    "EIG_SCHEMA",
    "EIGPHASE_SCHEMA",
    "report_dict",
    "write_report_json",
    "write_sweep_csv",
    "write_eig_csv",
    "write_eigphase_csv",
]

SWEEP_SCHEMA = "phasecert.sweep.v1"
EIG_SCHEMA = "phasecert.eig.v1"
EIGPHASE_SCHEMA = "phasecert.eigphase.v1"


def _f(x) -> str:
    return repr(float(x))


def report_dict(report: CertificateReport) -> dict:
    verdicts = []
    for v in report.verdicts:
        conv = [
            {
                "bus": bus,
                "class": p.kind.value,
                "phi_lo": float(p.interval.lo),
                "phi_hi": float(p.interval.hi),
                "sigma_min": float(p.gains.sigma_min),
                "sigma_max": float(p.gains.sigma_max),
            }
            for bus, p in zip(report.converter_buses, v.phase.converter_profiles)
        ]
        inv = v.phase.net_inv_profile
        verdicts.append(
            {
                "f_hz": float(v.f_hz),
                "gain_ok": v.gain.ok,
                "gain_lhs": float(v.gain.lhs),
                "gain_rhs": float(v.gain.rhs),
                "phase_ok": v.phase.ok,
                "phase_reason": v.phase.reason,
                "satisfied": v.satisfied,
                "margin": float(v.margin),
                "limiting_converter": v.limiting_converter,
                "converters": conv,
                "net_inverse": {
                    "class": inv.kind.value,
                    "phi_lo": float(inv.interval.lo),
                    "phi_hi": float(inv.interval.hi),
                },
                "net_sigma_min": float(v.net_gains.sigma_min),
            }
        )
    ol = report.openloop
    return {
        "schema": "phasecert.report.v1",
        "scenario": report.scenario,
        "frame": {
            "kind": report.frame_kind,
            "wc_hz": report.frame_wc_hz,
            "weight": report.frame_weight,
        },
        "converter_buses": list(report.converter_buses),
        "openloop": {
            "converters_stable": list(ol.converters_stable),
            "network_stable": ol.network_stable,
            "network_inverse_stable": ol.network_inverse_stable,
            "ok": ol.ok,
        },
        "certified": report.certified,
        "caveat": report.caveat,
        "note": report.note,
        "grid_hz": [float(f) for f in report.grid],
        "verdicts": verdicts,
    }


def write_report_json(report: CertificateReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report_dict(report), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _schema_line(schema: str, report: CertificateReport) -> str:
    return (
        f"# schema={schema} scenario={report.scenario} frame={report.frame_kind}"
        f" weight={report.frame_weight}\n"
    )


def write_sweep_csv(report: CertificateReport, fh_or_path) -> None:
    """One row per frequency: gains, per-converter phase data, network
    inverse phase data, and the verdicts."""
    close = False
    if not hasattr(fh_or_path, "write"):
        fh: TextIO = open(fh_or_path, "w")
        close = True
    else:
        fh = fh_or_path
    try:
        fh.write(_schema_line(SWEEP_SCHEMA, report))
        cols = ["f_hz", "gain_lhs", "gain_rhs"]
        for bus in report.converter_buses:
            cols += [f"c{bus}_class", f"c{bus}_sigma_max", f"c{bus}_phi_lo", f"c{bus}_phi_hi"]
        cols += [
            "netinv_class", "netinv_phi_lo", "netinv_phi_hi",
            "gain_ok", "phase_ok", "phase_reason", "satisfied", "limiting_converter",
        ]
        fh.write(",".join(cols) + "\n")
        for v in report.verdicts:
            row = [_f(v.f_hz), _f(v.gain.lhs), _f(v.gain.rhs)]
            for p in v.phase.converter_profiles:
                row += [p.kind.value, _f(p.gains.sigma_max), _f(p.interval.lo), _f(p.interval.hi)]
            inv = v.phase.net_inv_profile
            row += [
                inv.kind.value, _f(inv.interval.lo), _f(inv.interval.hi),
                str(int(v.gain.ok)), str(int(v.phase.ok)), v.phase.reason,
                str(int(v.satisfied)),
                "" if v.limiting_converter is None else str(v.limiting_converter),
            ]
            fh.write(",".join(row) + "\n")
    finally:
        if close:
            fh.close()


def write_eig_csv(result: GroundTruthResult, fh_or_path, scenario: str = "") -> None:
    close = False
    if not hasattr(fh_or_path, "write"):
        fh: TextIO = open(fh_or_path, "w")
        close = True
    else:
        fh = fh_or_path
    try:
        fh.write(f"# schema={EIG_SCHEMA} scenario={scenario} stable={int(result.stable)}\n")
        fh.write("index,real,imag,freq_hz,damping\n")
        for k, lam in enumerate(result.eigenvalues):
            mag = abs(lam)
            damping = -lam.real / mag if mag > 0 else 1.0
            fh.write(
                f"{k},{_f(lam.real)},{_f(lam.imag)},{_f(abs(lam.imag) / (2 * np.pi))},{_f(damping)}\n"
            )
    finally:
        if close:
            fh.close()


def write_eigphase_csv(report: CertificateReport, fh_or_path) -> None:
    """Loop eigenvalue phases next to the summed small-phase bounds."""
    close = False
    if not hasattr(fh_or_path, "write"):
        fh: TextIO = open(fh_or_path, "w")
        close = True
    else:
        fh = fh_or_path
    try:
        fh.write(_schema_line(EIGPHASE_SCHEMA, report))
        n = len(report.verdicts[0].loop_eig_args) if report.verdicts else 0
        cols = ["f_hz", "bound_lo", "bound_hi", "bounds_defined"]
        cols += [f"arg_lam{k}" for k in range(n)] + [f"mag_lam{k}" for k in range(n)]
        fh.write(",".join(cols) + "\n")
        for v in report.verdicts:
            defined = v.phase.reason != "non-sectorial"
            if defined:
                inv = v.phase.net_inv_profile.interval
                hi = max(p.interval.hi for p in v.phase.converter_profiles) + inv.hi
                lo = min(p.interval.lo for p in v.phase.converter_profiles) + inv.lo
            else:
                hi, lo = 2 * np.pi, -2 * np.pi
            row = [_f(v.f_hz), _f(lo), _f(hi), str(int(defined))]
            row += [_f(a) for a in v.loop_eig_args]
            row += [_f(m) for m in v.loop_eig_mags]
            fh.write(",".join(row) + "\n")
    finally:
        if close:
            fh.close()
