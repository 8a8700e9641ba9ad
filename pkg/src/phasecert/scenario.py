"""Scenario ingestion and assembly.

A scenario is one TOML file describing the network (inline tables, CSV
paths, or the built-in IEEE 14-bus dataset), the converters with their
control parameters, the loop-shaping frame, and the frequency grid.
Assembly solves the power flow, linearizes every converter at its bus,
rotates the models into the global frame, reduces the network onto the
converter buses, and builds the transform set.
"""

from __future__ import annotations

import importlib.resources
import os
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - py310 path
    import tomli as tomllib

from . import network as net
from .converter import ConverterAdmittance, GfmParameters, OperatingPoint, build_converter
from .errors import ConfigError
from .lti import FrequencyGrid, StateSpaceModel, rotate_ports
from .transforms import (
    FrameKind,
    TransformSet,
    blended_set,
    naive_blended_set,
    power_polar_set,
    rectangular_set,
)

__all__ = [
    "ConverterSpec",
    "FrameSpec",
    "GridSpec",
    "Scenario",
    "AssembledScenario",
    "load_scenario",
    "builtin_scenario_names",
    "assemble_scenario",
]

_PARAM_KEYS = {
    "w0", "inertia", "damping", "r_v", "l_v", "k_p", "k_r", "r_f", "l_f",
    "k_pq", "k_iq", "q_filter", "q_control", "ideal_tracking",
}


@dataclass(frozen=True)
class ConverterSpec:
    bus: int
    p_set: float
    v_set: Optional[float] = None
    params: GfmParameters = field(default_factory=GfmParameters)


@dataclass(frozen=True)
class FrameSpec:
    kind: str = "blended"
    wc_hz: float = 10.0
    weight: str = "va_ref"
    va_ref_r: float = 0.05
    va_ref_x: float = 0.15


@dataclass(frozen=True)
class GridSpec:
    f_min: float = 0.01
    f_max: float = 1e4
    points: int = 400
    include_zero: bool = True

    def build(self) -> FrequencyGrid:
        return FrequencyGrid.default(self.f_min, self.f_max, self.points, self.include_zero)


@dataclass
class Scenario:
    name: str
    network: net.NetworkData
    converters: List[ConverterSpec]
    frame: FrameSpec = field(default_factory=FrameSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    description: str = ""


def builtin_scenario_names() -> List[str]:
    root = importlib.resources.files("phasecert") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def _resource_path(rel: str) -> str:
    return str(importlib.resources.files("phasecert") / rel)


def load_scenario(source) -> Scenario:
    """Load a scenario from a path or a built-in fixture name."""
    path = str(source)
    if not os.path.exists(path):
        candidate = _resource_path(f"scenarios/{path}.toml")
        if not os.path.exists(candidate):
            raise ConfigError(f"scenario '{source}' is neither a file nor a built-in name")
        path = candidate
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return _parse_scenario(raw, os.path.dirname(os.path.abspath(path)))


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"missing required key '{key}' in {where}")
    return table[key]


def _parse_scenario(raw: dict, base_dir: str) -> Scenario:
    name = _require(raw, "name", "scenario")
    net_tab = _require(raw, "network", "scenario")
    w0 = 2.0 * np.pi * float(net_tab.get("w0_hz", 50.0))

    if "builtin" in net_tab:
        if net_tab["builtin"] != "ieee14":
            raise ConfigError(f"unknown builtin network '{net_tab['builtin']}'")
        data = net.load_network_csv(
            _resource_path("data/ieee14_bus.csv"),
            _resource_path("data/ieee14_branch.csv"),
            w0,
        )
    elif "bus_csv" in net_tab:
        data = net.load_network_csv(
            os.path.join(base_dir, net_tab["bus_csv"]),
            os.path.join(base_dir, _require(net_tab, "branch_csv", "[network]")),
            w0,
        )
    else:
        buses = [
            net.BusData(
                bus=int(_require(b, "id", "[[network.bus]]")),
                kind=b.get("type", "pq"),
                v_set=float(b.get("v_set", 1.0)),
                p_gen=float(b.get("p_gen", 0.0)),
                p_load=float(b.get("p_load", 0.0)),
                q_load=float(b.get("q_load", 0.0)),
                g_shunt=float(b.get("g_shunt", 0.0)),
                b_shunt=float(b.get("b_shunt", 0.0)),
            )
            for b in net_tab.get("bus", [])
        ]
        branches = [
            net.BranchData(
                from_bus=int(_require(br, "from", "[[network.branch]]")),
                to_bus=int(_require(br, "to", "[[network.branch]]")),
                r=float(br.get("r", 0.0)),
                x=float(br.get("x", 0.0)),
                b=float(br.get("b", 0.0)),
                tap=float(br.get("tap", 1.0)),
            )
            for br in net_tab.get("branch", [])
        ]
        if not buses or not branches:
            raise ConfigError("[network] needs builtin=, bus_csv=, or inline bus/branch tables")
        data = net.NetworkData(buses, branches, w0)

    for ov in net_tab.get("branch_override", []):
        f, t = int(_require(ov, "from", "branch_override")), int(_require(ov, "to", "branch_override"))
        hit = [i for i, br in enumerate(data.branches)
               if {br.from_bus, br.to_bus} == {f, t}]
        if not hit:
            raise ConfigError(f"branch_override {f}-{t}: no such branch")
        for i in hit:
            br = data.branches[i]
            data.branches[i] = net.BranchData(
                br.from_bus, br.to_bus,
                float(ov.get("r", br.r)), float(ov.get("x", br.x)),
                float(ov.get("b", br.b)), float(ov.get("tap", br.tap)),
            )

    for ov in net_tab.get("bus_override", []):
        bid = int(_require(ov, "id", "bus_override"))
        for i, b in enumerate(data.buses):
            if b.bus == bid:
                data.buses[i] = net.BusData(
                    b.bus, ov.get("type", b.kind), float(ov.get("v_set", b.v_set)),
                    float(ov.get("p_gen", b.p_gen)), float(ov.get("p_load", b.p_load)),
                    float(ov.get("q_load", b.q_load)), float(ov.get("g_shunt", b.g_shunt)),
                    float(ov.get("b_shunt", b.b_shunt)),
                )
                break
        else:
            raise ConfigError(f"bus_override: no bus {bid}")

    conv_tabs = raw.get("converter", [])
    bus_ids = {b.bus for b in data.buses}
    converters = []
    for tab in conv_tabs:
        bus = int(_require(tab, "bus", "[[converter]]"))
        if bus not in bus_ids:
            raise ConfigError(f"converter bus {bus} not in network")
        ptab = dict(tab.get("params", {}))
        unknown = set(ptab) - _PARAM_KEYS
        if unknown:
            raise ConfigError(f"converter {bus}: unknown params {sorted(unknown)}")
        ptab.setdefault("w0", 2.0 * np.pi * float(net_tab.get("w0_hz", 50.0)))
        params = GfmParameters(**ptab)
        converters.append(
            ConverterSpec(bus, float(tab.get("p_set", 0.0)),
                          tab.get("v_set"), params)
        )

    ftab = raw.get("frame", {})
    frame = FrameSpec(
        kind=ftab.get("kind", "blended"),
        wc_hz=float(ftab.get("wc_hz", 10.0)),
        weight=ftab.get("weight", "va_ref"),
        va_ref_r=float(ftab.get("va_ref_r", 0.05)),
        va_ref_x=float(ftab.get("va_ref_x", 0.15)),
    )
    if frame.kind not in ("rectangular", "power-polar", "blended", "naive-blended"):
        raise ConfigError(f"unknown frame kind '{frame.kind}'")
    if frame.weight not in ("identity", "va_ref"):
        raise ConfigError(f"unknown frame weight '{frame.weight}'")

    gtab = raw.get("grid", {})
    grid = GridSpec(
        f_min=float(gtab.get("f_min", 0.01)),
        f_max=float(gtab.get("f_max", 1e4)),
        points=int(gtab.get("points", 400)),
        include_zero=bool(gtab.get("include_zero", True)),
    )
    return Scenario(name, data, converters, frame, grid, raw.get("description", ""))


@dataclass
class ScenarioConverter:
    bus: int
    admittance: ConverterAdmittance      # local frame
    y_global: StateSpaceModel
    op_global: OperatingPoint
    angle: float


@dataclass
class AssembledScenario:
    """Everything the criteria need: models, operating points, transforms."""

    name: str
    scenario: Scenario
    converters: List[ScenarioConverter]
    network: net.NetworkAdmittance
    pf: net.PowerFlowSolution

    @property
    def buses(self) -> List[int]:
        return [c.bus for c in self.converters]

    @property
    def conv_models(self) -> List[StateSpaceModel]:
        return [c.y_global for c in self.converters]

    def transform_set(self, kind: Optional[str] = None,
                      wc_hz: Optional[float] = None,
                      weight: Optional[str] = None) -> TransformSet:
        spec = self.scenario.frame
        kind = kind or spec.kind
        wc = 2.0 * np.pi * (wc_hz if wc_hz is not None else spec.wc_hz)
        weight = weight or spec.weight
        ops = [c.op_global for c in self.converters]
        if kind == "rectangular":
            return rectangular_set(len(ops))
        if kind == "power-polar":
            return power_polar_set(ops)
        if kind == "naive-blended":
            return naive_blended_set(ops, wc)
        if kind == "blended":
            return blended_set(
                ops, wc, weight,
                va_ref=(spec.va_ref_r, spec.va_ref_x),
                w0=self.scenario.network.w0,
            )
        raise ConfigError(f"unknown frame kind '{kind}'")

    def grid(self) -> FrequencyGrid:
        return self.scenario.grid.build()


def assemble_scenario(scn: Scenario) -> AssembledScenario:
    """Power flow, converter linearization, network reduction."""
    data = scn.network
    # converter dispatch goes onto its bus before the power flow
    for spec in scn.converters:
        for i, b in enumerate(data.buses):
            if b.bus == spec.bus:
                data.buses[i] = replace_bus(
                    b, kind="pv", p_gen=spec.p_set,
                    v_set=spec.v_set if spec.v_set is not None else b.v_set,
                )
    pf = net.power_flow(data)

    grounded = [b.bus for b in data.buses if b.kind == "slack"]
    ports = [spec.bus for spec in scn.converters]
    volts = {b.bus: pf.voltage(b.bus) for b in data.buses}
    asm = net.assemble(data, grounded=grounded, load_voltages=volts, port_buses=ports)
    if not ports:
        # converter-free scenario: eigenvalue studies get the bare network
        reduced = net.NetworkAdmittance(model=net.autonomous_model(asm),
                                        ports=[], assembly=asm)
    else:
        internal = [b for b in asm.bus_ids if b not in ports]
        reduced = net.kron_reduce(asm, internal)
    # keep port order aligned with the converter list
    if reduced.ports != ports:
        perm_models = {b: i for i, b in enumerate(reduced.ports)}
        order = [perm_models[b] for b in ports]
        reduced = net.NetworkAdmittance(
            model=_permute_ports(reduced.model, order),
            ports=ports,
            assembly=reduced.assembly,
        )

    converters = []
    for spec in scn.converters:
        bus = data.bus(spec.bus)
        v = pf.voltage(spec.bus)
        s_gen = complex(pf.injections[pf.bus_ids.index(spec.bus)]) + \
            complex(bus.p_load, bus.q_load)
        op_global = pf.operating_point(spec.bus, s_gen)
        angle = op_global.angle
        conv = build_converter(spec.params, op_global.local(), bus=spec.bus)
        y_global = rotate_ports(conv.y_DQ, [angle])
        converters.append(ScenarioConverter(spec.bus, conv, y_global, op_global, angle))
        reduced.port_ops[spec.bus] = op_global

    return AssembledScenario(scn.name, scn, converters, reduced, pf)


def replace_bus(b: net.BusData, **kw) -> net.BusData:
    return replace(b, **kw)


def _permute_ports(model: StateSpaceModel, order: List[int]) -> StateSpaceModel:
    idx = np.concatenate([[2 * i, 2 * i + 1] for i in order])
    P = np.zeros((len(idx), len(idx)))
    for r, c in enumerate(idx):
        P[r, c] = 1.0
    return StateSpaceModel(model.A, model.B @ P.T, P @ model.C, P @ model.D @ P.T)
