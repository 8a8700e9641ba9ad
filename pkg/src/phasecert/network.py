"""dq-frame dynamic network model.

Branch/shunt data (per-unit R, X at nominal frequency, line charging B) is
promoted to dynamic RL/C elements with ``L = X / w0`` and ``C = B / w0``.
The nodal admittance is available two ways, and the two must agree exactly:

* per-frequency complex assembly plus Schur-complement Kron reduction
  (used by sweeps and as the oracle), and
* a realified state-space realization whose states are branch currents and
  interior capacitor voltages (used for eigenvalue studies).

Complex phasor modeling: every dq signal pair is one complex signal, every
element admittance a complex-coefficient rational function; realification
doubles states and expands each entry ``m`` into ``[[Re m, -Im m], [Im m,
Re m]]``. The real 2x2 block response at ``+j w`` therefore combines the
two phasor sidebands ``w + w0`` and ``w - w0``.

Conventions: ideal sources (slack buses) are grounded in the small-signal
model; loads become constant shunt admittances at their power-flow voltage;
port (converter) buses may carry shunt conductance but not capacitance, so
the realization stays proper. Line charging attached to a port end is
dropped at assembly time.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .converter import OperatingPoint
from .errors import (
    AssemblyError,
    DegenerateBranchError,
    DisconnectedGraphError,
    PowerFlowError,
    SingularInteriorError,
)
from .lti import StateSpaceModel, rotate_ports

__all__ = [
    "BranchData",
    "BusData",
    "NetworkData",
    "NodalAssembly",
    "NetworkAdmittance",
    "PowerFlowSolution",
    "branch_dq",
    "assemble",
    "kron_reduce",
    "to_global_frame",
    "power_flow",
    "load_network_csv",
    "realify_matrix",
    "real_block_response",
]


@dataclass(frozen=True)
class BranchData:
    """Series R-X branch with total line-charging susceptance B.

    ``tap`` is an off-nominal turns ratio on the from side. ``to_bus = 0``
    denotes a shunt branch to ground.
    """

    from_bus: int
    to_bus: int
    r: float
    x: float
    b: float = 0.0
    tap: float = 1.0

    def validate(self):
        if self.r < 0 or (self.r == 0.0 and self.x == 0.0):
            raise DegenerateBranchError(f"branch {self.from_bus}-{self.to_bus}: need r > 0 or x > 0")
        if self.tap <= 0:
            raise AssemblyError("tap must be positive")


@dataclass(frozen=True)
class BusData:
    bus: int
    kind: str = "pq"            # slack | pv | pq
    v_set: float = 1.0
    p_gen: float = 0.0
    p_load: float = 0.0
    q_load: float = 0.0
    g_shunt: float = 0.0
    b_shunt: float = 0.0


@dataclass
class NetworkData:
    buses: List[BusData]
    branches: List[BranchData]
    w0: float = 2.0 * np.pi * 50.0

    def __post_init__(self):
        ids = [b.bus for b in self.buses]
        if len(set(ids)) != len(ids):
            raise AssemblyError("duplicate bus ids")
        known = set(ids)
        for br in self.branches:
            br.validate()
            if br.from_bus not in known or (br.to_bus != 0 and br.to_bus not in known):
                raise AssemblyError(f"branch {br.from_bus}-{br.to_bus} references unknown bus")
        self._check_connected()

    def _check_connected(self):
        ids = [b.bus for b in self.buses]
        parent = {i: i for i in ids}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for br in self.branches:
            if br.to_bus == 0:
                continue
            parent[find(br.from_bus)] = find(br.to_bus)
        roots = {find(i) for i in ids}
        if len(roots) > 1:
            raise DisconnectedGraphError(f"network graph has {len(roots)} components")

    def bus(self, bus_id: int) -> BusData:
        for b in self.buses:
            if b.bus == bus_id:
                return b
        raise AssemblyError(f"no bus {bus_id}")


def branch_dq(r: float, l: float, w0: float) -> StateSpaceModel:
    """2x2 dq admittance of a series RL branch.

    Inverse of ``Z(s) = [[r + s l, -w0 l], [w0 l, r + s l]]``; ``l`` is the
    inductance (per-unit reactance divided by ``w0``). ``l = 0`` yields the
    static conductance.
    """
    if r < 0 or l < 0 or (r == 0.0 and l == 0.0):
        raise DegenerateBranchError("branch needs r > 0 or l > 0")
    I2 = np.eye(2)
    if l == 0.0:
        return StateSpaceModel(np.zeros((0, 0)), np.zeros((0, 2)), np.zeros((2, 0)), I2 / r)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    A = (-r * I2 - w0 * l * rot) / l
    return StateSpaceModel(A, I2 / l, I2, np.zeros((2, 2)))


def realify_matrix(M: np.ndarray) -> np.ndarray:
    """Expand complex entries into interleaved (d, q) 2x2 real blocks."""
    M = np.atleast_2d(M)
    out = np.zeros((2 * M.shape[0], 2 * M.shape[1]))
    out[0::2, 0::2] = M.real
    out[0::2, 1::2] = -M.imag
    out[1::2, 0::2] = M.imag
    out[1::2, 1::2] = M.real
    return out


def real_block_response(y_plus: np.ndarray, y_minus: np.ndarray) -> np.ndarray:
    """Real 2x2-block response at ``+j w`` from the two phasor sidebands.

    ``y_plus`` is the complex assembly at ``s = j w`` and ``y_minus`` at
    ``s = -j w``; the dq response mixes ``y_plus`` with ``conj(y_minus)``.
    """
    gp = np.atleast_2d(y_plus)
    gm = np.conj(np.atleast_2d(y_minus))
    out = np.zeros((2 * gp.shape[0], 2 * gp.shape[1]), dtype=complex)
    half = 0.5 * (gp + gm)
    diff = 0.5j * (gp - gm)
    out[0::2, 0::2] = half
    out[0::2, 1::2] = diff
    out[1::2, 0::2] = -diff
    out[1::2, 1::2] = half
    return out


class NodalAssembly:
    """Per-frequency complex nodal admittance of the small-signal network.

    Built from :class:`NetworkData` with ideal-source buses grounded and
    loads converted to shunts; see :func:`assemble`.
    """

    def __init__(self, bus_ids: Sequence[int], dynamic_branches, static_stamps,
                 shunt_g: np.ndarray, shunt_c: np.ndarray, w0: float):
        self.bus_ids = list(bus_ids)
        self.index = {b: i for i, b in enumerate(self.bus_ids)}
        self.dynamic_branches = dynamic_branches  # (i_from|None, i_to|None, r, l, tap)
        self.static_stamps = static_stamps        # (i_from|None, i_to|None, g, tap)
        self.shunt_g = shunt_g
        self.shunt_c = shunt_c
        self.w0 = w0

    @property
    def n_buses(self) -> int:
        return len(self.bus_ids)

    def complex_nodal(self, s: complex) -> np.ndarray:
        """Full complex nodal matrix at ``s`` (grounded buses removed)."""
        n = self.n_buses
        Y = np.zeros((n, n), dtype=complex)
        Y[np.diag_indices(n)] += self.shunt_g + (s + 1j * self.w0) * self.shunt_c
        for (fi, ti, r, l, tap) in self.dynamic_branches:
            y = 1.0 / (r + (s + 1j * self.w0) * l)
            self._stamp(Y, fi, ti, y, tap)
        for (fi, ti, g, tap) in self.static_stamps:
            self._stamp(Y, fi, ti, g, tap)
        return Y

    @staticmethod
    def _stamp(Y, fi, ti, y, tap):
        if fi is not None:
            Y[fi, fi] += y / tap**2
        if ti is not None:
            Y[ti, ti] += y
        if fi is not None and ti is not None:
            Y[fi, ti] -= y / tap
            Y[ti, fi] -= y / tap

    def reduced(self, s: complex, ports: Sequence[int]) -> np.ndarray:
        """Schur complement onto the port buses at one frequency."""
        Y = self.complex_nodal(s)
        p = [self.index[b] for b in ports]
        q = [i for i in range(self.n_buses) if i not in set(p)]
        Ypp = Y[np.ix_(p, p)]
        if not q:
            return Ypp
        Yqq = Y[np.ix_(q, q)]
        cond = np.linalg.cond(Yqq)
        if not np.isfinite(cond) or cond > 1e13:
            raise SingularInteriorError(f"interior block singular at s = {s}")
        return Ypp - Y[np.ix_(p, q)] @ np.linalg.solve(Yqq, Y[np.ix_(q, p)])

    def port_response(self, f_hz: float, ports: Sequence[int]) -> np.ndarray:
        """Real 2x2-block port admittance at ``+j 2 pi f``."""
        w = 2.0 * np.pi * f_hz
        return real_block_response(self.reduced(1j * w, ports), self.reduced(-1j * w, ports))

    def full_solve_response(self, f_hz: float, ports: Sequence[int]) -> np.ndarray:
        """Oracle: port admittance via the full unreduced system.

        Applies unit port voltages, solves the full nodal system with zero
        injections at interior buses, and reads the port currents.
        """
        w = 2.0 * np.pi * f_hz

        def one_side(s):
            Y = self.complex_nodal(s)
            p = [self.index[b] for b in ports]
            q = [i for i in range(self.n_buses) if i not in set(p)]
            out = np.zeros((len(p), len(p)), dtype=complex)
            for k in range(len(p)):
                v = np.zeros(self.n_buses, dtype=complex)
                v[p[k]] = 1.0
                if q:
                    # interior voltages from zero interior injection
                    v_q = -np.linalg.solve(Y[np.ix_(q, q)], Y[np.ix_(q, p)] @ v[p])
                    v[q] = v_q
                i_all = Y @ v
                out[:, k] = i_all[p]
            return out

        return real_block_response(one_side(1j * w), one_side(-1j * w))


@dataclass
class NetworkAdmittance:
    """Kron-reduced network admittance with port bookkeeping."""

    model: StateSpaceModel
    ports: List[int]
    assembly: NodalAssembly
    port_ops: Dict[int, OperatingPoint] = field(default_factory=dict)

    @property
    def n_ports(self) -> int:
        return len(self.ports)

    def evaluate(self, s: complex) -> np.ndarray:
        return self.model.evaluate(s)

    def port_response(self, f_hz: float) -> np.ndarray:
        """Exact per-frequency response via the complex Schur complement."""
        return self.assembly.port_response(f_hz, self.ports)


def assemble(data: NetworkData, grounded: Sequence[int] = (),
             load_voltages: Optional[Dict[int, complex]] = None,
             port_buses: Sequence[int] = ()) -> NodalAssembly:
    """Build the small-signal nodal assembly.

    ``grounded`` buses (ideal sources) are removed, their branches becoming
    shunts at the surviving end. Loads are converted to constant shunt
    admittances at ``load_voltages`` (defaults to the setpoint magnitude).
    Line charging attached to a port end is dropped so the port admittance
    stays proper.
    """
    grounded = set(grounded)
    ports = set(port_buses)
    keep = [b.bus for b in data.buses if b.bus not in grounded]
    index = {b: i for i, b in enumerate(keep)}
    n = len(keep)
    shunt_g = np.zeros(n)
    shunt_c = np.zeros(n)
    dynamic = []
    static = []

    def shunt_idx(bus):
        return index[bus] if bus in index else None

    for bd in data.buses:
        i = shunt_idx(bd.bus)
        if i is None:
            continue
        shunt_g[i] += bd.g_shunt
        if bd.b_shunt >= 0:
            shunt_c[i] += bd.b_shunt / data.w0
        else:
            # inductive bus shunt as a ground branch: X = -1/b, L = X/w0
            dynamic.append((i, None, 0.0, -1.0 / (bd.b_shunt * data.w0), 1.0))
        if bd.p_load != 0.0 or bd.q_load != 0.0:
            vmag = abs(load_voltages[bd.bus]) if load_voltages and bd.bus in load_voltages \
                else bd.v_set
            y_load = (bd.p_load - 1j * bd.q_load) / vmag**2
            shunt_g[i] += y_load.real
            b_load = y_load.imag
            if b_load > 0:
                shunt_c[i] += b_load / data.w0
            elif b_load < 0:
                x_sh = -1.0 / b_load
                dynamic.append((i, None, 0.0, x_sh / data.w0, 1.0))

    for br in data.branches:
        fi = shunt_idx(br.from_bus)
        ti = shunt_idx(br.to_bus) if br.to_bus != 0 else None
        if fi is None and ti is None:
            continue
        if br.b != 0.0:
            for (end_idx, end_bus) in ((fi, br.from_bus), (ti, br.to_bus)):
                if end_idx is not None and end_bus not in ports:
                    shunt_c[end_idx] += 0.5 * br.b / data.w0
        l = br.x / data.w0
        if fi is None or ti is None:
            # branch to a grounded bus: series element becomes a shunt;
            # tap scaling only matters on the surviving from side
            live = fi if fi is not None else ti
            tap = br.tap if fi is not None else 1.0
            if l == 0.0:
                static.append((live, None, 1.0 / (br.r * tap**2), 1.0))
            else:
                dynamic.append((live, None, br.r * 1.0, l, tap) if fi is not None
                               else (live, None, br.r, l, 1.0))
        else:
            if l == 0.0:
                static.append((fi, ti, 1.0 / br.r, br.tap))
            else:
                dynamic.append((fi, ti, br.r, l, br.tap))

    for p in ports:
        i = index.get(p)
        if i is not None and shunt_c[i] != 0.0:
            raise AssemblyError(f"port bus {p} carries shunt capacitance; not realizable")
    return NodalAssembly(keep, dynamic, static, shunt_g, shunt_c, data.w0)


def _complex_realization(asm: NodalAssembly, ports: Sequence[int]):
    """Complex-state realization (branch currents + interior cap voltages).

    Interior buses without capacitance are eliminated through their static
    KCL; this requires a nonsingular static coupling at those buses.
    """
    pidx = [asm.index[b] for b in ports]
    pset = set(pidx)
    cap_idx = [i for i in range(asm.n_buses) if i not in pset and asm.shunt_c[i] > 0.0]
    alg_idx = [i for i in range(asm.n_buses) if i not in pset and asm.shunt_c[i] <= 0.0]

    # shunts of ground-connected dynamic branches count as dynamic states too
    dyn = [(fi, ti, r, l, tap) for (fi, ti, r, l, tap) in asm.dynamic_branches]
    n_br = len(dyn)
    n_cap = len(cap_idx)
    n_alg = len(alg_idx)
    n_bus = asm.n_buses
    w0 = asm.w0

    # static bus coupling (conductance stamps + jw0*c handled on cap rows)
    Ystat = np.zeros((n_bus, n_bus), dtype=complex)
    Ystat[np.diag_indices(n_bus)] += asm.shunt_g
    for (fi, ti, g, tap) in asm.static_stamps:
        NodalAssembly._stamp(Ystat, fi, ti, g, tap)

    # branch-out incidence: current leaving each bus through dynamic branches
    A_out = np.zeros((n_bus, n_br), dtype=complex)
    for k, (fi, ti, r, l, tap) in enumerate(dyn):
        if fi is not None:
            A_out[fi, k] += 1.0 / tap
        if ti is not None:
            A_out[ti, k] -= 1.0

    # voltage of every bus as affine function of [i_br, v_cap, u_port]:
    # V = Vb_i @ i + Vb_c @ v_cap + Vb_u @ u
    Vb_i = np.zeros((n_bus, n_br), dtype=complex)
    Vb_c = np.zeros((n_bus, n_cap), dtype=complex)
    Vb_u = np.zeros((n_bus, len(pidx)), dtype=complex)
    for j, i in enumerate(cap_idx):
        Vb_c[i, j] = 1.0
    for j, i in enumerate(pidx):
        Vb_u[i, j] = 1.0
    if n_alg:
        # KCL at algebraic buses: 0 = A_out i + Ystat V  (rows alg_idx)
        Ygg = Ystat[np.ix_(alg_idx, alg_idx)]
        cond = np.linalg.cond(Ygg)
        if not np.isfinite(cond) or cond > 1e12:
            raise SingularInteriorError(
                "interior buses without capacitance or conductance cannot be "
                "eliminated; add a shunt element"
            )
        rest = [i for i in range(n_bus) if i not in set(alg_idx)]
        rhs_i = A_out[alg_idx, :] + Ystat[np.ix_(alg_idx, rest)] @ Vb_i[rest, :]
        rhs_c = Ystat[np.ix_(alg_idx, rest)] @ Vb_c[rest, :]
        rhs_u = Ystat[np.ix_(alg_idx, rest)] @ Vb_u[rest, :]
        Vb_i[alg_idx, :] = -np.linalg.solve(Ygg, rhs_i)
        Vb_c[alg_idx, :] = -np.linalg.solve(Ygg, rhs_c)
        Vb_u[alg_idx, :] = -np.linalg.solve(Ygg, rhs_u)

    nx = n_br + n_cap
    A = np.zeros((nx, nx), dtype=complex)
    B = np.zeros((nx, len(pidx)), dtype=complex)
    for k, (fi, ti, r, l, tap) in enumerate(dyn):
        vf_i = Vb_i[fi, :] / tap if fi is not None else 0.0
        vf_c = Vb_c[fi, :] / tap if fi is not None else 0.0
        vf_u = Vb_u[fi, :] / tap if fi is not None else 0.0
        vt_i = Vb_i[ti, :] if ti is not None else 0.0
        vt_c = Vb_c[ti, :] if ti is not None else 0.0
        vt_u = Vb_u[ti, :] if ti is not None else 0.0
        A[k, :n_br] += (vf_i - vt_i) / l
        A[k, n_br:] += (vf_c - vt_c) / l
        B[k, :] += (vf_u - vt_u) / l
        A[k, k] += -(r + 1j * w0 * l) / l
    for j, i in enumerate(cap_idx):
        c = asm.shunt_c[i]
        row_i = -(A_out[i, :] + Ystat[i, :] @ Vb_i)
        row_c = -(Ystat[i, :] @ Vb_c)
        row_u = -(Ystat[i, :] @ Vb_u)
        row_c[j] += -1j * w0 * c
        A[n_br + j, :n_br] = row_i / c
        A[n_br + j, n_br:] = row_c / c
        B[n_br + j, :] = row_u / c

    # port current into the network: i_p = A_out(p) i + Ystat(p) V
    C = np.zeros((len(pidx), nx), dtype=complex)
    D = np.zeros((len(pidx), len(pidx)), dtype=complex)
    for j, i in enumerate(pidx):
        C[j, :n_br] = A_out[i, :] + Ystat[i, :] @ Vb_i
        C[j, n_br:] = Ystat[i, :] @ Vb_c
        D[j, :] = Ystat[i, :] @ Vb_u
    return A, B, C, D


def _realify_system(Ac, Bc, Cc, Dc) -> StateSpaceModel:
    return StateSpaceModel(realify_matrix(Ac), realify_matrix(Bc),
                           realify_matrix(Cc), realify_matrix(Dc))


def autonomous_model(asm: NodalAssembly) -> StateSpaceModel:
    """Input-free realization of the bare network (every bus internal);
    its poles are the natural modes of the unconnected network."""
    return _realify_system(*_complex_realization(asm, []))


def kron_reduce(asm: NodalAssembly, internal: Sequence[int]) -> NetworkAdmittance:
    """Eliminate internal buses, returning the port admittance.

    Internal buses become state-space dynamics (capacitive) or algebraic
    constraints absorbed into the realization; the per-frequency Schur
    complement on the same assembly is kept alongside as the exact sweep
    path. ``internal`` may be empty (identity reduction).
    """
    internal = set(internal)
    ports = [b for b in asm.bus_ids if b not in internal]
    if not ports:
        raise AssemblyError("kron reduction removed every bus")
    model = _realify_system(*_complex_realization(asm, ports))
    return NetworkAdmittance(model=model, ports=ports, assembly=asm)


def to_global_frame(model: StateSpaceModel, angles: Sequence[float]) -> StateSpaceModel:
    """Block-rotation congruence ``R(delta) Y R(delta)^T`` per (d, q) port."""
    return rotate_ports(model, angles)


# ---------------------------------------------------------------------------
# power flow
# ---------------------------------------------------------------------------

@dataclass
class PowerFlowSolution:
    bus_ids: List[int]
    voltages: np.ndarray          # complex per bus
    injections: np.ndarray        # complex power per bus (net, generator sign)
    iterations: int

    def voltage(self, bus: int) -> complex:
        return self.voltages[self.bus_ids.index(bus)]

    def operating_point(self, bus: int, s_gen: complex) -> OperatingPoint:
        """Converter operating point (load convention) in the global frame."""
        v = self.voltage(bus)
        i_inj = np.conj(s_gen / v)
        return OperatingPoint(v.real, v.imag, -i_inj.real, -i_inj.imag)


def _pf_ybus(data: NetworkData) -> Tuple[np.ndarray, List[int]]:
    ids = [b.bus for b in data.buses]
    idx = {b: i for i, b in enumerate(ids)}
    n = len(ids)
    Y = np.zeros((n, n), dtype=complex)
    for b in data.buses:
        Y[idx[b.bus], idx[b.bus]] += b.g_shunt + 1j * b.b_shunt
    for br in data.branches:
        y = 1.0 / (br.r + 1j * br.x)
        if br.to_bus == 0:
            Y[idx[br.from_bus], idx[br.from_bus]] += y
            continue
        fi, ti = idx[br.from_bus], idx[br.to_bus]
        Y[fi, fi] += y / br.tap**2 + 1j * br.b / 2.0
        Y[ti, ti] += y + 1j * br.b / 2.0
        Y[fi, ti] -= y / br.tap
        Y[ti, fi] -= y / br.tap
    return Y, ids


def power_flow(data: NetworkData, tol: float = 1e-10, max_iter: int = 60) -> PowerFlowSolution:
    """Flat-start Newton-Raphson power flow.

    Loads enter as constant PQ injections here; the small-signal model
    converts them to shunts at the solved voltage afterwards.
    """
    Y, ids = _pf_ybus(data)
    n = len(ids)
    kinds = [b.kind for b in data.buses]
    slack = [i for i, k in enumerate(kinds) if k == "slack"]
    pv = [i for i, k in enumerate(kinds) if k == "pv"]
    pq = [i for i, k in enumerate(kinds) if k == "pq"]
    if len(slack) != 1:
        raise PowerFlowError("exactly one slack bus required")
    p_spec = np.array([b.p_gen - b.p_load for b in data.buses])
    q_spec = np.array([-b.q_load for b in data.buses])
    vmag = np.array([b.v_set if kinds[i] != "pq" else 1.0 for i, b in enumerate(data.buses)])
    theta = np.zeros(n)

    ang_idx = pv + pq
    mag_idx = pq
    for it in range(max_iter):
        V = vmag * np.exp(1j * theta)
        S = V * np.conj(Y @ V)
        dP = p_spec[ang_idx] - S.real[ang_idx]
        dQ = q_spec[mag_idx] - S.imag[mag_idx]
        mism = np.concatenate([dP, dQ])
        if np.abs(mism).max() < tol:
            inj = S
            return PowerFlowSolution(ids, V, inj, it)
        J = _pf_jacobian(Y, V, ang_idx, mag_idx)
        try:
            dx = np.linalg.solve(J, mism)
        except np.linalg.LinAlgError as exc:
            raise PowerFlowError("singular power-flow Jacobian") from exc
        theta[ang_idx] += dx[: len(ang_idx)]
        vmag[mag_idx] += dx[len(ang_idx):]
        if np.any(vmag <= 0):
            raise PowerFlowError("voltage collapsed below zero during iteration")
    raise PowerFlowError(f"power flow did not converge in {max_iter} iterations")


def _pf_jacobian(Y, V, ang_idx, mag_idx):
    n = len(V)
    vmag = np.abs(V)
    I = Y @ V
    S = V * np.conj(I)
    # dS/dtheta_k = j V_i (conj(Y_ik V_k)) ... standard dense forms
    dS_dth = 1j * np.diag(V) @ (np.diag(np.conj(I)) - np.conj(Y) @ np.diag(np.conj(V)))
    dS_dvm = np.diag(V) @ np.conj(Y) @ np.diag(np.conj(V) / vmag) \
        + np.diag(np.conj(I) * V / vmag)
    J11 = dS_dth.real[np.ix_(ang_idx, ang_idx)]
    J12 = dS_dvm.real[np.ix_(ang_idx, mag_idx)]
    J21 = dS_dth.imag[np.ix_(mag_idx, ang_idx)]
    J22 = dS_dvm.imag[np.ix_(mag_idx, mag_idx)]
    return np.block([[J11, J12], [J21, J22]])


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def load_network_csv(bus_path, branch_path, w0: float = 2.0 * np.pi * 50.0) -> NetworkData:
    """Load bus/branch tables.

    Bus columns: ``bus, type, v_set, p_gen, p_load, q_load, g_shunt,
    b_shunt``; branch columns: ``from, to, r, x, b, tap``.
    """
    buses = []
    with open(bus_path, newline="") as fh:
        for row in csv.DictReader(_strip_comments(fh)):
            buses.append(
                BusData(
                    bus=int(row["bus"]),
                    kind=row["type"].strip(),
                    v_set=float(row["v_set"]),
                    p_gen=float(row["p_gen"]),
                    p_load=float(row["p_load"]),
                    q_load=float(row["q_load"]),
                    g_shunt=float(row.get("g_shunt", 0.0) or 0.0),
                    b_shunt=float(row.get("b_shunt", 0.0) or 0.0),
                )
            )
    branches = []
    with open(branch_path, newline="") as fh:
        for row in csv.DictReader(_strip_comments(fh)):
            branches.append(
                BranchData(
                    from_bus=int(row["from"]),
                    to_bus=int(row["to"]),
                    r=float(row["r"]),
                    x=float(row["x"]),
                    b=float(row.get("b", 0.0) or 0.0),
                    tap=float(row.get("tap", 1.0) or 1.0),
                )
            )
    return NetworkData(buses, branches, w0)


def _strip_comments(fh):
    for line in fh:
        if not line.lstrip().startswith("#"):
            yield line
