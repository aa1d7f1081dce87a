"""Netlist-to-array compiler bridging Netlist objects and the kernels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .mosfet import DeviceModelParams
from .netlist import GND, VDD, DeviceKind, Netlist, PortRole, validate

GMIN = 1e-12  # siemens to ground on every unknown node, for DC solvability


class CompileError(ValueError):
    """Netlist cannot be lowered to solver arrays."""


@dataclass
class CompiledCircuit:
    """Solver-ready view of a netlist.

    Voltage vector layout: unknown nodes in netlist declaration order,
    then the driven nodes (input ports in port order, VDD, GND).
    """

    netlist: Netlist
    params: DeviceModelParams
    unknown_nodes: tuple[str, ...]
    driven_nodes: tuple[str, ...]
    mos_d: np.ndarray
    mos_g: np.ndarray
    mos_s: np.ndarray
    mos_vth: np.ndarray
    mos_k: np.ndarray
    mos_isp: np.ndarray
    cap_f: np.ndarray          # farads per unknown node

    @property
    def n_unknown(self) -> int:
        return len(self.unknown_nodes)

    @property
    def vdd_index(self) -> int:
        return self.n_unknown + len(self.driven_nodes) - 2

    def node_voltages(self, v_all: np.ndarray) -> dict[str, float]:
        names = self.unknown_nodes + self.driven_nodes
        return {name: float(v_all[i]) for i, name in enumerate(names)}

    def initial_guess(self, driven_values: np.ndarray) -> np.ndarray:
        """Mid-rail start with the bistable tie-break on the output pair."""
        vdd = self.params.vdd
        v_all = np.empty(self.n_unknown + len(self.driven_nodes))
        v_all[:self.n_unknown] = 0.5 * vdd
        index = {name: i for i, name in enumerate(self.unknown_nodes)}
        out = self.netlist.port_nodes(PortRole.OUTPUT)
        outb = self.netlist.port_nodes(PortRole.OUTPUT_COMPLEMENT)
        if out and out[0] in index:
            v_all[index[out[0]]] = 0.45 * vdd
        if outb and outb[0] in index:
            v_all[index[outb[0]]] = 0.55 * vdd
        v_all[self.n_unknown:] = driven_values
        return v_all


def compile_circuit(netlist: Netlist, params: DeviceModelParams) -> CompiledCircuit:
    issues = validate(netlist)
    if issues:
        raise CompileError(f"invalid netlist {netlist.name}: " + "; ".join(issues))

    inputs = netlist.inputs
    driven = tuple(inputs) + (VDD, GND)
    unknown = tuple(n for n in netlist.nodes if n not in driven)
    index = {name: i for i, name in enumerate(unknown + driven)}
    n_unknown = len(unknown)

    mos = [d for d in netlist.devices if d.is_mosfet]
    mos_d = np.array([index[d.drain] for d in mos], dtype=np.int64)
    mos_g = np.array([index[d.gate] for d in mos], dtype=np.int64)
    mos_s = np.array([index[d.source] for d in mos], dtype=np.int64)
    mos_isp = np.array([d.kind is DeviceKind.PMOS for d in mos], dtype=np.int8)
    mos_vth = np.array([-params.vth_p if d.kind is DeviceKind.PMOS else params.vth_n
                        for d in mos], dtype=np.float64)
    mos_k = np.array([params.k_n * d.strength * (params.pmos_ratio
                      if d.kind is DeviceKind.PMOS else 1.0)
                      for d in mos], dtype=np.float64)

    cap_f = np.zeros(n_unknown)
    for d in netlist.devices:
        if d.kind is DeviceKind.CAPACITOR:
            n1, n2 = d.terminals
            rail = {VDD, GND}
            if n2 in rail and n1 not in rail and index[n1] < n_unknown:
                cap_f[index[n1]] += float(d.value)
            elif n1 in rail and n2 not in rail and index[n2] < n_unknown:
                cap_f[index[n2]] += float(d.value)
            elif n1 in rail and n2 in rail:
                pass  # rail-to-rail cap carries no state
            else:
                raise CompileError(
                    f"capacitor {d.id} must tie a non-driven node to a rail")
        elif d.kind is DeviceKind.VOLTAGE_SOURCE:
            if not set(d.terminals) <= {VDD, GND}:
                raise CompileError(
                    f"voltage source {d.id}: only rail sources are supported; "
                    "drive other nodes with stimuli")

    return CompiledCircuit(netlist, params, unknown, driven,
                           mos_d, mos_g, mos_s, mos_vth, mos_k, mos_isp, cap_f)


def run_dc(cc: CompiledCircuit, driven_values: np.ndarray,
           tol_i: float = 1e-9, max_steps: int = 500):
    """Damped-Newton DC solve; returns (v_all, status, worst_node, residual)."""
    v_all = cc.initial_guess(driven_values)
    status, _, worst, res = _kernels.dc_newton(
        v_all, cc.mos_d, cc.mos_g, cc.mos_s, cc.mos_vth, cc.mos_k, cc.mos_isp,
        cc.params.lam, cc.n_unknown, tol_i, max_steps, GMIN)
    name = cc.unknown_nodes[worst] if 0 <= worst < cc.n_unknown else "?"
    return v_all, status, name, res


def run_transient(cc: CompiledCircuit, v0_all: np.ndarray, stim: np.ndarray,
                  t_step: float, theta: float, tol_v: float, max_iters: int):
    """Integrate; returns (v_out, ivdd_out, status, bad_step)."""
    n_samples = stim.shape[1]
    v_out = np.empty((n_samples, cc.n_unknown))
    ivdd = np.empty(n_samples)
    coef_c = cc.cap_f / t_step
    v_all = v0_all.copy()
    status, bad = _kernels.transient(
        v_all, cc.mos_d, cc.mos_g, cc.mos_s, cc.mos_vth, cc.mos_k, cc.mos_isp,
        cc.params.lam, cc.n_unknown, cc.vdd_index, coef_c, stim, theta,
        tol_v, max_iters, GMIN, v_out, ivdd)
    return v_out, ivdd, status, bad
