"""Transistor-level netlists for the three noise-tolerant gate schemes.

Every supported gate can be built three ways:

* conventional  - plain static CMOS realization of the function
* cent_mrf      - conventional stage, a complement inverter, and an
                  8-transistor bistable feedback loop bridging the
                  complementary output pair
* dcvs_mrf      - conventional stage, complement inverter, a
                  4-transistor differential cascode voltage switch
                  block, and the same feedback loop on the DCVS outputs

Builders are deterministic: a given (gate, scheme) always produces the
identical device list, which is what the serialized golden files pin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .logic import GATE_LIBRARY, TruthTable

VDD = "VDD"
GND = "GND"

# drive strengths in multiples of the unit device (k_n for NMOS,
# pmos_ratio * k_n per unit for PMOS)
UNIT_NMOS = 1.0
UNIT_PMOS = 2.0          # mobility compensation
SERIES_SCALE = 2.0       # stacked devices upsized so stacks match unit drive
KEEPER_SCALE = 0.25      # feedback loop is weak so the forward path wins
DCVS_LOAD_STRENGTH = 1.0       # cross-coupled PMOS loads
DCVS_PULLDOWN_STRENGTH = 2.0   # differential NMOS pull-downs

DEFAULT_NODE_CAP_F = 1e-15


class DeviceKind(Enum):
    NMOS = "NMOS"
    PMOS = "PMOS"
    CAPACITOR = "C"
    VOLTAGE_SOURCE = "V"


class PortRole(Enum):
    INPUT = "input"
    OUTPUT = "output"
    OUTPUT_COMPLEMENT = "output_complement"
    SUPPLY = "supply"


class SchemeKind(Enum):
    CONVENTIONAL = "conventional"
    CENT_MRF = "cent_mrf"
    DCVS_MRF = "dcvs_mrf"


class UnsupportedGateError(ValueError):
    """Gate has no netlist realization in the builder library."""


@dataclass(frozen=True)
class Device:
    """One circuit element.

    MOSFET terminals are (drain, gate, source); capacitors and sources
    have two terminals.  `strength` only has meaning for MOSFETs;
    `value` holds farads for capacitors or a behavior reference for
    sources.
    """

    id: str
    kind: DeviceKind
    terminals: tuple[str, ...]
    strength: float = 1.0
    value: float | str | None = None

    def __post_init__(self):
        if self.kind in (DeviceKind.NMOS, DeviceKind.PMOS):
            if len(self.terminals) != 3:
                raise ValueError(f"MOSFET {self.id} needs 3 terminals")
            if not self.strength > 0:
                raise ValueError(f"MOSFET {self.id} needs strength > 0")
        else:
            if len(self.terminals) != 2:
                raise ValueError(f"{self.kind.value} device {self.id} needs 2 terminals")

    @property
    def is_mosfet(self) -> bool:
        return self.kind in (DeviceKind.NMOS, DeviceKind.PMOS)

    @property
    def drain(self) -> str:
        return self.terminals[0]

    @property
    def gate(self) -> str:
        return self.terminals[1]

    @property
    def source(self) -> str:
        return self.terminals[2]


@dataclass(frozen=True)
class Netlist:
    name: str
    nodes: tuple[str, ...]
    devices: tuple[Device, ...]
    ports: tuple[tuple[str, PortRole], ...]

    def port_nodes(self, role: PortRole) -> tuple[str, ...]:
        return tuple(n for n, r in self.ports if r is role)

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.port_nodes(PortRole.INPUT)

    @property
    def output(self) -> str:
        outs = self.port_nodes(PortRole.OUTPUT)
        if len(outs) != 1:
            raise ValueError(f"netlist {self.name} has {len(outs)} output ports")
        return outs[0]

    @property
    def output_complement(self) -> str | None:
        outs = self.port_nodes(PortRole.OUTPUT_COMPLEMENT)
        return outs[0] if outs else None


def transistor_count(n: Netlist) -> int:
    return sum(1 for d in n.devices if d.is_mosfet)


class _Builder:
    """Mutable assembly helper; `freeze` emits the immutable netlist."""

    def __init__(self, name: str):
        self.name = name
        self._nodes: dict[str, None] = {VDD: None, GND: None}
        self._devices: list[Device] = []
        self._ports: list[tuple[str, PortRole]] = []

    def node(self, name: str) -> str:
        self._nodes.setdefault(name, None)
        return name

    def port(self, name: str, role: PortRole) -> str:
        self.node(name)
        self._ports.append((name, role))
        return name

    def nmos(self, id: str, d: str, g: str, s: str, strength: float) -> None:
        self._devices.append(Device(id, DeviceKind.NMOS,
                                    (self.node(d), self.node(g), self.node(s)),
                                    strength))

    def pmos(self, id: str, d: str, g: str, s: str, strength: float) -> None:
        self._devices.append(Device(id, DeviceKind.PMOS,
                                    (self.node(d), self.node(g), self.node(s)),
                                    strength))

    def cap(self, id: str, n1: str, n2: str, farads: float) -> None:
        self._devices.append(Device(id, DeviceKind.CAPACITOR,
                                    (self.node(n1), self.node(n2)),
                                    value=farads))

    def inverter(self, prefix: str, inp: str, out: str, scale: float = 1.0) -> None:
        self.pmos(f"{prefix}p", out, inp, VDD, UNIT_PMOS * scale)
        self.nmos(f"{prefix}n", out, inp, GND, UNIT_NMOS * scale)

    def caps_on(self, nodes, farads: float) -> None:
        for n in nodes:
            self.cap(n, n, GND, farads)

    def freeze(self) -> Netlist:
        self._ports.append((VDD, PortRole.SUPPLY))
        self._ports.append((GND, PortRole.SUPPLY))
        return Netlist(self.name, tuple(self._nodes), tuple(self._devices),
                       tuple(self._ports))


def _emit_inv(b: _Builder, a: str, out: str) -> list[str]:
    b.inverter("g", a, out)
    return []


def _emit_nand2(b: _Builder, a: str, bb: str, out: str) -> list[str]:
    b.pmos("gp1", out, a, VDD, UNIT_PMOS)
    b.pmos("gp2", out, bb, VDD, UNIT_PMOS)
    b.nmos("gn1", out, a, "mid", UNIT_NMOS * SERIES_SCALE)
    b.nmos("gn2", "mid", bb, GND, UNIT_NMOS * SERIES_SCALE)
    return ["mid"]


def _emit_nor2(b: _Builder, a: str, bb: str, out: str) -> list[str]:
    b.pmos("gp1", "mid", a, VDD, UNIT_PMOS * SERIES_SCALE)
    b.pmos("gp2", out, bb, "mid", UNIT_PMOS * SERIES_SCALE)
    b.nmos("gn1", out, a, GND, UNIT_NMOS)
    b.nmos("gn2", out, bb, GND, UNIT_NMOS)
    return ["mid"]


def _emit_xorish(b: _Builder, a: str, bb: str, out: str, invert: bool) -> list[str]:
    # complementary 8T core plus two input inverters; `invert` swaps the
    # branch gate pairings to produce XNOR instead of XOR
    b.inverter("ia", a, "an")
    b.inverter("ib", bb, "bn")
    if not invert:
        pu = [(a, "bn"), ("an", bb)]       # pull up on differing inputs
        pd = [(a, bb), ("an", "bn")]       # pull down on equal inputs
    else:
        pu = [(a, bb), ("an", "bn")]
        pd = [(a, "bn"), ("an", bb)]
    for i, (g1, g2) in enumerate(pu, 1):
        mid = f"pu{i}"
        b.pmos(f"gp{i}a", mid, g1, VDD, UNIT_PMOS * SERIES_SCALE)
        b.pmos(f"gp{i}b", out, g2, mid, UNIT_PMOS * SERIES_SCALE)
    for i, (g1, g2) in enumerate(pd, 1):
        mid = f"pd{i}"
        b.nmos(f"gn{i}a", out, g1, mid, UNIT_NMOS * SERIES_SCALE)
        b.nmos(f"gn{i}b", mid, g2, GND, UNIT_NMOS * SERIES_SCALE)
    return ["an", "bn", "pu1", "pu2", "pd1", "pd2"]


def _emit_buffered(b: _Builder, emitter, a: str, bb: str, out: str) -> list[str]:
    internals = emitter(b, a, bb, "w")
    b.inverter("ob", "w", out)
    return ["w"] + internals


def _emit_function_stage(b: _Builder, tt: TruthTable, out: str) -> tuple[list[str], list[str]]:
    """Emit the static CMOS stage for `tt` driving `out`.

    Returns (input nodes, internal nodes).  Inputs are named a, b in
    index order.
    """
    key = None
    for name, lib in GATE_LIBRARY.items():
        if lib.arity == tt.arity and lib.outputs == tt.outputs:
            key = name
            break
    if key is None:
        raise UnsupportedGateError(f"no netlist realization for gate {tt.name!r}")

    if key == "INV":
        ins = [b.port("a", PortRole.INPUT)]
        internals = _emit_inv(b, "a", out)
    else:
        ins = [b.port("a", PortRole.INPUT), b.port("b", PortRole.INPUT)]
        if key == "NAND2":
            internals = _emit_nand2(b, "a", "b", out)
        elif key == "NOR2":
            internals = _emit_nor2(b, "a", "b", out)
        elif key == "AND2":
            internals = _emit_buffered(b, _emit_nand2, "a", "b", out)
        elif key == "OR2":
            internals = _emit_buffered(b, _emit_nor2, "a", "b", out)
        elif key == "XOR2":
            internals = _emit_xorish(b, "a", "b", out, invert=False)
        else:  # XNOR2
            internals = _emit_xorish(b, "a", "b", out, invert=True)
    return ins, internals


def _emit_feedback_loop(b: _Builder, y: str, yb: str) -> None:
    # two weak cross-coupled inverter pairs bridging the complementary
    # rails: a bistable keeper the forward path can still overpower
    for i in (1, 2):
        b.inverter(f"k{i}f", y, yb, scale=KEEPER_SCALE)
        b.inverter(f"k{i}r", yb, y, scale=KEEPER_SCALE)


def _emit_dcvs_block(b: _Builder, inp: str, inp_b: str, out: str, out_b: str) -> None:
    b.pmos("dvp1", out, out_b, VDD, DCVS_LOAD_STRENGTH)
    b.pmos("dvp2", out_b, out, VDD, DCVS_LOAD_STRENGTH)
    b.nmos("dvn1", out_b, inp, GND, DCVS_PULLDOWN_STRENGTH)
    b.nmos("dvn2", out, inp_b, GND, DCVS_PULLDOWN_STRENGTH)


def build_conventional(tt: TruthTable, cap_f: float = DEFAULT_NODE_CAP_F) -> Netlist:
    """Static CMOS netlist computing `tt`, output port y."""
    b = _Builder(f"conv_{tt.name.lower()}")
    b.port("y", PortRole.OUTPUT)
    _, internals = _emit_function_stage(b, tt, "y")
    b.caps_on(["y"] + internals, cap_f)
    return b.freeze()


def build_cent_mrf(tt: TruthTable, cap_f: float = DEFAULT_NODE_CAP_F) -> Netlist:
    """Function stage, complement inverter, and keeper loop on (y, yb)."""
    b = _Builder(f"cent_mrf_{tt.name.lower()}")
    b.port("y", PortRole.OUTPUT)
    _, internals = _emit_function_stage(b, tt, "y")
    b.inverter("cmp", "y", "yb")
    _emit_feedback_loop(b, "y", "yb")
    b.caps_on(["y", "yb"] + internals, cap_f)
    return b.freeze()


def build_dcvs_mrf(tt: TruthTable, cap_f: float = DEFAULT_NODE_CAP_F) -> Netlist:
    """Function stage into a DCVS block, keeper loop on the differential outputs."""
    b = _Builder(f"dcvs_mrf_{tt.name.lower()}")
    b.port("y", PortRole.OUTPUT)
    b.port("yb", PortRole.OUTPUT_COMPLEMENT)
    _, internals = _emit_function_stage(b, tt, "c")
    b.inverter("cmp", "c", "cb")
    _emit_dcvs_block(b, "c", "cb", "y", "yb")
    _emit_feedback_loop(b, "y", "yb")
    b.caps_on(["y", "yb", "c", "cb"] + internals, cap_f)
    return b.freeze()


def build_dcvs_block() -> Netlist:
    """The bare 4-transistor DCVS fragment with differential ports."""
    b = _Builder("dcvs_block")
    b.port("in", PortRole.INPUT)
    b.port("in_b", PortRole.INPUT)
    b.port("out", PortRole.OUTPUT)
    b.port("out_b", PortRole.OUTPUT_COMPLEMENT)
    _emit_dcvs_block(b, "in", "in_b", "out", "out_b")
    return b.freeze()


_BUILDERS = {
    SchemeKind.CONVENTIONAL: build_conventional,
    SchemeKind.CENT_MRF: build_cent_mrf,
    SchemeKind.DCVS_MRF: build_dcvs_mrf,
}


def build(scheme: SchemeKind, tt: TruthTable, cap_f: float = DEFAULT_NODE_CAP_F) -> Netlist:
    return _BUILDERS[scheme](tt, cap_f)


def validate(n: Netlist) -> list[str]:
    """Structural diagnostics; an empty list means the netlist is sound."""
    issues: list[str] = []
    declared = set(n.nodes)
    for rail in (VDD, GND):
        if rail not in declared:
            issues.append(f"reserved node {rail} is not declared")

    for d in n.devices:
        for t in d.terminals:
            if t not in declared:
                issues.append(f"device {d.id}: dangling reference to undeclared node {t}")

    outputs = n.port_nodes(PortRole.OUTPUT)
    if len(outputs) != 1:
        issues.append(f"expected exactly one output port, found {len(outputs)}")
    if len(n.port_nodes(PortRole.OUTPUT_COMPLEMENT)) > 1:
        issues.append("more than one output_complement port")

    input_nodes = set(n.inputs)
    for d in n.devices:
        if d.is_mosfet:
            for t in (d.drain, d.source):
                if t in input_nodes:
                    issues.append(f"input port {t} is driven by device {d.id}")
        else:
            for t in d.terminals:
                if t in input_nodes:
                    issues.append(f"input port {t} is loaded by device {d.id}")

    driven = set(input_nodes) | {VDD, GND}
    for d in n.devices:
        if d.is_mosfet:
            driven.add(d.drain)
            driven.add(d.source)
        else:
            driven.update(d.terminals)
    for d in n.devices:
        if d.is_mosfet and d.gate not in driven:
            issues.append(f"floating gate: device {d.id} gate node {d.gate}")

    adjacency: dict[str, set[str]] = {node: set() for node in n.nodes}
    for d in n.devices:
        ts = [t for t in d.terminals if t in adjacency]
        for t in ts:
            adjacency[t].update(x for x in ts if x != t)
    seeds = {node for node, _ in n.ports} & declared
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        node = frontier.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    for node in n.nodes:
        if node not in seen:
            issues.append(f"unreachable node {node}")

    return issues


def serialize(n: Netlist) -> str:
    """SPICE-like flat text, one device per line, deterministic order."""
    lines = [f".netlist {n.name}",
             ".nodes " + " ".join(n.nodes),
             ".ports " + " ".join(f"{node}:{role.value}" for node, role in n.ports)]
    for d in n.devices:
        if d.is_mosfet:
            dr, g, s = d.terminals
            lines.append(f"M{d.id} {dr} {g} {s} {d.kind.value} strength={d.strength:g}")
        elif d.kind is DeviceKind.CAPACITOR:
            lines.append(f"C{d.id} {d.terminals[0]} {d.terminals[1]} {d.value:g}")
        else:
            lines.append(f"V{d.id} {d.terminals[0]} {d.terminals[1]} {d.value}")
    return "\n".join(lines) + "\n"
