import pytest

from noisegate.logic import GATE_LIBRARY, TruthTable
from noisegate.netlist import (
    Device,
    DeviceKind,
    Netlist,
    PortRole,
    SchemeKind,
    UnsupportedGateError,
    build,
    build_cent_mrf,
    build_conventional,
    build_dcvs_block,
    build_dcvs_mrf,
    serialize,
    transistor_count,
    validate,
)

CONVENTIONAL_COUNTS = {"INV": 2, "NAND2": 4, "NOR2": 4, "AND2": 6, "OR2": 6,
                       "XOR2": 12, "XNOR2": 12}


def test_conventional_counts():
    for name, expect in CONVENTIONAL_COUNTS.items():
        n = build_conventional(GATE_LIBRARY[name])
        assert transistor_count(n) == expect, name


def test_cent_mrf_counts_match_published_table():
    assert transistor_count(build_cent_mrf(GATE_LIBRARY["INV"])) == 12
    assert transistor_count(build_cent_mrf(GATE_LIBRARY["NAND2"])) == 14
    assert transistor_count(build_cent_mrf(GATE_LIBRARY["XOR2"])) == 22


def test_dcvs_mrf_counts_match_published_table():
    assert transistor_count(build_dcvs_mrf(GATE_LIBRARY["INV"])) == 16
    assert transistor_count(build_dcvs_mrf(GATE_LIBRARY["NAND2"])) == 18
    assert transistor_count(build_dcvs_mrf(GATE_LIBRARY["XOR2"])) == 26


def test_scheme_count_offsets_hold_for_all_gates():
    for tt in GATE_LIBRARY.values():
        conv = transistor_count(build_conventional(tt))
        cent = transistor_count(build_cent_mrf(tt))
        dcvs = transistor_count(build_dcvs_mrf(tt))
        assert cent == conv + 10
        assert dcvs == cent + 4


def test_dcvs_block_structure():
    blk = build_dcvs_block()
    assert len(blk.devices) == 4
    assert transistor_count(blk) == 4
    pmos = [d for d in blk.devices if d.kind is DeviceKind.PMOS]
    nmos = [d for d in blk.devices if d.kind is DeviceKind.NMOS]
    assert len(pmos) == 2 and len(nmos) == 2
    outs = {"out", "out_b"}
    for p in pmos:
        assert p.source == "VDD"
        assert p.drain in outs
        # cross-coupled: gate ties to the opposite output
        assert p.gate in outs and p.gate != p.drain
    assert {n.gate for n in nmos} == {"in", "in_b"}
    for n in nmos:
        assert n.source == "GND" and n.drain in outs


def test_dcvs_block_symmetric_under_port_swap():
    blk = build_dcvs_block()
    swap = {"in": "in_b", "in_b": "in", "out": "out_b", "out_b": "out"}

    def canon(netlist, rename):
        return sorted(
            (d.kind.value, tuple(rename.get(t, t) for t in d.terminals), d.strength)
            for d in netlist.devices
        )

    assert canon(blk, swap) == canon(blk, {})


def test_builders_emit_valid_netlists():
    for tt in GATE_LIBRARY.values():
        for scheme in SchemeKind:
            assert validate(build(scheme, tt)) == []
    assert validate(build_dcvs_block()) == []


def test_builders_deterministic():
    for scheme in SchemeKind:
        a = serialize(build(scheme, GATE_LIBRARY["NAND2"]))
        b = serialize(build(scheme, GATE_LIBRARY["NAND2"]))
        assert a == b


def test_unsupported_gate_raises():
    odd = TruthTable("maj3ish", 3, (0, 0, 0, 1, 0, 1, 1, 1))
    with pytest.raises(UnsupportedGateError, match="maj3ish"):
        build_conventional(odd)


def test_cent_mrf_port_shape():
    n = build_cent_mrf(GATE_LIBRARY["NAND2"])
    assert n.inputs == ("a", "b")
    assert n.output == "y"
    assert n.output_complement is None


def test_dcvs_mrf_port_shape():
    n = build_dcvs_mrf(GATE_LIBRARY["NAND2"])
    assert n.output == "y"
    assert n.output_complement == "yb"


def test_validate_flags_floating_gate():
    n = build_conventional(GATE_LIBRARY["INV"])
    bad = Netlist(n.name, n.nodes + ("ghost",),
                  n.devices + (Device("x1", DeviceKind.NMOS, ("y", "ghost", "GND"), 1.0),),
                  n.ports)
    issues = validate(bad)
    assert any("floating gate" in i for i in issues)


def test_validate_flags_dangling_reference():
    n = build_conventional(GATE_LIBRARY["INV"])
    bad = Netlist(n.name, n.nodes,
                  n.devices + (Device("x1", DeviceKind.CAPACITOR, ("y", "nowhere"),
                                      value=1e-15),),
                  n.ports)
    issues = validate(bad)
    assert any("dangling reference" in i and "nowhere" in i for i in issues)


def test_validate_flags_driven_input():
    n = build_conventional(GATE_LIBRARY["INV"])
    bad = Netlist(n.name, n.nodes,
                  n.devices + (Device("x1", DeviceKind.NMOS, ("a", "y", "GND"), 1.0),),
                  n.ports)
    issues = validate(bad)
    assert any("input port a is driven" in i for i in issues)


def test_validate_flags_unreachable_node():
    n = build_conventional(GATE_LIBRARY["INV"])
    bad = Netlist(n.name, n.nodes + ("orphan",), n.devices, n.ports)
    issues = validate(bad)
    assert any("unreachable node orphan" in i for i in issues)


def test_inputs_only_drive_gates():
    for tt in GATE_LIBRARY.values():
        for scheme in SchemeKind:
            n = build(scheme, tt)
            ins = set(n.inputs)
            for d in n.devices:
                if d.is_mosfet:
                    assert d.drain not in ins
                    assert d.source not in ins


def test_serialized_inverter_golden():
    text = serialize(build_conventional(GATE_LIBRARY["INV"]))
    assert text == (
        ".netlist conv_inv\n"
        ".nodes VDD GND y a\n"
        ".ports y:output a:input VDD:supply GND:supply\n"
        "Mgp y a VDD PMOS strength=2\n"
        "Mgn y a GND NMOS strength=1\n"
        "Cy y GND 1e-15\n"
    )


def test_serialize_mos_line_format():
    text = serialize(build_cent_mrf(GATE_LIBRARY["NAND2"]))
    lines = text.splitlines()
    assert lines[0] == ".netlist cent_mrf_nand2"
    assert lines[1].startswith(".nodes ")
    assert lines[2].startswith(".ports ")
    mos = [l for l in lines if l.startswith("M")]
    assert len(mos) == 14
    for l in mos:
        fields = l.split()
        assert len(fields) == 6
        assert fields[4] in ("NMOS", "PMOS")
        assert fields[5].startswith("strength=")


def test_device_constructor_contracts():
    with pytest.raises(ValueError):
        Device("m1", DeviceKind.NMOS, ("a", "b"), 1.0)
    with pytest.raises(ValueError):
        Device("m1", DeviceKind.NMOS, ("a", "b", "c"), 0.0)
    with pytest.raises(ValueError):
        Device("c1", DeviceKind.CAPACITOR, ("a", "b", "c"), value=1e-15)


def test_transistor_count_empty():
    empty = Netlist("empty", ("VDD", "GND"), (), ())
    assert transistor_count(empty) == 0
