import math
import random
from itertools import product

import pytest

from noisegate.logic import (
    GATE_LIBRARY,
    EnergyFunction,
    TruthTable,
    UnknownGateError,
    check_equivalence,
    energy_eval,
    energy_table,
    resolve_gate,
    state_distribution,
    valid_minterms,
)


def brute_force_minterms(tt):
    """Independent oracle: enumerate the truth table row by row."""
    return {ins + (tt(*ins),) for ins in product((0, 1), repeat=tt.arity)}


def test_nand_minterms():
    got = valid_minterms(GATE_LIBRARY["NAND2"])
    assert got.terms == {(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_inv_minterms():
    got = valid_minterms(GATE_LIBRARY["INV"])
    assert got.terms == {(0, 1), (1, 0)}


def test_xor_minterms():
    # hand enumeration of the 4-row XOR table
    got = valid_minterms(GATE_LIBRARY["XOR2"])
    assert got.terms == {(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)}


def test_minterms_match_oracle_for_all_library_gates():
    for tt in GATE_LIBRARY.values():
        assert valid_minterms(tt).terms == brute_force_minterms(tt)
        assert len(valid_minterms(tt).terms) == 2 ** tt.arity


def test_energy_values_nand():
    u = EnergyFunction.sum_of_minterms(GATE_LIBRARY["NAND2"])
    assert energy_eval(u, (0, 0, 1)) == -1
    assert energy_eval(u, (0, 0, 0)) == 0


def test_energy_xor_invalid_pair():
    for form in (EnergyFunction.sum_of_minterms, EnergyFunction.factored,
                 EnergyFunction.general_form):
        u = form(GATE_LIBRARY["XOR2"])
        assert energy_eval(u, (1, 1, 1)) == 0
        assert energy_eval(u, (1, 1, 0)) == -1


def test_energy_eval_rejects_wrong_width():
    u = EnergyFunction.general_form(GATE_LIBRARY["NAND2"])
    with pytest.raises(ValueError):
        energy_eval(u, (0, 1))


def test_energy_is_minterm_indicator_for_every_library_gate():
    for tt in GATE_LIBRARY.values():
        m = valid_minterms(tt).terms
        u = EnergyFunction.sum_of_minterms(tt)
        for state in tt.full_assignments():
            expect = -1 if state in m else 0
            assert energy_eval(u, state) == expect


def test_equivalence_all_two_input_tables():
    # all 16 functions of two inputs, times 8 full assignments each
    for bits in product((0, 1), repeat=4):
        tt = TruthTable(f"f{bits}", 2, bits)
        assert check_equivalence(tt)


def test_equivalence_all_one_input_tables():
    for bits in product((0, 1), repeat=2):
        assert check_equivalence(TruthTable(f"f{bits}", 1, bits))


def test_equivalence_random_three_and_four_input_tables():
    rnd = random.Random(1234)
    for arity in (3, 4):
        for _ in range(100):
            bits = tuple(rnd.randint(0, 1) for _ in range(2 ** arity))
            assert check_equivalence(TruthTable("r", arity, bits))


def test_state_distribution_nand_t1():
    # 4 valid states at weight e, 4 invalid at weight 1
    dist = state_distribution(GATE_LIBRARY["NAND2"], 1.0)
    p_valid = math.e / (4 * math.e + 4)
    p_invalid = 1 / (4 * math.e + 4)
    m = valid_minterms(GATE_LIBRARY["NAND2"]).terms
    for state, p in dist.items():
        expect = p_valid if state in m else p_invalid
        assert p == pytest.approx(expect, abs=1e-15)
    assert abs(sum(dist.values()) - 1.0) < 1e-12


def test_state_distribution_high_temperature_uniform():
    dist = state_distribution(GATE_LIBRARY["NAND2"], 1e12)
    for p in dist.values():
        assert p == pytest.approx(1 / 8, rel=1e-9)


def test_state_distribution_ratio_and_argmax():
    for tt in GATE_LIBRARY.values():
        for temp in (0.5, 1.0, 2.0):
            dist = state_distribution(tt, temp)
            m = valid_minterms(tt).terms
            p_v = max(dist[s] for s in m)
            p_i = max(p for s, p in dist.items() if s not in m)
            assert p_v / p_i == pytest.approx(math.exp(1 / temp), rel=1e-12)
            assert max(dist, key=dist.get) in m


def test_state_distribution_rejects_bad_temperature():
    with pytest.raises(ValueError):
        state_distribution(GATE_LIBRARY["INV"], 0.0)
    with pytest.raises(ValueError):
        state_distribution(GATE_LIBRARY["INV"], -1.0)


def test_truth_table_validation():
    with pytest.raises(ValueError):
        TruthTable("bad", 0, ())
    with pytest.raises(ValueError):
        TruthTable("bad", 5, (0,) * 32)
    with pytest.raises(ValueError):
        TruthTable("bad", 2, (0, 1, 1))
    with pytest.raises(ValueError):
        TruthTable("bad", 1, (0, 2))


def test_resolve_gate_names_and_bitstrings():
    assert resolve_gate("nand") is GATE_LIBRARY["NAND2"]
    assert resolve_gate("XOR2") is GATE_LIBRARY["XOR2"]
    assert resolve_gate("1110") is GATE_LIBRARY["NAND2"]
    custom = resolve_gate("0111")
    assert custom.outputs == (0, 1, 1, 1)
    with pytest.raises(UnknownGateError):
        resolve_gate("FROB")


def test_energy_table_shape():
    rows = energy_table(GATE_LIBRARY["NAND2"])
    assert len(rows) == 8
    assert sum(1 for _, e in rows if e == -1) == 4
