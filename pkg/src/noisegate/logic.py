"""Truth tables, valid minterms, and clique energy functions.

A gate on k inputs is lifted to a set of "valid" input/output
assignments (one per input combination).  The energy of a full
assignment is -1 when it is valid and 0 otherwise; three evaluation
routes for that energy (explicit minterm sum, the factored two-term
form, and the closed general form) must agree everywhere, which
`check_equivalence` verifies by exhaustive enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import product

Bits = tuple[int, ...]


@dataclass(frozen=True)
class TruthTable:
    """Boolean function on 1..4 inputs.

    `outputs[i]` is the function value for the input assignment whose
    bits, read x0 first (MSB), encode the integer i.
    """

    name: str
    arity: int
    outputs: Bits

    def __post_init__(self):
        if not 1 <= self.arity <= 4:
            raise ValueError(f"arity must be in [1, 4], got {self.arity}")
        if len(self.outputs) != 2 ** self.arity:
            raise ValueError(
                f"need {2 ** self.arity} output bits for arity {self.arity}, "
                f"got {len(self.outputs)}"
            )
        if any(b not in (0, 1) for b in self.outputs):
            raise ValueError("outputs must be 0/1 bits")

    @classmethod
    def from_bits(cls, bits: str, name: str | None = None) -> "TruthTable":
        """Parse an output bit-string, MSB = the all-zeros input assignment."""
        n = len(bits)
        if n not in (2, 4, 8, 16) or set(bits) - {"0", "1"}:
            raise ValueError(f"not a 2/4/8/16-long bit-string: {bits!r}")
        arity = n.bit_length() - 1
        return cls(name or bits, arity, tuple(int(c) for c in bits))

    def __call__(self, *inputs: int) -> int:
        if len(inputs) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} inputs")
        idx = 0
        for b in inputs:
            idx = (idx << 1) | b
        return self.outputs[idx]

    def input_assignments(self):
        """All input tuples in binary order (x0 is the MSB)."""
        return product((0, 1), repeat=self.arity)

    def full_assignments(self):
        """All (inputs..., output_candidate) tuples, output bit last."""
        return product((0, 1), repeat=self.arity + 1)


GATE_LIBRARY: dict[str, TruthTable] = {
    "INV": TruthTable("INV", 1, (1, 0)),
    "NAND2": TruthTable("NAND2", 2, (1, 1, 1, 0)),
    "NOR2": TruthTable("NOR2", 2, (1, 0, 0, 0)),
    "AND2": TruthTable("AND2", 2, (0, 0, 0, 1)),
    "OR2": TruthTable("OR2", 2, (0, 1, 1, 1)),
    "XOR2": TruthTable("XOR2", 2, (0, 1, 1, 0)),
    "XNOR2": TruthTable("XNOR2", 2, (1, 0, 0, 1)),
}

_ALIASES = {
    "NOT": "INV",
    "NAND": "NAND2",
    "NOR": "NOR2",
    "AND": "AND2",
    "OR": "OR2",
    "XOR": "XOR2",
    "XNOR": "XNOR2",
}


class UnknownGateError(ValueError):
    """Gate name or bit-string not resolvable to a truth table."""


def resolve_gate(spec: str) -> TruthTable:
    """Look up a gate by library name (case-insensitive) or output bit-string."""
    key = spec.strip().upper()
    key = _ALIASES.get(key, key)
    if key in GATE_LIBRARY:
        return GATE_LIBRARY[key]
    if set(spec) <= {"0", "1"}:
        tt = TruthTable.from_bits(spec)
        # reuse the canonical name when the pattern is a library gate
        for lib in GATE_LIBRARY.values():
            if lib.arity == tt.arity and lib.outputs == tt.outputs:
                return lib
        return tt
    raise UnknownGateError(f"unknown gate {spec!r}")


@dataclass(frozen=True)
class MintermSet:
    """Valid input/output assignments; every term carries `arity` bits
    (inputs in index order, output bit last)."""

    arity: int
    terms: frozenset[Bits]

    def __post_init__(self):
        for t in self.terms:
            if len(t) != self.arity:
                raise ValueError(f"term {t} does not have {self.arity} bits")

    def sorted_terms(self) -> list[Bits]:
        return sorted(self.terms)


def valid_minterms(tt: TruthTable) -> MintermSet:
    """The assignments (x0..x_{k-1}, y) with y = tt(x0..x_{k-1})."""
    terms = frozenset(xs + (tt(*xs),) for xs in tt.input_assignments())
    return MintermSet(tt.arity + 1, terms)


class EnergyForm(Enum):
    SUM_OF_MINTERMS = "sum_of_minterms"
    FACTORED = "factored"
    GENERAL_FORM = "general_form"


@dataclass(frozen=True)
class EnergyFunction:
    """Two-level clique energy over inputs plus the output variable.

    Evaluates to -1 on valid assignments and 0 on invalid ones,
    whichever of the three forms is used.
    """

    form: EnergyForm
    arity: int
    table: TruthTable
    minterms: MintermSet | None = None

    @classmethod
    def sum_of_minterms(cls, tt: TruthTable) -> "EnergyFunction":
        return cls(EnergyForm.SUM_OF_MINTERMS, tt.arity + 1, tt, valid_minterms(tt))

    @classmethod
    def factored(cls, tt: TruthTable) -> "EnergyFunction":
        return cls(EnergyForm.FACTORED, tt.arity + 1, tt)

    @classmethod
    def general_form(cls, tt: TruthTable) -> "EnergyFunction":
        return cls(EnergyForm.GENERAL_FORM, tt.arity + 1, tt)


def energy_eval(u: EnergyFunction, state: Bits) -> int:
    """Energy of a full assignment: -1 if valid, 0 otherwise."""
    if len(state) != u.arity:
        raise ValueError(f"state has {len(state)} bits, expected {u.arity}")
    xs, y = tuple(state[:-1]), state[-1]

    if u.form is EnergyForm.SUM_OF_MINTERMS:
        return -1 if tuple(state) in u.minterms.terms else 0

    if u.form is EnergyForm.FACTORED:
        # merged two-term form: OR of on-set input minterms gates the
        # output literal, OR of off-set minterms gates its complement
        hi = any(xs == cand for cand in u.table.input_assignments()
                 if u.table(*cand) == 1)
        lo = any(xs == cand for cand in u.table.input_assignments()
                 if u.table(*cand) == 0)
        return -(int(hi) * y + int(lo) * (1 - y))

    # general form: the gate's output function gates the output literal
    c = u.table(*xs)
    return -(c * y + (1 - c) * (1 - y))


def check_equivalence(tt: TruthTable) -> bool:
    """True iff all three energy forms agree on every full assignment."""
    forms = (
        EnergyFunction.sum_of_minterms(tt),
        EnergyFunction.factored(tt),
        EnergyFunction.general_form(tt),
    )
    for state in tt.full_assignments():
        vals = {energy_eval(u, state) for u in forms}
        if len(vals) != 1:
            return False
    return True


def state_distribution(tt: TruthTable, temperature: float = 1.0) -> dict[Bits, float]:
    """Gibbs distribution P(state) proportional to exp(-U/temperature)."""
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    u = EnergyFunction.sum_of_minterms(tt)
    weights = {s: math.exp(-energy_eval(u, s) / temperature)
               for s in tt.full_assignments()}
    total = sum(weights.values())
    return {s: w / total for s, w in weights.items()}


def energy_table(tt: TruthTable) -> list[tuple[Bits, int]]:
    """(state, energy) rows for every full assignment, in binary order."""
    u = EnergyFunction.sum_of_minterms(tt)
    return [(s, energy_eval(u, s)) for s in tt.full_assignments()]
