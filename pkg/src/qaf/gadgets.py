"""Penalty gadgets: the NOR gate, wire couplings and an exhaustive verifier."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import BoundExceededError, ContractError
from .ising import IsingModel, energies

MAX_GADGET_QUBITS = 20


class WirePolarity(enum.Enum):
    PLAIN = "plain"
    INVERTING = "invert"


def wire_coupling(polarity: WirePolarity) -> float:
    """Coupling strength of a wire: -1 copies a value, +1 negates it."""
    if polarity is WirePolarity.PLAIN:
        return -1.0
    if polarity is WirePolarity.INVERTING:
        return 1.0
    raise ContractError(f"unknown wire polarity {polarity!r}")


@dataclass(frozen=True)
class GateGadget:
    """A small Ising fragment whose ground states should realize ``truth_table``.

    Qubits are indexed locally from 0.  ``truth_table`` maps a tuple of input
    bits to a tuple of output bits and must cover every input combination.
    """

    name: str
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    local: IsingModel
    truth_table: Mapping[tuple[int, ...], tuple[int, ...]]
    ancillae: tuple[int, ...] = ()

    def __post_init__(self):
        roles = self.inputs + self.outputs + self.ancillae
        if len(set(roles)) != len(roles):
            raise ContractError("gadget roles overlap")
        if any(not 0 <= q < self.local.n for q in roles):
            raise ContractError("gadget role index outside the local model")
        rows = set(itertools.product((0, 1), repeat=len(self.inputs)))
        if set(self.truth_table) != rows:
            raise ContractError("truth table must cover every input combination")

    @property
    def role_qubits(self) -> tuple[int, ...]:
        return self.inputs + self.outputs


NOR_H = (0.5, 0.5, 1.0)
NOR_J = {(0, 1): 0.5, (0, 2): 1.0, (1, 2): 1.0}


def nor_gadget() -> GateGadget:
    """Three-qubit NOR: inputs 0 and 1, output 2."""
    table = {(a, b): (int(not (a or b)),) for a in (0, 1) for b in (0, 1)}
    return GateGadget("nor", (0, 1), (2,), IsingModel(3, NOR_H, NOR_J), table)


def wire_gadget(polarity: WirePolarity) -> GateGadget:
    """Two qubits joined by a single wire coupling, read as a buffer or inverter."""
    local = IsingModel.build(2, J={(0, 1): wire_coupling(polarity)})
    flip = polarity is WirePolarity.INVERTING
    table = {(a,): (a ^ flip,) for a in (0, 1)}
    return GateGadget(polarity.value, (0,), (1,), local, table)


GADGETS = {
    "nor": nor_gadget,
    "plain": lambda: wire_gadget(WirePolarity.PLAIN),
    "invert": lambda: wire_gadget(WirePolarity.INVERTING),
}


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    ground_energy: float
    gap: float
    ground_states: frozenset[tuple[int, ...]]
    mismatches: list[tuple[int, ...]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "ground_energy": self.ground_energy,
            "gap": self.gap,
            "ground_states": sorted(list(s) for s in self.ground_states),
            "mismatches": [list(m) for m in self.mismatches],
        }


def all_spin_states(n: int) -> np.ndarray:
    """Every +/-1 configuration of ``n`` spins; row ``k`` has qubit ``i`` = bit i of k."""
    codes = np.arange(1 << n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n)) & 1
    return (2 * bits - 1).astype(np.int8)


def verify_gadget(gadget: GateGadget, tol: float = 1e-9) -> VerificationReport:
    """Enumerate the gadget's local states and compare ground manifold with the table.

    Ancilla qubits are projected out: a gadget passes when every table row is
    realized by some ground state and no ground state disagrees with the table
    on the input/output qubits.  Mismatches are role-bit patterns that are in
    exactly one of the two sets.
    """
    n = gadget.local.n
    if n > MAX_GADGET_QUBITS:
        raise BoundExceededError("gadget qubit count", n, MAX_GADGET_QUBITS)
    states = all_spin_states(n)
    e = energies(gadget.local, states)
    ground = float(e.min()) if n else 0.0
    is_ground = e <= ground + tol
    excited = e[~is_ground]
    gap = float(excited.min() - ground) if excited.size else 0.0

    ground_states = frozenset(tuple(int(v) for v in row) for row in states[is_ground])
    roles = list(gadget.role_qubits)
    realized = {tuple(int(v > 0) for v in row[roles]) for row in states[is_ground]}
    expected = {ins + outs for ins, outs in gadget.truth_table.items()}
    mismatches = sorted(realized ^ expected)
    return VerificationReport(not mismatches, ground, gap, ground_states, mismatches)
