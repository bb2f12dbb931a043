"""NOR-and-wire circuits, arithmetic generators and the classical evaluator.

Every gate is the three-qubit NOR gadget and every other connection is a
wire that either copies (plain) or negates (inverting) a value.  A net sits
inside at most one gadget; whenever a generator needs to feed a net that
already belongs to a gadget into another one, it taps it through a fresh
plain-wired net.  That keeps every compiled bias in {0, 0.5, 1}.
"""

from __future__ import annotations

from array import array
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import ContractError, StructuralError
from .gadgets import WirePolarity

PLAIN = WirePolarity.PLAIN
INVERTING = WirePolarity.INVERTING


@dataclass(frozen=True)
class NorGate:
    a: str
    b: str
    out: str


@dataclass(frozen=True)
class Wire:
    x: str
    y: str
    polarity: WirePolarity


@dataclass(frozen=True, eq=False)
class Circuit:
    """A validated netlist.

    ``registers`` optionally names ordered groups of nets (little-endian) such
    as the ``M``, ``N`` and ``P`` registers of a multiplier.
    """

    nets: tuple[str, ...]
    gates: tuple[NorGate, ...]
    wires: tuple[Wire, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    registers: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("nets", "gates", "wires", "inputs", "outputs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "registers",
                           {k: tuple(v) for k, v in self.registers.items()})
        self._schedule  # validate eagerly

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return (self.nets, self.gates, self.wires, self.inputs, self.outputs, self.registers) == \
            (other.nets, other.gates, other.wires, other.inputs, other.outputs, other.registers)

    def __repr__(self):
        return (f"Circuit(nets={len(self.nets)}, gates={len(self.gates)}, "
                f"wires={len(self.wires)}, inputs={len(self.inputs)}, outputs={len(self.outputs)})")

    @cached_property
    def index(self) -> dict[str, int]:
        return {net: k for k, net in enumerate(self.nets)}

    @cached_property
    def _schedule(self) -> list[tuple[int, int, int, int]]:
        """Propagation order as ``(kind, src_a, src_b, dst)``; kind 0=NOR, 1=plain, 2=invert."""
        if len(set(self.nets)) != len(self.nets):
            raise StructuralError("duplicate net ids")
        idx = self.index

        def lookup(net):
            try:
                return idx[net]
            except KeyError:
                raise StructuralError(f"reference to undeclared net {net!r}") from None

        if len(set(self.inputs)) != len(self.inputs):
            raise StructuralError("an input is listed twice")
        for reg, nets in self.registers.items():
            for net in nets:
                lookup(net)
        inputs = {lookup(n) for n in self.inputs}
        for o in self.outputs:
            lookup(o)

        gates_by_input = defaultdict(list)
        for g_i, g in enumerate(self.gates):
            a, b, out = lookup(g.a), lookup(g.b), lookup(g.out)
            if out in (a, b):
                raise StructuralError(f"gate {g_i} drives one of its own inputs")
            if out in inputs:
                raise StructuralError(f"input {g.out!r} is driven by a gate")
            gates_by_input[a].append(g_i)
            if b != a:
                gates_by_input[b].append(g_i)
        wires_by_net = defaultdict(list)
        for w_i, w in enumerate(self.wires):
            x, y = lookup(w.x), lookup(w.y)
            if x == y:
                raise StructuralError(f"wire {w_i} connects {w.x!r} to itself")
            wires_by_net[x].append(w_i)
            wires_by_net[y].append(w_i)

        known = np.zeros(len(self.nets), dtype=bool)
        wire_used = np.zeros(len(self.wires), dtype=bool)
        fired = np.zeros(len(self.gates), dtype=bool)
        schedule = []
        queue = [i for i in range(len(self.nets)) if i in inputs]
        for i in queue:
            known[i] = True

        def settle(dst, label):
            if known[dst]:
                raise StructuralError(f"net {self.nets[dst]!r} has more than one driver ({label})")
            known[dst] = True
            queue.append(dst)

        head = 0
        while head < len(queue):
            net = queue[head]
            head += 1
            for w_i in wires_by_net[net]:
                if wire_used[w_i]:
                    continue
                w = self.wires[w_i]
                x, y = idx[w.x], idx[w.y]
                dst = y if x == net else x
                wire_used[w_i] = True
                settle(dst, f"wire {w.x}~{w.y}")
                schedule.append((1 if w.polarity is PLAIN else 2, net, net, dst))
            for g_i in gates_by_input[net]:
                if fired[g_i]:
                    continue
                g = self.gates[g_i]
                a, b, out = idx[g.a], idx[g.b], idx[g.out]
                if known[a] and known[b]:
                    fired[g_i] = True
                    settle(out, f"gate NOR({g.a},{g.b})")
                    schedule.append((0, a, b, out))
        if not known.all():
            missing = [self.nets[i] for i in np.flatnonzero(~known)[:5]]
            raise StructuralError(f"nets not determined by the inputs (cyclic or floating): {missing}")
        return schedule

    def evaluate_all(self, input_bits: np.ndarray) -> np.ndarray:
        """Values of every net for each row of input bits, shape ``(rows, len(nets))``."""
        rows = np.asarray(input_bits, dtype=bool)
        if rows.ndim == 1:
            rows = rows[None, :]
        if rows.shape[1] != len(self.inputs):
            raise ContractError(f"expected {len(self.inputs)} input bits, got {rows.shape[1]}")
        values = np.zeros((rows.shape[0], len(self.nets)), dtype=bool)
        values[:, [self.index[n] for n in self.inputs]] = rows
        for kind, a, b, dst in self._schedule:
            if kind == 0:
                values[:, dst] = ~(values[:, a] | values[:, b])
            elif kind == 1:
                values[:, dst] = values[:, a]
            else:
                values[:, dst] = ~values[:, a]
        return values

    def register(self, name: str) -> tuple[str, ...]:
        try:
            return self.registers[name]
        except KeyError:
            raise ContractError(f"circuit has no register {name!r}; known: {sorted(self.registers)}") from None


def eval(c: Circuit, input_bits: Sequence[int]) -> tuple[int, ...]:  # noqa: A001
    """Classical reference evaluation: output bits for one row of input bits."""
    if len(input_bits) != len(c.inputs):
        raise ContractError(f"expected {len(c.inputs)} input bits, got {len(input_bits)}")
    if any(b not in (0, 1) for b in input_bits):
        raise ContractError("input bits must be 0 or 1")
    values = c.evaluate_all(np.asarray(input_bits, dtype=bool))[0]
    return tuple(int(values[c.index[o]]) for o in c.outputs)


def eval_many(c: Circuit, input_bits: np.ndarray) -> np.ndarray:
    values = c.evaluate_all(input_bits)
    return values[:, [c.index[o] for o in c.outputs]].astype(np.int8)


def int_to_bits(value: int, width: int) -> list[int]:
    return [(value >> k) & 1 for k in range(width)]


def bits_to_int(bits: Sequence[int]) -> int:
    return sum(int(b) << k for k, b in enumerate(bits))


# -- generators --------------------------------------------------------------


class _Builder:
    """Collects nets, gates and wires while tracking gadget membership."""

    def __init__(self):
        self.nets: list[str] = []
        self.gates: list[NorGate] = []
        self.wires: list[Wire] = []
        self._claimed: set[str] = set()
        self._names: set[str] = set()

    def net(self, name: str) -> str:
        if name in self._names:
            raise ContractError(f"duplicate net name {name!r}")
        self._names.add(name)
        self.nets.append(name)
        return name

    def nor(self, a, b, out):
        self._claimed.update((a, b, out))
        self.gates.append(NorGate(a, b, out))

    def wire(self, x, y, polarity: WirePolarity):
        self.wires.append(Wire(x, y, polarity))

    def port(self, src, name: str):
        """Return a net that may join a gadget and carries ``src``'s value."""
        if src not in self._claimed:
            self._claimed.add(src)
            return src
        tap = self.net(name)
        self.wire(src, tap, PLAIN)
        self._claimed.add(tap)
        return tap


class _CountingBuilder:
    """Same interface as :class:`_Builder` but only tallies sizes and degrees."""

    def __init__(self):
        self.net_count = 0
        self.gate_count = 0
        self.wire_count = 0
        self.degree = array("l")
        self._claimed = bytearray()

    def net(self, name=None) -> int:
        self.degree.append(0)
        self._claimed.append(0)
        self.net_count += 1
        return self.net_count - 1

    def nor(self, a, b, out):
        for q in (a, b, out):
            self._claimed[q] = 1
            self.degree[q] += 2
        self.gate_count += 1

    def wire(self, x, y, polarity):
        self.degree[x] += 1
        self.degree[y] += 1
        self.wire_count += 1

    def port(self, src, name=None):
        if not self._claimed[src]:
            self._claimed[src] = 1
            return src
        tap = self.net()
        self.wire(src, tap, PLAIN)
        self._claimed[tap] = 1
        return tap


def _half_adder(bld, a, b, prefix: str):
    """Three NORs in the Q1..Q9 arrangement; returns ``(sum, carry)``."""
    q1 = bld.port(a, prefix + "Q1")
    q2 = bld.port(b, prefix + "Q2")
    q3, q4, q5, q6, q7, q8, q9 = (bld.net(f"{prefix}Q{k}") for k in range(3, 10))
    bld.nor(q1, q2, q3)
    bld.nor(q4, q5, q6)
    bld.nor(q7, q8, q9)
    bld.wire(q1, q4, INVERTING)
    bld.wire(q2, q5, INVERTING)
    bld.wire(q3, q8, PLAIN)
    bld.wire(q6, q7, PLAIN)
    return q9, q6


def _full_adder(bld, a, b, cin, prefix: str):
    """Two half adders plus a carry OR (NOR, then an inverting wire); returns ``(sum, cout)``."""
    s1, c1 = _half_adder(bld, a, b, prefix + "ha1.")
    total, c2 = _half_adder(bld, s1, cin, prefix + "ha2.")
    x1 = bld.port(c1, prefix + "or.a")
    x2 = bld.port(c2, prefix + "or.b")
    x = bld.net(prefix + "or.x")
    bld.nor(x1, x2, x)
    cout = bld.net(prefix + "COUT")
    bld.wire(x, cout, INVERTING)
    return total, cout


def _and(bld, x, y, prefix: str):
    """AND as NOR of two inverted taps of the operands."""
    nx = bld.net(prefix + "nx")
    ny = bld.net(prefix + "ny")
    bld.wire(x, nx, INVERTING)
    bld.wire(y, ny, INVERTING)
    out = bld.net(prefix + "out")
    bld.nor(nx, ny, out)
    return out


def _zero(bld, src, prefix: str):
    """A net that is 0 for every input: NOR(x, not x)."""
    t = bld.net(prefix + "not")
    bld.wire(src, t, INVERTING)
    # always a fresh copy: NOR's own a-b coupling must not land on the t wire
    a = bld.net(prefix + "a")
    bld.wire(src, a, PLAIN)
    out = bld.net(prefix + "out")
    bld.nor(a, t, out)
    return out


def _adder_column(bld, bits, prefix):
    if len(bits) == 1:
        return bits[0], None
    if len(bits) == 2:
        return _half_adder(bld, bits[0], bits[1], prefix + "ha.")
    return _full_adder(bld, bits[0], bits[1], bits[2], prefix + "fa.")


def _multiplier(bld, m_nets, n_nets):
    """Shift-and-add array multiplier with ripple carries; returns product nets."""
    p, q = len(m_nets), len(n_nets)
    acc = [_and(bld, m_nets[i], n_nets[0], f"and{i}_0.") for i in range(p)]
    for j in range(1, q):
        row = [_and(bld, m_nets[i], n_nets[j], f"and{i}_{j}.") for i in range(p)]
        carry = None
        for i, r in enumerate(row):
            w = i + j
            bits = ([acc[w]] if w < len(acc) else []) + [r] + ([carry] if carry is not None else [])
            s, carry = _adder_column(bld, bits, f"r{j}w{w}.")
            if w < len(acc):
                acc[w] = s
            else:
                acc.append(s)
        if carry is not None:
            acc.append(carry)
    for k in range(len(acc), p + q):
        acc.append(_zero(bld, m_nets[0], f"zero{k}."))
    return acc


def _finish(bld: _Builder, inputs, outputs, registers) -> Circuit:
    return Circuit(tuple(bld.nets), tuple(bld.gates), tuple(bld.wires),
                   tuple(inputs), tuple(outputs), registers)


def half_adder() -> Circuit:
    """Half adder with nets Q1..Q9: A=Q1, B=Q2, SUM=Q9, CARRY=Q6."""
    bld = _Builder()
    a, b = bld.net("Q1"), bld.net("Q2")
    s, c = _half_adder(bld, a, b, "")
    return _finish(bld, (a, b), (s, c), {"A": (a,), "B": (b,), "SUM": (s,), "CARRY": (c,)})


def full_adder() -> Circuit:
    """Full adder: inputs ``A, B, CIN``; outputs ``SUM, COUT``.  22 nets, 7 gates, 12 wires."""
    bld = _Builder()
    a, b, cin = bld.net("A"), bld.net("B"), bld.net("CIN")
    s, cout = _full_adder(bld, a, b, cin, "")
    return _finish(bld, (a, b, cin), (s, cout),
                   {"A": (a,), "B": (b,), "CIN": (cin,), "SUM": (s,), "COUT": (cout,)})


def nor_circuit() -> Circuit:
    bld = _Builder()
    a, b, out = bld.net("A"), bld.net("B"), bld.net("OUT")
    bld.nor(a, b, out)
    return _finish(bld, (a, b), (out,), {"A": (a,), "B": (b,), "OUT": (out,)})


def multiplier(p: int, q: int) -> Circuit:
    """Array multiplier with inputs ``M[0..p)``, ``N[0..q)`` and output ``P[0..p+q)``."""
    if p < 1 or q < 1:
        raise ContractError(f"multiplier widths must be >= 1, got ({p}, {q})")
    bld = _Builder()
    m = [bld.net(f"M{i}") for i in range(p)]
    n = [bld.net(f"N{j}") for j in range(q)]
    prod = _multiplier(bld, m, n)
    return _finish(bld, m + n, prod, {"M": tuple(m), "N": tuple(n), "P": tuple(prod)})


@dataclass(frozen=True)
class CircuitSize:
    nets: int
    gates: int
    wires: int
    degrees: array


def multiplier_size(p: int, q: int) -> CircuitSize:
    """Net/gate/wire counts and per-net coupling degrees of ``multiplier(p, q)``
    without materializing the netlist."""
    if p < 1 or q < 1:
        raise ContractError(f"multiplier widths must be >= 1, got ({p}, {q})")
    bld = _CountingBuilder()
    m = [bld.net() for _ in range(p)]
    n = [bld.net() for _ in range(q)]
    _multiplier(bld, m, n)
    return CircuitSize(bld.net_count, bld.gate_count, bld.wire_count, bld.degree)


GENERATORS = {"nor": nor_circuit, "half-adder": half_adder, "full-adder": full_adder}
