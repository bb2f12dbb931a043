"""Lower circuits to Ising models, check hardware limits, estimate resources."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .errors import ContractError
from .gadgets import NOR_H, NOR_J, WirePolarity, wire_coupling
from .ising import IsingModel, canonical_pair
from .netlist import Circuit, multiplier_size

# each qubit exposes eight coupling ports
DEFAULT_MAX_DEGREE = 8
GATE_GROUND_ENERGY = -1.5
COUPLER_GROUND_ENERGY = -1.0

# Area budget of the reference hardware.
AREA_PER_QUBIT_UM2 = 6400.0
CHIP_SIDE_MM = 20.0
QUBITS_PER_CHIP = int((CHIP_SIDE_MM * 1000) ** 2 // AREA_PER_QUBIT_UM2)  # 62_500


@dataclass(frozen=True)
class HardwareProfile:
    allowed_h: frozenset[float] = frozenset({0.0, 0.5, 1.0})
    allowed_J_magnitudes: frozenset[float] = frozenset({0.5, 1.0})
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        if not self.allowed_h or not self.allowed_J_magnitudes:
            raise ContractError("hardware profile value sets must be non-empty")
        if self.max_degree < 1:
            raise ContractError("max_degree must be >= 1")


@dataclass(frozen=True)
class QubitMap:
    """Where each net lives in the compiled model.

    Without fusion ``net_to_qubit`` is injective; with fusion several
    plain-wired nets share a qubit.  ``copies`` lists the fan-out qubits
    created for a net (they hold the same value in every ground state).
    """

    net_to_qubit: Mapping[str, int]
    copies: Mapping[str, tuple[int, ...]]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    registers: Mapping[str, tuple[int, ...]]

    def register(self, name: str) -> tuple[int, ...]:
        try:
            return self.registers[name]
        except KeyError:
            raise ContractError(f"no register {name!r}; known: {sorted(self.registers)}") from None


@dataclass(frozen=True)
class CompiledModel:
    model: IsingModel
    map: QubitMap
    circuit: Circuit
    gate_count: int
    coupler_count: int
    fanout_copies: int
    fused: int = 0
    offset: float = 0.0

    @property
    def stats(self) -> dict:
        return {
            "qubits": self.model.n,
            "couplings": len(self.model.J),
            "max_degree": self.model.max_degree,
            "gates": self.gate_count,
            "couplers": self.coupler_count,
            "fanout_copies": self.fanout_copies,
            "fused": self.fused,
        }

    @property
    def certified_ground_energy(self) -> float:
        """Model energy reached exactly when every gadget and coupler is satisfied.

        Each NOR contributes -1.5 and each wire or fan-out link -1; constant
        terms removed by fusion are in ``offset``.
        """
        return (GATE_GROUND_ENERGY * self.gate_count
                + COUPLER_GROUND_ENERGY * self.coupler_count - self.offset)


def _place(node: int, k: int, cap: int, max_degree: int, new_qubit, link) -> list[int]:
    """Host ``k`` couplings on ``node`` (``cap`` free ports) by growing a copy tree."""
    if k <= cap:
        return [node] * k
    if k - (cap - 1) <= max_degree - 1:
        child = new_qubit()
        link(node, child)
        return [node] * (cap - 1) + _place(child, k - (cap - 1), max_degree - 1, max_degree, new_qubit, link)
    rest = k - (cap - 2)
    left, right = new_qubit(), new_qubit()
    link(node, left)
    link(node, right)
    return ([node] * (cap - 2)
            + _place(left, (rest + 1) // 2, max_degree - 1, max_degree, new_qubit, link)
            + _place(right, rest // 2, max_degree - 1, max_degree, new_qubit, link))


@lru_cache(maxsize=None)
def fanout_copy_count(degree: int, max_degree: int = DEFAULT_MAX_DEGREE) -> int:
    """Copy qubits the compiler adds for a net with ``degree`` couplings."""
    if degree <= max_degree:
        return 0
    counter = iter(range(1, 1 << 62))
    _place(0, degree, max_degree, max_degree, lambda: next(counter), lambda a, b: None)
    return next(counter) - 1


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def compile(circuit: Circuit, max_degree: int | None = DEFAULT_MAX_DEGREE,
            fuse: bool = False) -> CompiledModel:  # noqa: A001
    """Lower a circuit to an Ising model.

    Each net becomes a qubit (in circuit order), each NOR gate places the NOR
    gadget on its three nets and each wire adds a -1 (plain) or +1
    (inverting) coupling.  Qubits whose degree exceeds ``max_degree`` are
    split into a tree of plain-wired copy qubits appended after the nets;
    ``max_degree=None`` disables splitting.

    With ``fuse=True`` every plain-wired pair of nets is first merged into a
    single qubit (biases add, parallel couplings add).  Ground-state decodings
    are unchanged but the result generally leaves the default hardware
    profile.
    """
    idx = circuit.index
    n_nets = len(circuit.nets)

    uf = _UnionFind(n_nets)
    fused = 0
    if fuse:
        for w in circuit.wires:
            if w.polarity is WirePolarity.PLAIN:
                fused += uf.union(idx[w.x], idx[w.y])
    roots = sorted({uf.find(i) for i in range(n_nets)})
    root_qubit = {r: k for k, r in enumerate(roots)}
    net_qubit = [root_qubit[uf.find(i)] for i in range(n_nets)]
    n = len(roots)

    h = [0.0] * n
    terms: list[tuple[int, int, float]] = []
    offset = 0.0
    coupler_count = 0
    for g in circuit.gates:
        qs = (net_qubit[idx[g.a]], net_qubit[idx[g.b]], net_qubit[idx[g.out]])
        for q, hv in zip(qs, NOR_H):
            h[q] += hv
        for (i, j), v in NOR_J.items():
            terms.append((qs[i], qs[j], v))
    for w in circuit.wires:
        terms.append((net_qubit[idx[w.x]], net_qubit[idx[w.y]], wire_coupling(w.polarity)))
        coupler_count += 1

    # fold intra-qubit terms (from fusion) into the offset, sum parallel ones
    merged: dict[tuple[int, int], float] = {}
    for i, j, v in terms:
        if i == j:
            offset += v
            continue
        key = canonical_pair(i, j)
        merged[key] = merged.get(key, 0.0) + v
    merged = {k: v for k, v in merged.items() if v != 0.0}

    copies: dict[int, list[int]] = {}
    if max_degree is not None:
        if max_degree < 1:
            raise ContractError("max_degree must be >= 1")
        incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for key in merged:
            incident[key[0]].append(key)
            incident[key[1]].append(key)
        # endpoint relocation: (pair, qubit) -> host qubit
        host: dict[tuple[tuple[int, int], int], int] = {}
        links: list[tuple[int, int]] = []
        next_q = [n]

        def new_qubit():
            next_q[0] += 1
            h.append(0.0)
            return next_q[0] - 1

        for q in range(n):
            deg = len(incident[q])
            if deg <= max_degree:
                continue
            if max_degree < 3:
                raise ContractError(f"qubit {q} has degree {deg}; fan-out needs max_degree >= 3")
            start = next_q[0]
            hosts = _place(q, deg, max_degree, max_degree, new_qubit, lambda a, b: links.append((a, b)))
            copies[q] = list(range(start, next_q[0]))
            for key, target in zip(incident[q], hosts):
                host[(key, q)] = target
        relocated = {}
        for (i, j), v in merged.items():
            a = host.get(((i, j), i), i)
            b = host.get(((i, j), j), j)
            relocated[canonical_pair(a, b)] = v
        for a, b in links:
            relocated[canonical_pair(a, b)] = wire_coupling(WirePolarity.PLAIN)
        coupler_count += len(links)
        merged = relocated
        n = next_q[0]

    model = IsingModel.build(n, h, merged)
    net_to_qubit = {net: net_qubit[k] for k, net in enumerate(circuit.nets)}
    copy_map = {}
    for k, net in enumerate(circuit.nets):
        q = net_qubit[k]
        if q in copies and uf.find(k) == k:
            copy_map[net] = tuple(copies[q])
    qmap = QubitMap(
        net_to_qubit,
        copy_map,
        tuple(net_to_qubit[x] for x in circuit.inputs),
        tuple(net_to_qubit[x] for x in circuit.outputs),
        {name: tuple(net_to_qubit[x] for x in nets) for name, nets in circuit.registers.items()},
    )
    return CompiledModel(model, qmap, circuit, len(circuit.gates), coupler_count,
                         sum(len(c) for c in copies.values()), fused, offset)


@dataclass(frozen=True)
class HardwareReport:
    bad_h: list[tuple[int, float]] = field(default_factory=list)
    bad_J: list[tuple[tuple[int, int], float]] = field(default_factory=list)
    over_degree: list[tuple[int, int]] = field(default_factory=list)

    @property
    def compliant(self) -> bool:
        return not (self.bad_h or self.bad_J or self.over_degree)

    def to_dict(self) -> dict:
        return {
            "compliant": self.compliant,
            "bad_h": [[q, v] for q, v in self.bad_h],
            "bad_J": [[i, j, v] for (i, j), v in self.bad_J],
            "over_degree": [[q, d] for q, d in self.over_degree],
        }


def hardware_check(m: CompiledModel | IsingModel, profile: HardwareProfile = HardwareProfile()) -> HardwareReport:
    """List every bias, coupling magnitude and degree outside ``profile``."""
    model = m.model if isinstance(m, CompiledModel) else m
    bad_h = [(q, v) for q, v in enumerate(model.h) if v not in profile.allowed_h]
    bad_J = [(k, v) for k, v in model.J.items() if abs(v) not in profile.allowed_J_magnitudes]
    over = [(q, int(d)) for q, d in enumerate(model.degrees) if d > profile.max_degree]
    return HardwareReport(bad_h, bad_J, over)


def factoring_widths(bits: int) -> tuple[int, int]:
    """Register widths used to factor a ``bits``-bit number: ``(ceil(bits/2) + 1, bits - 1)``."""
    if bits < 2:
        raise ContractError("need at least 2 bits to split into factor registers")
    return (bits + 1) // 2 + 1, bits - 1


@dataclass(frozen=True)
class ResourceEstimate:
    bits: int
    paper_estimate: int
    artifact_count: int | None
    chips: int
    qubits_per_chip: int = QUBITS_PER_CHIP
    artifact_chips: int | None = None
    widths: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "bits": self.bits,
            "paper_estimate": self.paper_estimate,
            "artifact_count": self.artifact_count,
            "chips": self.chips,
            "qubits_per_chip": self.qubits_per_chip,
            "artifact_chips": self.artifact_chips,
            "widths": list(self.widths) if self.widths else None,
        }


@lru_cache(maxsize=64)
def compiled_qubit_count(p: int, q: int, max_degree: int = DEFAULT_MAX_DEGREE) -> int:
    """Qubits of ``compile(multiplier(p, q))`` computed from a counting pass."""
    size = multiplier_size(p, q)
    return size.nets + sum(fanout_copy_count(d, max_degree) for d in size.degrees if d > max_degree)


def estimate_resources(bits: int, max_degree: int = DEFAULT_MAX_DEGREE) -> ResourceEstimate:
    """Qubit and chip budget for factoring a ``bits``-bit number.

    ``paper_estimate`` is the 25*bits**2 rule of thumb; ``artifact_count`` is
    the qubit count this package's compiler produces for the factoring
    multiplier (``None`` below 2 bits, where no split exists).  ``chips``
    divides the rule-of-thumb count by the 62 500 qubits that fit a 20 mm
    square chip at 6400 um^2 per qubit.
    """
    if bits < 1:
        raise ContractError("bit count must be >= 1")
    rule = 25 * bits * bits
    chips = math.ceil(rule / QUBITS_PER_CHIP)
    if bits < 2:
        return ResourceEstimate(bits, rule, None, chips)
    widths = factoring_widths(bits)
    count = compiled_qubit_count(*widths, max_degree)
    return ResourceEstimate(bits, rule, count, chips, artifact_chips=math.ceil(count / QUBITS_PER_CHIP),
                            widths=widths)
