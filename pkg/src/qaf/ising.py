"""Ising models over +/-1 spins, energy evaluation and clamping.

The energy of a spin configuration ``s`` is::

    E(s) = sum_i h[i] * s[i] + sum_{i<j} J[i, j] * s[i] * s[j]

with every unordered pair counted once.  Logical 1 is spin +1 and logical 0
is spin -1; this is the only convention under which the NOR gadget's ground
states spell out the NOR truth table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ContractError

Pair = tuple[int, int]
ClampSet = Mapping[int, int]


def canonical_pair(i: int, j: int) -> Pair:
    if i == j:
        raise ContractError(f"self-coupling on qubit {i}")
    return (i, j) if i < j else (j, i)


def _check_spin(s) -> int:
    if s not in (-1, 1):
        raise ContractError(f"spin must be -1 or +1, got {s!r}")
    return int(s)


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Immutable Ising model with sparse couplings keyed by ``(i, j)``, ``i < j``.

    Use :meth:`build` to construct from loose inputs; the plain constructor
    expects already-canonical data and validates it.
    """

    n: int
    h: tuple[float, ...]
    J: Mapping[Pair, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ContractError("qubit count must be non-negative")
        h = tuple(float(v) for v in self.h)
        if len(h) != self.n:
            raise ContractError(f"expected {self.n} biases, got {len(h)}")
        if not all(math.isfinite(v) for v in h):
            raise ContractError("biases must be finite")
        J = {}
        for (i, j), v in self.J.items():
            if not (0 <= i < j < self.n):
                raise ContractError(f"coupling key {(i, j)} is not canonical for n={self.n}")
            v = float(v)
            if not math.isfinite(v):
                raise ContractError(f"coupling {(i, j)} is not finite")
            J[(i, j)] = v
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", MappingProxyType(dict(sorted(J.items()))))

    @classmethod
    def build(cls, n: int, h: Mapping[int, float] | Sequence[float] | None = None,
              J: Mapping[Pair, float] | Iterable[tuple[int, int, float]] | None = None) -> "IsingModel":
        """Construct a model, canonicalizing coupling keys.

        Args:
            n: Qubit count.
            h: Either a dense sequence of length ``n`` or a sparse ``{i: h_i}``.
            J: Either ``{(i, j): J_ij}`` or an iterable of ``(i, j, J_ij)``.
                Each unordered pair may appear once; a repeated pair raises
                rather than accumulating.
        """
        if h is None:
            dense = [0.0] * n
        elif isinstance(h, Mapping):
            dense = [0.0] * n
            for i, v in h.items():
                if not 0 <= i < n:
                    raise ContractError(f"bias index {i} out of range for n={n}")
                dense[i] = float(v)
        else:
            dense = list(h)
        items = J.items() if isinstance(J, Mapping) else ((((i, j), v) for i, j, v in J) if J else ())
        couplings: dict[Pair, float] = {}
        for (i, j), v in items:
            key = canonical_pair(i, j)
            if key in couplings:
                raise ContractError(f"duplicate coupling for pair {key}")
            couplings[key] = v
        return cls(n, tuple(dense), couplings)

    def __eq__(self, other):
        if not isinstance(other, IsingModel):
            return NotImplemented
        return self.n == other.n and self.h == other.h and dict(self.J) == dict(other.J)

    def __hash__(self):
        return hash((self.n, self.h, tuple(self.J.items())))

    def __repr__(self):
        return f"IsingModel(n={self.n}, couplings={len(self.J)})"

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.J:
            deg[i] += 1
            deg[j] += 1
        return deg

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric adjacency as ``(indptr, indices, weights)`` arrays."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees)
        indices = np.empty(2 * len(self.J), dtype=np.int64)
        weights = np.empty(2 * len(self.J), dtype=np.float64)
        fill = indptr[:-1].copy()
        for (i, j), v in self.J.items():
            indices[fill[i]], weights[fill[i]] = j, v
            fill[i] += 1
            indices[fill[j]], weights[fill[j]] = i, v
            fill[j] += 1
        return indptr, indices, weights

    @property
    def h_array(self) -> np.ndarray:
        return np.asarray(self.h, dtype=np.float64)


def energy(model: IsingModel, state: Sequence[int]) -> float:
    """Evaluate the Ising Hamiltonian on a full spin configuration."""
    if len(state) != model.n:
        raise ContractError(f"state has {len(state)} spins, model has {model.n} qubits")
    s = [int(v) for v in state]
    e = 0.0
    for hi, si in zip(model.h, s):
        e += hi * si
    for (i, j), v in model.J.items():
        e += v * s[i] * s[j]
    return e


def energies(model: IsingModel, states: np.ndarray) -> np.ndarray:
    """Vectorized energy of each row of ``states`` (shape ``(k, n)``)."""
    states = np.asarray(states, dtype=np.float64)
    if states.ndim == 1:
        states = states.reshape(1, -1)
    e = states @ model.h_array
    if model.J:
        keys = np.array(list(model.J.keys()), dtype=np.int64)
        vals = np.array(list(model.J.values()))
        e += (states[:, keys[:, 0]] * states[:, keys[:, 1]]) @ vals
    return e


@dataclass(frozen=True)
class ReducedModel:
    """A model over the free qubits of a clamped parent.

    ``energy(parent, lift(f)) == energy(model, f) + offset`` for every free
    assignment ``f``.
    """

    model: IsingModel
    offset: float
    index_map: tuple[int, ...]
    clamps: Mapping[int, int]
    parent_n: int

    def lift(self, free_state: Sequence[int]) -> np.ndarray:
        """Re-insert clamped spins into a free-qubit configuration."""
        full = np.zeros(self.parent_n, dtype=np.int8)
        for q, s in self.clamps.items():
            full[q] = s
        if len(self.index_map):
            full[list(self.index_map)] = np.asarray(free_state, dtype=np.int8)
        return full

    def lift_many(self, free_states: np.ndarray) -> np.ndarray:
        free_states = np.asarray(free_states, dtype=np.int8)
        if free_states.ndim == 1:
            free_states = free_states.reshape(1, -1)
        full = np.zeros((free_states.shape[0], self.parent_n), dtype=np.int8)
        for q, s in self.clamps.items():
            full[:, q] = s
        if len(self.index_map):
            full[:, list(self.index_map)] = free_states
        return full


def check_clamps(model: IsingModel, clamps: ClampSet | None) -> dict[int, int]:
    out = {}
    for q, s in (clamps or {}).items():
        if not 0 <= q < model.n:
            raise ContractError(f"clamp index {q} out of range for n={model.n}")
        out[int(q)] = _check_spin(s)
    return out


def reduce(model: IsingModel, clamps: ClampSet | None) -> ReducedModel:
    """Eliminate clamped qubits, folding their terms into biases and an offset."""
    clamps = check_clamps(model, clamps)
    free = [q for q in range(model.n) if q not in clamps]
    local = {q: k for k, q in enumerate(free)}
    h = [model.h[q] for q in free]
    offset = 0.0
    for q, s in sorted(clamps.items()):
        offset += model.h[q] * s
    J = {}
    for (i, j), v in model.J.items():
        ci, cj = i in clamps, j in clamps
        if ci and cj:
            offset += v * clamps[i] * clamps[j]
        elif ci:
            h[local[j]] += v * clamps[i]
        elif cj:
            h[local[i]] += v * clamps[j]
        else:
            J[(local[i], local[j])] = v
    return ReducedModel(IsingModel(len(free), tuple(h), J), offset, tuple(free),
                        MappingProxyType(clamps), model.n)


def bit_to_spin(b: int) -> int:
    if b not in (0, 1):
        raise ContractError(f"bit must be 0 or 1, got {b!r}")
    return 1 if b else -1


def spin_to_bit(s: int) -> int:
    return 1 if _check_spin(s) == 1 else 0


def decode_register(state: Sequence[int], indices: Sequence[int]) -> int:
    """Read an unsigned integer from spins, least-significant qubit first."""
    value = 0
    for k, q in enumerate(indices):
        if not 0 <= q < len(state):
            raise ContractError(f"register index {q} out of range for {len(state)} spins")
        value |= spin_to_bit(int(state[q])) << k
    return value


def encode_register(value: int, indices: Sequence[int]) -> dict[int, int]:
    """Clamp assignments that write ``value`` into a little-endian register."""
    if value < 0 or value >= 1 << len(indices):
        raise ContractError(f"{value} does not fit in {len(indices)} bits")
    return {q: bit_to_spin((value >> k) & 1) for k, q in enumerate(indices)}
