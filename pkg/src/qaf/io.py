"""Text format for Ising models and JSON format for netlists.

Ising text files are line oriented::

    # comment
    n 3
    h 0 0.5
    J 0 1 0.5
    c 2 +1

with 0-based indices, ``i < j`` on ``J`` lines and optional ``c`` clamp lines.
"""

from __future__ import annotations

import json
from typing import Mapping

from .errors import ContractError
from .gadgets import WirePolarity
from .ising import IsingModel, canonical_pair
from .netlist import Circuit, NorGate, Wire


class FormatError(ContractError):
    """Malformed model or netlist file."""


def format_number(v: float) -> str:
    """Shortest decimal that round-trips; integral values print without a point."""
    v = float(v)
    if v == 0:
        return "0"
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def dumps_ising(model: IsingModel, clamps: Mapping[int, int] | None = None) -> str:
    lines = [f"n {model.n}"]
    lines += [f"h {i} {format_number(v)}" for i, v in enumerate(model.h) if v != 0]
    lines += [f"J {i} {j} {format_number(v)}" for (i, j), v in sorted(model.J.items())]
    lines += [f"c {q} {'+1' if s > 0 else '-1'}" for q, s in sorted((clamps or {}).items())]
    return "\n".join(lines) + "\n"


def loads_ising(text: str) -> tuple[IsingModel, dict[int, int]]:
    """Parse a model file; returns the model and any clamps it declares."""
    n = None
    h: dict[int, float] = {}
    J: dict[tuple[int, int], float] = {}
    clamps: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag, args = parts[0], parts[1:]
        try:
            if tag == "n":
                if n is not None:
                    raise FormatError("second 'n' line")
                (count,) = args
                n = int(count)
                if n < 0:
                    raise FormatError("negative qubit count")
                continue
            if n is None:
                raise FormatError("'n' line must come first")
            if tag == "h":
                i, v = int(args[0]), float(args[1])
                if len(args) != 2 or not 0 <= i < n or i in h:
                    raise FormatError(f"bad or repeated bias line {line!r}")
                h[i] = v
            elif tag == "J":
                if len(args) != 3:
                    raise FormatError(f"bad coupling line {line!r}")
                i, j, v = int(args[0]), int(args[1]), float(args[2])
                key = canonical_pair(i, j)
                if key in J or not 0 <= key[0] < key[1] < n:
                    raise FormatError(f"bad or repeated coupling line {line!r}")
                J[key] = v
            elif tag == "c":
                i, s = int(args[0]), int(args[1])
                if len(args) != 2 or not 0 <= i < n or s not in (-1, 1) or i in clamps:
                    raise FormatError(f"bad or repeated clamp line {line!r}")
                clamps[i] = s
            else:
                raise FormatError(f"unknown line tag {tag!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, FormatError):
                raise FormatError(f"line {lineno}: {exc}") from None
            raise FormatError(f"line {lineno}: cannot parse {line!r}") from None
    if n is None:
        raise FormatError("missing 'n' line")
    try:
        return IsingModel.build(n, h, J), clamps
    except ContractError as exc:
        raise FormatError(str(exc)) from None


def circuit_to_dict(c: Circuit) -> dict:
    return {
        "inputs": list(c.inputs),
        "outputs": list(c.outputs),
        "gates": [{"type": "NOR", "a": g.a, "b": g.b, "out": g.out} for g in c.gates],
        "wires": [{"x": w.x, "y": w.y, "polarity": w.polarity.value} for w in c.wires],
        "nets": list(c.nets),
        "registers": {k: list(v) for k, v in c.registers.items()},
    }


def circuit_from_dict(doc: Mapping) -> Circuit:
    """Build and validate a circuit from its JSON document.

    ``nets`` and ``registers`` are optional; without ``nets`` the qubit order
    follows first appearance (inputs, gates, wires, outputs).
    """
    try:
        inputs = [str(x) for x in doc["inputs"]]
        outputs = [str(x) for x in doc["outputs"]]
        gates = []
        for g in doc.get("gates", []):
            if g.get("type", "NOR") != "NOR":
                raise FormatError(f"unsupported gate type {g.get('type')!r}")
            gates.append(NorGate(str(g["a"]), str(g["b"]), str(g["out"])))
        wires = []
        for w in doc.get("wires", []):
            try:
                pol = WirePolarity(w["polarity"])
            except ValueError:
                raise FormatError(f"unknown wire polarity {w['polarity']!r}") from None
            wires.append(Wire(str(w["x"]), str(w["y"]), pol))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed netlist: {exc}") from None
    if "nets" in doc:
        nets = [str(x) for x in doc["nets"]]
    else:
        seen: dict[str, None] = {}
        for x in inputs:
            seen.setdefault(x)
        for g in gates:
            for x in (g.a, g.b, g.out):
                seen.setdefault(x)
        for w in wires:
            seen.setdefault(w.x)
            seen.setdefault(w.y)
        for x in outputs:
            seen.setdefault(x)
        nets = list(seen)
    registers = {str(k): tuple(str(x) for x in v) for k, v in doc.get("registers", {}).items()}
    return Circuit(tuple(nets), tuple(gates), tuple(wires), tuple(inputs), tuple(outputs), registers)


def dumps_circuit(c: Circuit) -> str:
    return json.dumps(circuit_to_dict(c), indent=1) + "\n"


def loads_circuit(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"netlist is not valid JSON: {exc}") from None
    return circuit_from_dict(doc)
