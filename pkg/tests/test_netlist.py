import itertools
from collections import Counter

import numpy as np
import pytest

from qaf.errors import ContractError, StructuralError
from qaf.gadgets import WirePolarity
from qaf.netlist import (Circuit, NorGate, Wire, bits_to_int, eval, eval_many, full_adder, half_adder,
                         int_to_bits, multiplier, multiplier_size, nor_circuit)

P, I = WirePolarity.PLAIN, WirePolarity.INVERTING


def test_half_adder_topology():
    c = half_adder()
    assert c.nets == tuple(f"Q{k}" for k in range(1, 10))
    assert c.gates == (NorGate("Q1", "Q2", "Q3"), NorGate("Q4", "Q5", "Q6"), NorGate("Q7", "Q8", "Q9"))
    assert set(c.wires) == {Wire("Q1", "Q4", I), Wire("Q2", "Q5", I), Wire("Q3", "Q8", P), Wire("Q6", "Q7", P)}
    assert c.inputs == ("Q1", "Q2")
    assert c.outputs == ("Q9", "Q6")
    assert (len(c.gates), len(c.wires), len(c.nets)) == (3, 4, 9)


@pytest.mark.parametrize("a, b", list(itertools.product((0, 1), repeat=2)))
def test_half_adder_rows(a, b):
    assert eval(half_adder(), (a, b)) == ((a + b) & 1, (a + b) >> 1)


def test_half_adder_one_one():
    assert eval(half_adder(), (1, 1)) == (0, 1)


def test_full_adder_rows():
    c = full_adder()
    for a, b, cin in itertools.product((0, 1), repeat=3):
        total = a + b + cin
        assert eval(c, (a, b, cin)) == (total & 1, total >> 1)
    assert eval(c, (1, 1, 1)) == (1, 1)
    assert eval(c, (0, 0, 0)) == (0, 0)


def test_full_adder_counts_pinned():
    c = full_adder()
    assert (len(c.nets), len(c.gates), len(c.wires)) == (22, 7, 12)


@pytest.mark.parametrize("p, q", [(p, q) for p in range(1, 5) for q in range(1, 5)])
def test_multiplier_exhaustive(p, q):
    c = multiplier(p, q)
    assert len(c.outputs) == p + q
    pairs = list(itertools.product(range(1 << p), range(1 << q)))
    rows = np.array([int_to_bits(m, p) + int_to_bits(n, q) for m, n in pairs])
    products = [bits_to_int(r) for r in eval_many(c, rows)]
    assert products == [m * n for m, n in pairs]


def test_multiplier_examples():
    assert bits_to_int(eval(multiplier(2, 2), int_to_bits(3, 2) + int_to_bits(3, 2))) == 9
    assert bits_to_int(eval(multiplier(2, 3), int_to_bits(3, 2) + int_to_bits(5, 3))) == 15


def test_multiplier_widths_validated():
    with pytest.raises(ContractError):
        multiplier(0, 2)


@pytest.mark.parametrize("make", [half_adder, full_adder, lambda: multiplier(3, 4), lambda: multiplier(1, 3)])
def test_each_net_in_at_most_one_gadget(make):
    c = make()
    membership = Counter(n for g in c.gates for n in (g.a, g.b, g.out))
    assert max(membership.values()) == 1


@pytest.mark.parametrize("p, q", [(1, 1), (2, 3), (4, 4), (3, 7)])
def test_counting_pass_matches_netlist(p, q):
    c = multiplier(p, q)
    size = multiplier_size(p, q)
    assert (size.nets, size.gates, size.wires) == (len(c.nets), len(c.gates), len(c.wires))
    degree = Counter()
    for g in c.gates:
        for n in (g.a, g.b, g.out):
            degree[n] += 2
    for w in c.wires:
        degree[w.x] += 1
        degree[w.y] += 1
    assert list(size.degrees) == [degree[n] for n in c.nets]


class TestEval:
    def test_single_nor(self):
        assert eval(nor_circuit(), (0, 0)) == (1,)
        assert eval(nor_circuit(), (1, 0)) == (0,)

    def test_plain_identity_wire(self):
        c = Circuit(("x", "y"), (), (Wire("x", "y", P),), ("x",), ("y",))
        assert eval(c, (1,)) == (1,)
        assert eval(c, (0,)) == (0,)

    def test_inverting_wire(self):
        c = Circuit(("x", "y"), (), (Wire("x", "y", I),), ("x",), ("y",))
        assert eval(c, (1,)) == (0,)

    def test_input_count_checked(self):
        with pytest.raises(ContractError):
            eval(half_adder(), (1,))


class TestStructuralErrors:
    def test_cycle(self):
        with pytest.raises(StructuralError, match="not determined"):
            Circuit(("a", "x", "y"), (NorGate("a", "y", "x"), NorGate("a", "x", "y")), (), ("a",), ("x",))

    def test_two_drivers(self):
        with pytest.raises(StructuralError, match="more than one driver"):
            Circuit(("a", "b", "o"), (NorGate("a", "b", "o"),), (Wire("a", "o", P),), ("a", "b"), ("o",))

    def test_input_driven_by_gate(self):
        with pytest.raises(StructuralError, match="driven by a gate"):
            Circuit(("a", "b"), (NorGate("a", "a", "b"),), (), ("a", "b"), ("b",))

    def test_undeclared_net(self):
        with pytest.raises(StructuralError, match="undeclared"):
            Circuit(("a",), (), (Wire("a", "z", P),), ("a",), ("a",))

    def test_floating_net(self):
        with pytest.raises(StructuralError, match="not determined"):
            Circuit(("a", "f"), (), (), ("a",), ("a",))

    def test_self_wire(self):
        with pytest.raises(StructuralError):
            Circuit(("a",), (), (Wire("a", "a", P),), ("a",), ("a",))

    def test_inconsistent_wire_loop(self):
        # a ~ b plain, b ~ c plain, c ~ a inverting: the last wire would drive a known net
        wires = (Wire("a", "b", P), Wire("b", "c", P), Wire("c", "a", I))
        with pytest.raises(StructuralError):
            Circuit(("a", "b", "c"), (), wires, ("a",), ("c",))

    def test_duplicate_net(self):
        with pytest.raises(StructuralError):
            Circuit(("a", "a"), (), (), ("a",), ("a",))
