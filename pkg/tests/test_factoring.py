import itertools

import pytest

from qaf.errors import BoundExceededError, ContractError, NonConvergenceError, UnsatisfiableError
from qaf.factoring import (FactorProblem, compiled_multiplier, enumerate_factorizations, factor_qa, multiply_qa,
                           multiply_with_energy)
from qaf.solvers import AnnealSchedule


def arithmetic_pairs(P, p, q, force_odd=False):
    return {(m, n) for m in range(1 << p) for n in range(1 << q)
            if m * n == P and (not force_odd or (m & 1 and n & 1))}


class TestMultiply:
    def test_three_times_five(self):
        product, e = multiply_with_energy(3, 5, (2, 3), seed=0)
        assert product == 15
        assert e == compiled_multiplier(2, 3).certified_ground_energy

    def test_zero_operand(self):
        assert multiply_qa(0, 6, (1, 3)) == 0

    @pytest.mark.parametrize("m,n", list(itertools.product(range(4), range(4))))
    def test_two_by_two_sa(self, m, n):
        assert multiply_qa(m, n, (2, 2), seed=m * 4 + n) == m * n

    def test_three_by_three_sa_all_pairs(self):
        wrong = [(m, n) for m in range(8) for n in range(8)
                 if multiply_qa(m, n, (3, 3), seed=m * 8 + n) != m * n]
        assert wrong == []

    def test_exact_method(self):
        assert multiply_qa(3, 3, (2, 2), method="exact") == 9

    def test_sqa_method(self):
        assert multiply_qa(2, 3, (2, 2), method="sqa", seed=3) == 6

    def test_width_errors(self):
        with pytest.raises(ContractError):
            multiply_qa(4, 1, (2, 1))
        with pytest.raises(ContractError):
            multiply_qa(-1, 1)

    def test_nonconvergence(self):
        tiny = AnnealSchedule(sweeps=1, beta_start=0.01, beta_end=0.02)
        with pytest.raises(NonConvergenceError):
            multiply_qa(7, 7, (3, 3), attempts=2, schedule=tiny, restarts=1)


class TestFactor:
    @pytest.mark.parametrize("P,widths,force_odd,expected", [
        (15, (2, 3), True, (3, 5)),
        (9, (2, 2), True, (3, 3)),
        (4, (2, 2), False, (2, 2)),
        (15, None, None, (3, 5)),
        (21, None, None, (3, 7)),
    ])
    def test_examples(self, P, widths, force_odd, expected):
        wm, wn = widths or (None, None)
        r = factor_qa(FactorProblem(P, wm, wn, force_odd, seed=0))
        assert (r.m, r.n) == expected
        assert r.verified and r.m * r.n == P

    def test_exact_method(self):
        r = factor_qa(FactorProblem(9, 2, 2, method="exact"))
        assert (r.m, r.n) == (3, 3)

    def test_exact_too_large(self):
        with pytest.raises(BoundExceededError, match="bound of 24"):
            factor_qa(FactorProblem(15, 2, 3, method="exact"))

    def test_exact_unsatisfiable(self):
        with pytest.raises(UnsatisfiableError):
            factor_qa(FactorProblem(13, 2, 2, False, method="exact"))

    def test_sa_prime_exhausts(self):
        with pytest.raises(NonConvergenceError):
            factor_qa(FactorProblem(13, 2, 2, False, attempts=3,
                                    options={"schedule": AnnealSchedule(sweeps=50)}))

    def test_default_widths_and_parity(self):
        prob = FactorProblem(35)
        assert (prob.width_m, prob.width_n, prob.force_odd) == (4, 5, True)
        assert FactorProblem(12).force_odd is False

    @pytest.mark.parametrize("kw", [
        {"P": 3}, {"P": 15, "width_m": 1, "width_n": 2}, {"P": 14, "force_odd": True},
        {"P": 15, "attempts": 0}, {"P": 15, "width_m": 0},
    ])
    def test_invalid_problem(self, kw):
        with pytest.raises(ContractError):
            FactorProblem(**kw)

    def test_result_dict(self):
        r = factor_qa(FactorProblem(15, 2, 3))
        assert set(r.to_dict()) == {"P", "m", "n", "verified", "energy", "attempts"}


class TestEnumerate:
    def test_nine(self):
        assert enumerate_factorizations(9, (2, 2)) == {(3, 3)}

    def test_six_both_orders(self):
        assert enumerate_factorizations(6, (2, 2)) == {(2, 3), (3, 2)}

    @pytest.mark.parametrize("P", range(16))
    def test_two_by_two_matches_arithmetic(self, P):
        assert enumerate_factorizations(P, (2, 2)) == arithmetic_pairs(P, 2, 2)

    @pytest.mark.parametrize("P", [1, 3, 9])
    def test_force_odd(self, P):
        got = enumerate_factorizations(P, (2, 2), force_odd=True)
        assert got == arithmetic_pairs(P, 2, 2, force_odd=True)
        unclamped = enumerate_factorizations(P, (2, 2))
        assert got == {(m, n) for m, n in unclamped if m & 1 and n & 1}
        assert all(m & 1 and n & 1 for m, n in got)

    def test_force_odd_even_product_is_empty(self):
        assert enumerate_factorizations(6, (2, 2), force_odd=True) == set()

    def test_out_of_range(self):
        with pytest.raises(ContractError):
            enumerate_factorizations(16, (2, 2))
