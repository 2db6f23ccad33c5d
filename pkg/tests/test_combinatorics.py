import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hardy_forge import combinatorics as comb


def xi_oracle(k, i):
    # straight from the double sum, no pruning
    def c(n, r):
        return math.comb(n, r) if 0 <= r <= n else 0

    total = Fraction(0)
    for m in range(0, k + 2):
        for n in range(1, k - i + 1):
            total += Fraction(c(k + 1, i - m) * c(k, i + n) * c(n - 1, m) * (-1) ** n) * Fraction(2) ** (n - m)
    return total


def test_binom_examples():
    assert comb.binom(4, 2) == 6
    assert comb.binom(7, 7) == 1
    assert comb.binom(3, 5) == 0
    assert comb.binom(3, -1) == 0
    with pytest.raises(ValueError):
        comb.binom(-1, 0)


def test_xi_examples():
    assert comb.xi(2, 1) == -6
    assert comb.xi(2, 0) == 0
    for k in range(1, 12):
        assert comb.xi(k, k) == 0


@pytest.mark.parametrize("k", range(1, 13))
def test_xi_matches_oracle(k):
    for i in range(k + 1):
        assert comb.xi(k, i) == xi_oracle(k, i)


def test_alpha_beta_examples():
    assert comb.alpha(2, 0) == 0 == comb.alpha(2, 0, "simplified")
    assert comb.beta(2, 1) == Fraction(1, 2) == comb.beta(2, 1, "simplified")
    for k in range(1, 20):
        assert comb.alpha(k, k) == 0
        assert comb.beta(k, k, "simplified") == 1


@pytest.mark.parametrize("k", range(1, 31))
def test_raw_and_simplified_agree(k):
    for i in range(k + 1):
        assert comb.alpha(k, i) == comb.alpha(k, i, "simplified")
        assert comb.beta(k, i) == comb.beta(k, i, "simplified")


def test_gamma_values():
    assert comb.gamma(1, 1) == Fraction(1, 4)
    assert comb.gamma(2, 2) == Fraction(1, 8)
    assert comb.gamma(2, 1) == Fraction(9, 4)
    for k in range(1, 30):
        assert comb.gamma(k, 1) == Fraction((2 * k - 1) ** 2, 4)


def test_gamma_printed_disagrees():
    assert comb.gamma_printed(1, 1) == Fraction(1, 4) == comb.gamma(1, 1)
    assert comb.gamma_printed(2, 1) == Fraction(33, 16)
    assert comb.gamma_printed(2, 2) == Fraction(1, 2)
    rep = comb.erratum_report()
    assert rep["printed_formula_consistent"] is False
    assert [r["agree"] for r in rep["rows"]] == [True, False, False]


def test_index_validation():
    with pytest.raises(ValueError):
        comb.xi(0, 0)
    with pytest.raises(ValueError):
        comb.gamma(3, 0)
    with pytest.raises(ValueError):
        comb.alpha(3, 4)
    with pytest.raises(ValueError):
        comb.beta(3, 1, "other")


def test_xi_identity_small():
    rep = comb.verify_identity_61(2)
    assert rep.passed and not rep.counterexamples
    c = rep.checks[1]
    assert (c.lhs, c.rhs) == (-6, -6)
    assert rep.checks[-1].lhs == 0


def test_even_binomial_sums_examples():
    assert comb.verify_binomial_67_68(3, 5)
    assert comb.verify_binomial_67_68(10, -7)


@given(st.integers(1, 15), st.integers(-50, 50))
def test_even_binomial_sums_random(k, n):
    assert comb.verify_binomial_67_68(k, n)


def test_higher_order_constants():
    assert comb.higher_order_const(1, "even") == Fraction(1, 2)
    assert comb.higher_order_const(2, "even") == 12
    assert comb.higher_order_const(1, "odd") == 2
    assert comb.higher_order_const(2, "odd") == 96
    assert comb.rellich_weight_c(1) == 0
    assert comb.rellich_weight_c(2) == Fraction(1, 2)
    assert comb.product_const(2, 4) == comb.rellich_weight_c(4) * comb.rellich_weight_c(2)
    assert comb.product_const(1, 3, "odd") == Fraction(25, 4) * comb.rellich_weight_c(2)
    with pytest.raises(ValueError):
        comb.product_const(2, 3)
    with pytest.raises(ValueError):
        comb.product_const(1, 2, "odd")


def test_table_rows_shape():
    rows = comb.table_rows(5)
    assert [r["i"] for r in rows] == list(range(6))
    assert rows[0]["gamma"] is None
    assert rows[1]["gamma"] == comb.gamma(5, 1)
    assert set(rows[0]) >= {"k", "i", "xi", "alpha", "beta", "gamma", "gamma_printed"}


def test_constant_table_gamma_at():
    t = comb.constant_table(4)
    rng = random.Random(3)
    i = rng.randint(1, 4)
    assert t.gamma_at(i) == comb.gamma(4, i)
