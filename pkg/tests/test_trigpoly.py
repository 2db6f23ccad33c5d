import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardy_forge import trigpoly as tp
from hardy_forge.exact import GaussianRational, PiValue
from hardy_forge.trigpoly import HalfFreqPoly

I = GaussianRational(0, 1)
NODES, WEIGHTS = np.polynomial.legendre.leggauss(200)
X = np.pi * NODES


def evaluate(p: HalfFreqPoly, x):
    return sum(complex(c) * np.exp(1j * k * x / 2) for k, c in p.coeffs.items()) if p else np.zeros_like(x, complex)


def quad(values):
    return np.pi * np.dot(WEIGHTS, values)


def test_derivative_examples():
    assert tp.derivative(tp.sin_half()) == tp.cos_half() * Fraction(1, 2)
    assert tp.derivative(HalfFreqPoly.constant(5)) == HalfFreqPoly()
    assert tp.derivative(HalfFreqPoly.exp(6)) == HalfFreqPoly.exp(6, GaussianRational(0, 3))


def test_products():
    s = tp.sin_half()
    cos_x = (HalfFreqPoly.exp(2) + HalfFreqPoly.exp(-2)) * Fraction(1, 2)
    assert tp.multiply(s, s) == HalfFreqPoly.constant(Fraction(1, 2)) - cos_x * Fraction(1, 2)
    assert tp.mod_squared(HalfFreqPoly.exp(3, I)) == HalfFreqPoly.constant(1)
    expect = (HalfFreqPoly.exp(3) - HalfFreqPoly.exp(1)) * (1 / (2 * I))
    assert tp.multiply(HalfFreqPoly.exp(2), s) == expect


def test_integrate_examples():
    assert tp.integrate(HalfFreqPoly.constant(1)).re == PiValue(0, 2)
    assert tp.integrate(tp.sin_half_power(2)).re == PiValue(0, 1)
    assert tp.integrate(tp.cos_half()).re == PiValue(4, 0)
    assert tp.integrate(HalfFreqPoly.exp(4)).re.is_zero()


def test_integrate_matches_quadrature():
    rng = random.Random(11)
    for _ in range(40):
        p = tp.random_poly(rng, lattice="any")
        z = tp.integrate(p)
        q = quad(evaluate(p, X))
        assert float(z.re) == pytest.approx(q.real, abs=1e-9)
        assert float(z.im) == pytest.approx(q.imag, abs=1e-9)


def test_json_round_trip():
    p = tp.random_poly(random.Random(2), lattice="any")
    assert HalfFreqPoly.from_json(p.to_json()) == p


def test_leibniz_identity_hand_example():
    rep = tp.verify_lemma31(HalfFreqPoly.constant(1), 1)
    assert rep.lhs == PiValue(0, Fraction(1, 4)) == rep.rhs
    assert rep.equal


def test_leibniz_identity_rejects_half_frequencies():
    with pytest.raises(tp.AdmissibilityError):
        tp.verify_lemma31(HalfFreqPoly.exp(1), 1)


def test_leibniz_sides_against_quadrature():
    rng = random.Random(5)
    s = tp.sin_half()
    for _ in range(10):
        u = tp.random_poly(rng, max_terms=5, index_bound=6)
        k = rng.randint(1, 3)
        lhs, rhs = tp.lemma31_sides(u, k)
        d = tp.derivative(tp.multiply(u, s), k)
        assert float(lhs) == pytest.approx(quad(np.abs(evaluate(d, X)) ** 2).real, rel=1e-9)
        assert lhs == rhs


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 5))
def test_leibniz_identity_random(seed, k):
    u = tp.random_poly(random.Random(seed))
    assert tp.verify_lemma31(u, k).equal


def test_zero_average_bound_examples():
    rep = tp.verify_lemma32(HalfFreqPoly())
    assert rep.margin.is_zero() and rep.passed
    rep = tp.verify_lemma32(HalfFreqPoly.exp(2))
    assert rep.margin == PiValue(0, Fraction(7, 8))
    with pytest.raises(tp.AdmissibilityError):
        tp.verify_lemma32(HalfFreqPoly.constant(1))


def test_zero_margins():
    z = HalfFreqPoly()
    for rep in (tp.verify_lemma33(z, 3), tp.verify_lemma35(z, 3), tp.verify_lemma36(z, 3)):
        assert rep.admissible and rep.margin.is_zero()


def test_weighted_average_bound_hand_example():
    # e^{ix} - c with int (e^{ix} - c) sin^2(x/2) = 0: -pi/2 - c*pi = 0
    u = HalfFreqPoly.exp(2) + HalfFreqPoly.constant(Fraction(1, 2))
    assert tp.weighted_average_integral(u, 2).re.is_zero()
    assert tp.project_weighted_zero_average(HalfFreqPoly.exp(2), 2) == u
    rep = tp.verify_lemma35(u, 2)
    assert rep.admissible and rep.sign >= 0


def test_inadmissible_reports():
    assert not tp.verify_lemma33(HalfFreqPoly.constant(1), 2).admissible
    assert not tp.verify_lemma36(HalfFreqPoly.exp(1), 2).passed
    assert not tp.verify_lemma35(HalfFreqPoly.constant(1), 2).admissible


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 5))
def test_lemmas_random(seed, k):
    u = tp.random_poly(random.Random(seed))
    v = tp.project_zero_average(u)
    assert tp.verify_lemma32(v).passed
    assert tp.verify_lemma33(v, k).passed
    assert tp.verify_lemma36(v, k).passed
    assert tp.verify_lemma35(tp.project_weighted_zero_average(u, k), k).passed


def test_closed_form_integrals_trivial_cases():
    r1, r2, _ = tp.verify_eqs_63_65(0, 0, 1)
    assert r1.lhs == PiValue(0, 1) and r1.equal
    assert r2.lhs == PiValue(0, Fraction(-1, 2)) and r2.equal


def test_closed_form_integrals_sweep():
    for n in range(-10, 11):
        for m in range(0, 7):
            for k in range(1, 7):
                assert all(r.equal for r in tp.verify_eqs_63_65(n, m, k))
