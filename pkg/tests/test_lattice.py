import json
import random
from fractions import Fraction

import numpy as np
import pytest

from hardy_forge.exact import GaussianRational, PiValue
from hardy_forge.lattice import (
    FinSeq,
    backward_diff,
    d_laplacian_power,
    delta,
    form,
    fourier,
    laplacian,
    laplacian_power,
    parseval_bridge,
    side_condition,
    side_condition_oracle,
)
from hardy_forge.trigpoly import AdmissibilityError, HalfFreqPoly, sin_half


def seq(d):
    return FinSeq.from_dict(d)


def as_dict(u):
    return {n: v for n, v in u.items() if v}


def random_seq(rng, lo=-20, hi=20, zero_at_origin=False):
    a = rng.randint(lo, hi)
    b = rng.randint(a, hi)
    vals = {}
    for n in range(a, b + 1):
        vals[n] = GaussianRational(Fraction(rng.randint(-20, 20), rng.randint(1, 20)), Fraction(rng.randint(-20, 20), rng.randint(1, 20)))
    if zero_at_origin:
        vals.pop(0, None)
    return seq(vals)


# naive pointwise operators for oracles
def op_D(f):
    return lambda n: f(n) - f(n - 1)


def op_lap(f):
    return lambda n: 2 * f(n) - f(n - 1) - f(n + 1)


def brute_form(u, form_id, k=0, m=1, p=0, reach=30):
    f = u
    if form_id in ("lap", "dlap", "lap_pow", "dlap_half"):
        for _ in range(m):
            f = op_lap(f)
    if form_id in ("diff_half", "diff_pow", "dlap", "dlap_half"):
        f = op_D(f)
    total = Fraction(0)
    for n in range(u.lo - reach, u.hi + reach + 1):
        v = GaussianRational.coerce(f(n))
        if form_id in ("diff_half", "dlap_half"):
            w = Fraction(2 * n - 1, 2) ** (2 * k)
        elif form_id in ("diff_pow", "lap_pow"):
            w = Fraction(n) ** (2 * k)
        elif form_id == "moment":
            if p < 0 and n == 0:
                continue
            w = Fraction(n) ** p
        else:
            w = 1
        total += v.abs2() * w
    return total


def test_backward_diff_examples():
    assert as_dict(backward_diff(delta(1))) == {1: 1, 2: -1}
    assert as_dict(backward_diff(seq({1: 1, 2: 1, 3: 1}))) == {1: 1, 4: -1}
    assert as_dict(backward_diff(seq({1: 1, 2: 2, 3: 3}))) == {1: 1, 2: 1, 3: 1, 4: -3}


def test_laplacian_examples():
    assert as_dict(laplacian(delta(0))) == {-1: -1, 0: 2, 1: -1}
    assert as_dict(laplacian_power(delta(0), 2)) == {-2: 1, -1: -4, 0: 6, 1: -4, 2: 1}
    lin = laplacian(seq({n: n for n in range(-10, 11)}))
    assert all(lin(n) == 0 for n in range(-9, 10))


def test_d_laplacian_matches_composition():
    u = random_seq(random.Random(4))
    assert d_laplacian_power(u, 2) == backward_diff(laplacian_power(u, 2))


def test_fourier_examples():
    assert fourier(delta(0)) == HalfFreqPoly.constant(1)
    assert fourier(delta(1)) == HalfFreqPoly.exp(-2)
    two_i = GaussianRational(0, -2)
    assert fourier(seq({1: 1, 0: -1})) == HalfFreqPoly.exp(-1, two_i) * sin_half()


def test_parseval_hand_example():
    reps = {r.name: r for r in parseval_bridge(delta(1), k=1)}
    assert reps["diff_half[k=1]"].lhs == PiValue(0, 5)
    assert reps["diff_half[k=1]"].equal
    assert reps["moment[k=1,j=1]"].lhs == PiValue(0, 2)
    assert reps["moment[k=1,j=1]"].equal


@pytest.mark.parametrize("trial", range(30))
def test_parseval_random(trial):
    rng = random.Random(f"bridge:{trial}")
    u = random_seq(rng, zero_at_origin=trial % 2 == 0)
    reps = parseval_bridge(u, k=rng.randint(1, 5), m=rng.randint(1, 2))
    assert reps and all(r.equal for r in reps)


def test_tilde_needs_zero_at_origin():
    with pytest.raises(AdmissibilityError):
        parseval_bridge(delta(0), m=1, tilde=True)


def test_side_condition_examples():
    assert side_condition(delta(1), 1, 1) == GaussianRational(Fraction(-1, 2))
    rng = random.Random(9)
    for m in (1, 2, 3):
        v = seq({n: rng.randint(-9, 9) for n in range(2 * m, 2 * m + 6)})
        for k in range(1, 2 * m + 1):
            assert side_condition(v, m, k) == 0


def test_side_condition_odd_sequence_matches_oracle():
    rng = random.Random(12)
    for _ in range(10):
        vals = {}
        for n in range(1, 6):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            vals[n], vals[-n] = x, -x
        v = seq(vals)
        for m in (1, 2):
            for k in range(1, 2 * m + 1):
                assert side_condition(v, m, k) == side_condition_oracle(v, m, k)


def test_form_examples():
    assert form(delta(1), "moment", p=-2) == 1
    assert form(delta(1), "lap", m=1) == 6
    with pytest.raises(AdmissibilityError):
        form(delta(0), "moment", p=-2)
    with pytest.raises(ValueError):
        form(delta(1), "lap")


CASES = [
    ("diff_half", dict(k=2)),
    ("diff_pow", dict(k=1)),
    ("lap", dict(m=2)),
    ("dlap", dict(m=1)),
    ("lap_pow", dict(m=1, k=3)),
    ("dlap_half", dict(m=1, k=2)),
    ("moment", dict(p=-4)),
    ("moment", dict(p=4)),
]


@pytest.mark.parametrize("form_id,params", CASES)
def test_form_matches_brute_force(form_id, params):
    u = seq({2: 1, 3: 1})
    assert form(u, form_id, **params) == brute_form(u, form_id, **params)
    v = random_seq(random.Random(form_id), 1, 15)
    assert form(v, form_id, **params) == brute_form(v, form_id, **params)


@pytest.mark.parametrize("form_id,params", CASES)
def test_numeric_mode_agrees(form_id, params):
    v = random_seq(random.Random(f"num:{form_id}"), 1, 20)
    exact = form(v, form_id, **params)
    num = form(v.to_numeric(), form_id, **params)
    assert num == pytest.approx(float(exact), rel=1e-12)


def test_finseq_json_round_trip():
    u = random_seq(random.Random(1))
    text = json.dumps(u.to_json())
    assert FinSeq.from_json(json.loads(text)) == u


def test_finseq_admissibility_helpers():
    u = seq({2: 1, 5: 3})
    assert u.supported_on_n0() and u.zeros_on(0, 1)
    assert u.admissible_rellich(1) and not u.admissible_rellich(2)
    assert not seq({-1: 1}).supported_on_n0()
    num = FinSeq(0, np.array([0, 1, 2], dtype=complex))
    assert not num.exact and num(2) == 2 and num(7) == 0
