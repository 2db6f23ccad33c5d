"""Exact trigonometric polynomials on the half-integer frequency lattice.

A :class:`HalfFreqPoly` is ``sum_k c_k exp(i k x / 2)`` with Gaussian-rational
``c_k``; the stored index ``k`` is twice the frequency.  Integer-lattice
polynomials (all ``k`` even) are exactly the 2*pi-periodic ones, which is the
class the Leibniz-expansion identity is stated for.

Integration over [-pi, pi] is exact in ``Q + Q*pi``:

* ``k = 0`` contributes ``2*pi*c_0``;
* even ``k != 0`` contributes nothing;
* odd ``k`` contributes ``(4/k) * (-1)^((k-1)/2) * c_k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import combinatorics as comb
from .exact import ComplexPiValue, GaussianRational, PiValue, format_fraction, parse_fraction

__all__ = [
    "HalfFreqPoly",
    "derivative",
    "multiply",
    "conjugate",
    "mod_squared",
    "integrate",
    "sin_half",
    "cos_half",
    "sin_half_power",
    "random_poly",
    "project_zero_average",
    "project_weighted_zero_average",
    "EqualityReport",
    "MarginReport",
    "AdmissibilityError",
    "verify_lemma31",
    "verify_lemma32",
    "verify_lemma33",
    "verify_lemma35",
    "verify_lemma36",
    "verify_eqs_63_65",
]

_ZERO = GaussianRational()
_ONE = GaussianRational(1)


class AdmissibilityError(ValueError):
    """Input violates a hypothesis the check needs."""


class HalfFreqPoly:
    """Immutable finite map ``index -> GaussianRational`` with no zero entries."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, GaussianRational] = {}
        for k, v in items:
            g = GaussianRational.coerce(v)
            if g:
                k = int(k)
                s = c.get(k, _ZERO) + g
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        self._c = c

    @classmethod
    def _raw(cls, c: dict[int, GaussianRational]) -> "HalfFreqPoly":
        p = cls.__new__(cls)
        p._c = {k: v for k, v in c.items() if v}
        return p

    @classmethod
    def constant(cls, value=1) -> "HalfFreqPoly":
        return cls({0: value})

    @classmethod
    def exp(cls, index: int, coeff=1) -> "HalfFreqPoly":
        """``coeff * exp(i * index * x / 2)``."""
        return cls({index: coeff})

    @property
    def coeffs(self) -> dict[int, GaussianRational]:
        return dict(self._c)

    def __getitem__(self, k: int) -> GaussianRational:
        return self._c.get(k, _ZERO)

    def __iter__(self):
        return iter(sorted(self._c))

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, HalfFreqPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {self._c[k]!r}" for k in sorted(self._c))
        return f"HalfFreqPoly({{{body}}})"

    def is_integer_lattice(self) -> bool:
        return all(k % 2 == 0 for k in self._c)

    def is_odd_lattice(self) -> bool:
        return all(k % 2 for k in self._c)

    def __add__(self, other):
        if not isinstance(other, HalfFreqPoly):
            other = HalfFreqPoly.constant(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, _ZERO) + v
        return HalfFreqPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return HalfFreqPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, HalfFreqPoly):
            other = HalfFreqPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HalfFreqPoly):
            return multiply(self, other)
        g = GaussianRational.coerce(other)
        return HalfFreqPoly._raw({k: v * g for k, v in self._c.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = HalfFreqPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, times: int = 1) -> "HalfFreqPoly":
        return derivative(self, times)

    def conjugate(self) -> "HalfFreqPoly":
        return conjugate(self)

    def mod_squared(self) -> "HalfFreqPoly":
        return mod_squared(self)

    def integrate(self) -> ComplexPiValue:
        return integrate(self)

    def to_json(self) -> list:
        return [
            [k, format_fraction(v.re), format_fraction(v.im)] for k, v in sorted(self._c.items())
        ]

    @classmethod
    def from_json(cls, data: list) -> "HalfFreqPoly":
        return cls((int(k), GaussianRational(parse_fraction(re), parse_fraction(im))) for k, re, im in data)


def derivative(p: HalfFreqPoly, times: int = 1) -> HalfFreqPoly:
    """``d^times/dx^times``: the coefficient at index k picks up ``(i k / 2)^times``."""
    if times < 0:
        raise ValueError("derivative order must be non-negative")
    if times == 0:
        return p
    out = {}
    for k, v in p._c.items():
        if k:
            out[k] = v * GaussianRational(0, Fraction(k, 2)) ** times
    return HalfFreqPoly._raw(out)


def multiply(p: HalfFreqPoly, q: HalfFreqPoly) -> HalfFreqPoly:
    out: dict[int, GaussianRational] = {}
    for a, x in p._c.items():
        for b, y in q._c.items():
            k = a + b
            out[k] = out.get(k, _ZERO) + x * y
    return HalfFreqPoly._raw(out)


def conjugate(p: HalfFreqPoly) -> HalfFreqPoly:
    return HalfFreqPoly._raw({-k: v.conjugate() for k, v in p._c.items()})


def mod_squared(p: HalfFreqPoly) -> HalfFreqPoly:
    return multiply(p, conjugate(p))


def integrate(p: HalfFreqPoly) -> ComplexPiValue:
    """Exact integral over [-pi, pi]."""
    rat_re = rat_im = Fraction(0)
    c0 = p[0]
    for k, v in p._c.items():
        if k % 2:
            w = Fraction(4, k) if ((k - 1) // 2) % 2 == 0 else Fraction(-4, k)
            rat_re += w * v.re
            rat_im += w * v.im
    return ComplexPiValue(PiValue(rat_re, 2 * c0.re), PiValue(rat_im, 2 * c0.im))


def sin_half() -> HalfFreqPoly:
    """``sin(x/2) = (e^{ix/2} - e^{-ix/2}) / (2i)``."""
    return HalfFreqPoly({1: GaussianRational(0, Fraction(-1, 2)), -1: GaussianRational(0, Fraction(1, 2))})


def cos_half() -> HalfFreqPoly:
    return HalfFreqPoly({1: Fraction(1, 2), -1: Fraction(1, 2)})


def sin_half_power(p: int) -> HalfFreqPoly:
    return sin_half() ** p


def _cos_x() -> HalfFreqPoly:
    return HalfFreqPoly({2: Fraction(1, 2), -2: Fraction(1, 2)})


def _real_integral(p: HalfFreqPoly) -> PiValue:
    val = integrate(p)
    if not val.is_real():
        raise ArithmeticError(f"integral expected to be real, got imaginary part {val.im!r}")
    return val.re


def _int_abs2(p: HalfFreqPoly, weight: HalfFreqPoly | None = None) -> PiValue:
    """``int |p|^2 * weight`` over [-pi, pi] for a real weight."""
    sq = mod_squared(p)
    if weight is not None:
        sq = multiply(sq, weight)
    return _real_integral(sq)


def random_poly(
    rng: random.Random,
    max_terms: int = 13,
    height: int = 20,
    index_bound: int = 12,
    lattice: str = "integer",
    complex_coeffs: bool = True,
) -> HalfFreqPoly:
    """Seeded random polynomial; numerators and denominators bounded by ``height``.

    ``lattice`` is ``"integer"`` (even indices), ``"odd"`` or ``"any"``.
    """
    if lattice == "integer":
        pool = [k for k in range(-index_bound, index_bound + 1) if k % 2 == 0]
    elif lattice == "odd":
        pool = [k for k in range(-index_bound, index_bound + 1) if k % 2]
    elif lattice == "any":
        pool = list(range(-index_bound, index_bound + 1))
    else:
        raise ValueError(f"unknown lattice {lattice!r}")
    size = rng.randint(1, min(max_terms, len(pool)))
    idx = rng.sample(pool, size)

    def draw():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    return HalfFreqPoly({k: GaussianRational(draw(), draw() if complex_coeffs else 0) for k in idx})


def project_zero_average(u: HalfFreqPoly) -> HalfFreqPoly:
    c = u.coeffs
    c.pop(0, None)
    return HalfFreqPoly._raw(c)


def _pi_part(v: PiValue) -> Fraction:
    if v.rat != 0:
        raise ArithmeticError("expected a pure multiple of pi")
    return v.pi


def weighted_average_integral(u: HalfFreqPoly, k: int) -> ComplexPiValue:
    return integrate(multiply(u, sin_half_power(2 * k - 2)))


def project_weighted_zero_average(u: HalfFreqPoly, k: int) -> HalfFreqPoly:
    """Subtract the constant that makes ``int u sin^(2k-2)(x/2) = 0``."""
    if not u.is_integer_lattice():
        raise AdmissibilityError("weighted projection needs an integer-lattice polynomial")
    num = weighted_average_integral(u, k)
    den = _pi_part(_real_integral(sin_half_power(2 * k - 2)))
    t = GaussianRational(_pi_part(num.re) / den, _pi_part(num.im) / den)
    return u - HalfFreqPoly.constant(t)


@dataclass(frozen=True)
class EqualityReport:
    name: str
    lhs: object
    rhs: object

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    passed = equal


@dataclass(frozen=True)
class MarginReport:
    name: str
    admissible: bool
    lhs: PiValue | None = None
    rhs: PiValue | None = None
    detail: str = ""

    @property
    def margin(self) -> PiValue | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.lhs - self.rhs

    @property
    def sign(self) -> int | None:
        m = self.margin
        return None if m is None else m.sign()

    @property
    def passed(self) -> bool:
        return self.admissible and self.sign is not None and self.sign >= 0


def _require_integer_lattice(u: HalfFreqPoly) -> None:
    if not u.is_integer_lattice():
        raise AdmissibilityError("u must be 2*pi-periodic (no half-integer frequencies)")


def _derivative_norms(u: HalfFreqPoly, upto: int, weight: HalfFreqPoly | None = None) -> list[PiValue]:
    out = []
    d = u
    for _ in range(upto + 1):
        out.append(_int_abs2(d, weight))
        d = derivative(d)
    return out


def lemma31_sides(u: HalfFreqPoly, k: int) -> tuple[PiValue, PiValue]:
    """Both sides of the Leibniz-expansion identity, without the lattice check."""
    s = sin_half()
    lhs = _int_abs2(derivative(multiply(u, s), k))
    t = comb.constant_table(k)
    plain = _derivative_norms(u, k)
    weighted = _derivative_norms(u, k, mod_squared(s))
    rhs = PiValue()
    for i in range(k + 1):
        rhs = rhs + plain[i] * t.alpha[i] + weighted[i] * t.beta[i]
    return lhs, rhs


def verify_lemma31(u: HalfFreqPoly, k: int) -> EqualityReport:
    if k < 1:
        raise ValueError("k must be a positive integer")
    _require_integer_lattice(u)
    lhs, rhs = lemma31_sides(u, k)
    return EqualityReport(f"lemma31[k={k}]", lhs, rhs)


def verify_lemma32(u: HalfFreqPoly) -> MarginReport:
    _require_integer_lattice(u)
    if u[0]:
        raise AdmissibilityError("u must have zero average")
    lhs = _int_abs2(derivative(u), mod_squared(sin_half()))
    rhs = _int_abs2(u) * Fraction(1, 16)
    return MarginReport("lemma32", True, lhs, rhs)


def verify_lemma33(u: HalfFreqPoly, k: int) -> MarginReport:
    name = f"lemma33[k={k}]"
    if not u.is_integer_lattice():
        return MarginReport(name, False, detail="half-integer frequencies present")
    if u[0]:
        return MarginReport(name, False, detail="nonzero average")
    t = comb.constant_table(k)
    lhs = _int_abs2(derivative(multiply(u, sin_half()), k))
    plain = _derivative_norms(u, k - 1)
    rhs = PiValue()
    for i in range(k):
        rhs = rhs + plain[i] * (t.alpha[i] + t.beta[i + 1] / 16)
    return MarginReport(name, True, lhs, rhs)


def verify_lemma35(u: HalfFreqPoly, k: int) -> MarginReport:
    name = f"lemma35[k={k}]"
    if k < 2:
        raise ValueError("the weighted lemma needs k >= 2")
    if not u.is_integer_lattice():
        return MarginReport(name, False, detail="half-integer frequencies present")
    avg = weighted_average_integral(u, k)
    if not (avg.re.is_zero() and avg.im.is_zero()):
        return MarginReport(name, False, detail="weighted average int u sin^(2k-2)(x/2) is nonzero")
    lhs = _int_abs2(derivative(u), sin_half_power(2 * k))
    rhs = _int_abs2(u, sin_half_power(2 * k - 2)) * Fraction(k - 1, 2)
    return MarginReport(name, True, lhs, rhs)


def verify_lemma36(u: HalfFreqPoly, k: int) -> MarginReport:
    name = f"lemma36[k={k}]"
    if k < 2:
        raise ValueError("this lemma needs k >= 2")
    if not u.is_integer_lattice():
        return MarginReport(name, False, detail="half-integer frequencies present")
    if u[0]:
        return MarginReport(name, False, detail="nonzero average")
    lhs = _int_abs2(derivative(multiply(u, sin_half_power(2)), k))
    const = comb.alpha(k, k - 1) * (comb.alpha(k - 1, k - 2) + comb.beta(k - 1, k - 1) / 16)
    rhs = _int_abs2(derivative(u, k - 2)) * const
    return MarginReport(name, True, lhs, rhs)


def verify_eqs_63_65(n: int, m: int, k: int) -> list[EqualityReport]:
    """Closed forms for ``u = e^{inx/2} sin(x/2)`` and ``u sin(x/2)``."""
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    u = multiply(HalfFreqPoly.exp(n), sin_half())
    dm = derivative(u, m)
    scale_m = 4**m
    r1 = EqualityReport(
        f"eq63[n={n},m={m}]",
        _int_abs2(dm) * scale_m,
        PiValue(0, Fraction((n + 1) ** (2 * m) + (n - 1) ** (2 * m), 2)),
    )
    r2 = EqualityReport(
        f"eq64[n={n},m={m}]",
        _int_abs2(dm, _cos_x()) * scale_m,
        PiValue(0, Fraction(-((n * n - 1) ** m), 2)),
    )
    r3 = EqualityReport(
        f"eq65[n={n},k={k}]",
        _int_abs2(derivative(multiply(u, sin_half()), k)) * 4**k,
        PiValue(0, Fraction((n + 2) ** (2 * k) + (n - 2) ** (2 * k) + 4 * n ** (2 * k), 8)),
    )
    return [r1, r2, r3]
