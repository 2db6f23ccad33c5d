"""Exact scalars: Gaussian rationals and numbers of the form p + q*pi.

Every integral of a half-frequency trigonometric polynomial over [-pi, pi]
lands in Q + Q*pi (plus an imaginary part of the same shape), so these two
types are enough to state and check all Fourier-side identities without
rounding.  Signs of p + q*pi are decided with a rational enclosure of pi
that is widened until the sign is certain; this always terminates because
pi is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

__all__ = [
    "GaussianRational",
    "PiValue",
    "ComplexPiValue",
    "pi_enclosure",
    "as_fraction",
    "format_fraction",
    "parse_fraction",
]

PI_DIGITS = 64


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_fraction(x: Fraction) -> str:
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """a + b*i with rational a and b."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", as_fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(x, (tuple, list)) and len(x) == 2:
            return cls(as_fraction(x[0]), as_fraction(x[1]))
        return cls(as_fraction(x), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        try:
            f = as_fraction(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * f, self.im * f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(0, 1)


@lru_cache(maxsize=None)
def pi_enclosure(digits: int = PI_DIGITS) -> tuple[Fraction, Fraction]:
    """Rational lo < pi < hi with hi - lo = 10**-digits."""
    with mpmath.workdps(digits + 30):
        scaled = int(mpmath.floor(mpmath.pi * mpmath.mpf(10) ** digits))
    scale = 10**digits
    return Fraction(scaled, scale), Fraction(scaled + 1, scale)


@dataclass(frozen=True, slots=True)
class PiValue:
    """The real number rat + pi_coeff * pi with rational parts."""

    rat: Fraction = Fraction(0)
    pi: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.rat, Fraction):
            object.__setattr__(self, "rat", as_fraction(self.rat))
        if not isinstance(self.pi, Fraction):
            object.__setattr__(self, "pi", as_fraction(self.pi))

    def __add__(self, other):
        if isinstance(other, PiValue):
            return PiValue(self.rat + other.rat, self.pi + other.pi)
        if isinstance(other, (int, Fraction)):
            return PiValue(self.rat + other, self.pi)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return PiValue(-self.rat, -self.pi)

    def __sub__(self, other):
        if isinstance(other, (PiValue, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiValue(self.rat * other, self.pi * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiValue(self.rat / other, self.pi / other)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.rat == 0 and self.pi == 0

    def sign(self) -> int:
        """Exact sign, via a certified enclosure of pi."""
        if self.pi == 0:
            return (self.rat > 0) - (self.rat < 0)
        digits = PI_DIGITS
        while True:
            lo, hi = pi_enclosure(digits)
            if self.pi > 0:
                low, high = self.rat + self.pi * lo, self.rat + self.pi * hi
            else:
                low, high = self.rat + self.pi * hi, self.rat + self.pi * lo
            if low > 0:
                return 1
            if high < 0:
                return -1
            digits *= 2

    def __eq__(self, other):
        if isinstance(other, PiValue):
            return self.rat == other.rat and self.pi == other.pi
        if isinstance(other, (int, Fraction)):
            return self.pi == 0 and self.rat == other
        return NotImplemented

    def __hash__(self):
        return hash((self.rat, self.pi))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self) -> float:
        return float(self.rat) + float(self.pi) * float(mpmath.pi)

    def to_json(self) -> dict:
        return {"rat": format_fraction(self.rat), "pi": format_fraction(self.pi)}

    @classmethod
    def from_json(cls, obj: dict) -> "PiValue":
        return cls(parse_fraction(obj["rat"]), parse_fraction(obj["pi"]))

    def __repr__(self) -> str:
        return f"PiValue({self.rat} + {self.pi}*pi)"


@dataclass(frozen=True, slots=True)
class ComplexPiValue:
    re: PiValue = PiValue()
    im: PiValue = PiValue()

    def __add__(self, other):
        if isinstance(other, ComplexPiValue):
            return ComplexPiValue(self.re + other.re, self.im + other.im)
        return NotImplemented

    def __neg__(self):
        return ComplexPiValue(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ComplexPiValue":
        """Multiply by a Gaussian rational."""
        c = GaussianRational.coerce(c)
        return ComplexPiValue(
            self.re * c.re - self.im * c.im,
            self.re * c.im + self.im * c.re,
        )

    def is_real(self) -> bool:
        return self.im.is_zero()

    def to_json(self) -> dict:
        return {"re": self.re.to_json(), "im": self.im.to_json()}
