"""Finitely supported sequences on Z, difference operators and quadratic forms.

A :class:`FinSeq` lives on an integer window ``[lo, hi]`` and is either exact
(a tuple of :class:`GaussianRational`) or numeric (a complex128 array).
Difference operators are convolutions with short integer stencils, so the
same code path serves both modes.

The Fourier bridge uses the unnormalized transform
``G(u)(x) = sum_n u(n) exp(-i n x)``, stored as a :class:`HalfFreqPoly` with
index ``-2n``.  Every Parseval statement is then checked in the exact form
``2*pi * (lattice sum) == integral``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .combinatorics import binom
from .exact import GaussianRational, PiValue, format_fraction, parse_fraction
from .trigpoly import (
    AdmissibilityError,
    EqualityReport,
    HalfFreqPoly,
    derivative,
    integrate,
    mod_squared,
    multiply,
    sin_half,
    sin_half_power,
)

__all__ = [
    "FinSeq",
    "delta",
    "backward_diff",
    "laplacian",
    "laplacian_power",
    "d_laplacian_power",
    "apply_stencil",
    "stencil",
    "fourier",
    "parseval_bridge",
    "side_condition",
    "side_condition_oracle",
    "form",
    "FORM_IDS",
]

_ZERO = GaussianRational()


class FinSeq:
    """Sequence on ``[lo, hi]``, zero outside.  An empty window has ``hi = lo - 1``."""

    __slots__ = ("lo", "_vals", "exact")

    def __init__(self, lo: int, values, exact: bool | None = None):
        if exact is None:
            exact = not isinstance(values, np.ndarray)
        self.lo = int(lo)
        self.exact = bool(exact)
        if self.exact:
            self._vals = tuple(GaussianRational.coerce(v) for v in values)
        else:
            arr = np.array(values, dtype=np.complex128, copy=True)
            arr.setflags(write=False)
            self._vals = arr

    @classmethod
    def from_dict(cls, values: Mapping[int, object], exact: bool = True) -> "FinSeq":
        if not values:
            return cls(0, [] if exact else np.zeros(0), exact)
        lo, hi = min(values), max(values)
        if exact:
            return cls(lo, [values.get(n, 0) for n in range(lo, hi + 1)], True)
        arr = np.zeros(hi - lo + 1, dtype=np.complex128)
        for n, v in values.items():
            arr[n - lo] = complex(v)
        return cls(lo, arr, False)

    @classmethod
    def zeros(cls, lo: int, hi: int, exact: bool = True) -> "FinSeq":
        size = max(hi - lo + 1, 0)
        return cls(lo, [0] * size if exact else np.zeros(size), exact)

    @property
    def hi(self) -> int:
        return self.lo + len(self._vals) - 1

    @property
    def values(self):
        return self._vals

    def __len__(self) -> int:
        return len(self._vals)

    def __call__(self, n: int):
        i = n - self.lo
        if 0 <= i < len(self._vals):
            return self._vals[i]
        return _ZERO if self.exact else 0j

    def items(self):
        return ((self.lo + i, v) for i, v in enumerate(self._vals))

    def to_numeric(self) -> "FinSeq":
        if not self.exact:
            return self
        return FinSeq(self.lo, np.array([complex(v) for v in self._vals], dtype=np.complex128), False)

    def trim(self) -> "FinSeq":
        nz = [i for i, v in enumerate(self._vals) if v]
        if not nz:
            return FinSeq.zeros(0, -1, self.exact)
        a, b = nz[0], nz[-1] + 1
        vals = self._vals[a:b]
        return FinSeq(self.lo + a, vals, self.exact)

    def is_zero(self) -> bool:
        return not any(bool(v) for v in self._vals)

    def __eq__(self, other):
        if not isinstance(other, FinSeq):
            return NotImplemented
        a, b = self.trim(), other.trim()
        if len(a) != len(b) or (len(a) and a.lo != b.lo):
            return False
        if a.exact and b.exact:
            return a._vals == b._vals
        return bool(np.array_equal(a.to_numeric()._vals, b.to_numeric()._vals))

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "numeric"
        return f"FinSeq(lo={self.lo}, hi={self.hi}, {mode})"

    # admissibility predicates
    def zeros_on(self, a: int, b: int) -> bool:
        return all(not self(n) for n in range(a, b + 1))

    def supported_on_n0(self) -> bool:
        return all(not v for n, v in self.items() if n < 0)

    def admissible_rellich(self, m: int) -> bool:
        """Supported on N0 with ``u(0..2m-1) = 0``."""
        return self.supported_on_n0() and self.zeros_on(0, 2 * m - 1)

    def admissible_rellich_odd(self, m: int) -> bool:
        return self.supported_on_n0() and self.zeros_on(0, 2 * m)

    def to_json(self) -> dict:
        if self.exact:
            vals = [[n, format_fraction(v.re), format_fraction(v.im)] for n, v in self.items()]
        else:
            vals = [[n, float(v.real), float(v.imag)] for n, v in self.items()]
        return {"lo": self.lo, "hi": self.hi, "values": vals}

    @classmethod
    def from_json(cls, obj: dict) -> "FinSeq":
        lo, hi = int(obj["lo"]), int(obj["hi"])
        rows = obj.get("values", [])
        exact = all(isinstance(r[1], str) and isinstance(r[2], str) for r in rows)
        if exact:
            vals = [_ZERO] * max(hi - lo + 1, 0)
            for n, re, im in rows:
                vals[int(n) - lo] = GaussianRational(parse_fraction(re), parse_fraction(im))
            return cls(lo, vals, True)
        arr = np.zeros(max(hi - lo + 1, 0), dtype=np.complex128)
        for n, re, im in rows:
            arr[int(n) - lo] = complex(float(re), float(im))
        return cls(lo, arr, False)


def delta(n: int, exact: bool = True) -> FinSeq:
    return FinSeq(n, [1] if exact else np.ones(1), exact)


def stencil(op: str, m: int = 1) -> tuple[int, tuple[int, ...]]:
    """``(offset, coeffs)`` with ``(S u)(n) = sum_t coeffs[t] u(n - offset - t)``."""
    if op == "D":
        return 0, (1, -1)
    if m < 1:
        raise ValueError("m must be >= 1")
    lap = np.array([1], dtype=object)
    for _ in range(m):
        lap = np.convolve(lap, np.array([-1, 2, -1], dtype=object))
    if op == "lap":
        return -m, tuple(int(c) for c in lap)
    if op == "dlap":
        return -m, tuple(int(c) for c in np.convolve(lap, np.array([1, -1], dtype=object)))
    raise ValueError(f"unknown operator {op!r}")


def apply_stencil(u: FinSeq, offset: int, coeffs: Sequence[int]) -> FinSeq:
    lo = u.lo + offset
    if len(u) == 0:
        return FinSeq.zeros(lo, lo - 1, u.exact)
    if not u.exact:
        return FinSeq(lo, np.convolve(u.values, np.asarray(coeffs, dtype=np.float64)), False)
    vals = u.values
    out = [_ZERO] * (len(vals) + len(coeffs) - 1)
    for t, c in enumerate(coeffs):
        if c:
            for i, v in enumerate(vals):
                if v:
                    out[i + t] = out[i + t] + v * c
    return FinSeq(lo, out, True)


def backward_diff(u: FinSeq) -> FinSeq:
    return apply_stencil(u, *stencil("D"))


def laplacian(u: FinSeq) -> FinSeq:
    return apply_stencil(u, *stencil("lap", 1))


def laplacian_power(u: FinSeq, m: int) -> FinSeq:
    return apply_stencil(u, *stencil("lap", m))


def d_laplacian_power(u: FinSeq, m: int) -> FinSeq:
    return apply_stencil(u, *stencil("dlap", m))


def fourier(u: FinSeq) -> HalfFreqPoly:
    """Unnormalized transform ``sum u(n) e^{-inx}``; exact mode only."""
    if not u.exact:
        raise TypeError("fourier needs an exact-mode sequence")
    return HalfFreqPoly((-2 * n, v) for n, v in u.items())


def _abs2_sum(u: FinSeq, weight) -> Fraction:
    total = Fraction(0)
    for n, v in u.items():
        if v:
            total += v.abs2() * weight(n)
    return total


def _int_abs2(p: HalfFreqPoly, weight: HalfFreqPoly | None = None) -> PiValue:
    sq = mod_squared(p)
    if weight is not None:
        sq = multiply(sq, weight)
    val = integrate(sq)
    if not val.is_real():
        raise ArithmeticError("expected a real integral")
    return val.re


def _two_pi(x: Fraction) -> PiValue:
    return PiValue(0, 2 * x)


def _tilde(u: FinSeq, m: int) -> FinSeq:
    """``u(n) / n^(2m)`` off zero; requires ``u(0) = 0``."""
    if u(0):
        raise AdmissibilityError("negative powers need u(0) = 0")
    return FinSeq(u.lo, [v / Fraction(n) ** (2 * m) if n else _ZERO for n, v in u.items()], True)


def parseval_bridge(
    u: FinSeq,
    k: int | None = None,
    j: int | None = None,
    m: int | None = None,
    tilde: bool | None = None,
) -> list[EqualityReport]:
    """Exact Fourier-side restatements of lattice sums.

    With ``k``: the moment identities for every ``1 <= j <= k`` (or just ``j``)
    and the half-shifted difference identity.  With ``m``: the powers of the
    Laplacian, their symbol, and (if ``u(0) = 0`` or ``tilde=True``) the
    identities for ``u / n^(2m)``.
    """
    if not u.exact:
        raise TypeError("parseval_bridge needs an exact-mode sequence")
    g = fourier(u)
    out: list[EqualityReport] = []
    if k is not None:
        if k < 1:
            raise ValueError("k must be >= 1")
        js = range(1, k + 1) if j is None else [j]
        for jj in js:
            if not 1 <= jj <= k:
                raise ValueError(f"j must lie in [1, {k}]")
            p = 2 * (k - jj)
            lhs = _two_pi(_abs2_sum(u, lambda n: Fraction(n) ** p))
            out.append(EqualityReport(f"moment[k={k},j={jj}]", lhs, _int_abs2(derivative(g, k - jj))))
        du = backward_diff(u)
        lhs = _two_pi(_abs2_sum(du, lambda n: Fraction(2 * n - 1, 2) ** (2 * k)))
        rhs = _int_abs2(derivative(multiply(g, sin_half()), k)) * 4
        out.append(EqualityReport(f"diff_half[k={k}]", lhs, rhs))
    if m is not None:
        if m < 1:
            raise ValueError("m must be >= 1")
        lm = laplacian_power(u, m)
        out.append(
            EqualityReport(f"symbol[m={m}]", fourier(lm), multiply(sin_half_power(2 * m), g) * 4**m)
        )
        lhs = _two_pi(_abs2_sum(lm, lambda n: 1))
        out.append(EqualityReport(f"lap[m={m}]", lhs, _int_abs2(g, sin_half_power(4 * m)) * 16**m))
        dlm = d_laplacian_power(u, m)
        lhs = _two_pi(_abs2_sum(dlm, lambda n: 1))
        out.append(
            EqualityReport(f"dlap[m={m}]", lhs, _int_abs2(g, sin_half_power(4 * m + 2)) * (4 * 16**m))
        )
        if tilde is None:
            tilde = not u(0)
        if tilde:
            ut = _tilde(u, m)
            gt = fourier(ut)
            sign = -1 if m % 2 else 1
            out.append(EqualityReport(f"tilde_symbol[m={m}]", derivative(gt, 2 * m), g * sign))
            lhs = _two_pi(_abs2_sum(u, lambda n: Fraction(1, n ** (4 * m)) if n else 0))
            out.append(EqualityReport(f"tilde_moment[m={m}]", lhs, _int_abs2(gt)))
    return out


def side_condition(v: FinSeq, m: int, k: int) -> GaussianRational:
    """The double binomial sum that must vanish for the higher order bound to apply."""
    if not v.exact:
        raise TypeError("side_condition needs an exact-mode sequence")
    if m < 1 or not 1 <= k <= 2 * m:
        raise ValueError(f"need m >= 1 and 1 <= k <= 2m, got m={m}, k={k}")
    q = 2 * m - k
    total = _ZERO
    for jj in range(q + 1):
        c = binom(q, jj) * Fraction(-1, 2) ** jj
        for jp in range(jj + 1):
            idx = 2 * jp - jj
            if idx == 0:
                continue
            val = v(idx)
            if val:
                total = total + val * (c * binom(jj, jp) / Fraction(idx) ** k)
    return total


def side_condition_oracle(v: FinSeq, m: int, k: int) -> GaussianRational:
    """Same quantity as :func:`side_condition`, computed on the Fourier side.

    It is ``int d^q G(v / n^(2m)) sin^(2q)(x/2) dx`` rescaled by
    ``2*pi * 2^(-q) * (-i)^q`` with ``q = 2m - k``.
    """
    q = 2 * m - k
    g = derivative(fourier(_tilde(v, m)), q)
    val = integrate(multiply(g, sin_half_power(2 * q)))
    for part in (val.re, val.im):
        if part.rat != 0:
            raise ArithmeticError("expected a pure multiple of pi")
    z = GaussianRational(val.re.pi, val.im.pi) / GaussianRational(2 * Fraction(1, 2**q))
    return z / GaussianRational(0, -1) ** q


FORM_IDS = ("diff_half", "diff_pow", "lap", "dlap", "lap_pow", "dlap_half", "moment")


def _weights(lo: int, size: int, kind: str, power: int, exact: bool):
    if exact:
        if kind == "half":
            return [Fraction(2 * (lo + i) - 1, 2) ** power for i in range(size)]
        if kind == "int":
            return [Fraction(lo + i) ** power if power >= 0 else (Fraction(1, (lo + i) ** -power) if lo + i else Fraction(0)) for i in range(size)]
        return [Fraction(1)] * size
    n = np.arange(lo, lo + size, dtype=np.float64)
    if kind == "half":
        return (n - 0.5) ** power
    if kind == "int":
        if power >= 0:
            return n**power
        w = np.zeros(size)
        nz = n != 0
        w[nz] = 1.0 / n[nz] ** (-power)
        return w
    return np.ones(size)


def _weighted_energy(u: FinSeq, kind: str, power: int):
    if u.exact:
        w = _weights(u.lo, len(u), kind, power, True)
        return sum((v.abs2() * wi for v, wi in zip(u.values, w) if v), Fraction(0))
    vals = u.values
    w = _weights(u.lo, len(u), kind, power, False)
    return float(np.dot(vals.real**2 + vals.imag**2, w))


def form(u: FinSeq, form_id: str, k: int | None = None, m: int | None = None, p: int | None = None):
    """Value of a named quadratic form, summed over all of Z.

    ``diff_half``  sum |Du|^2 (n-1/2)^(2k)
    ``diff_pow``   sum |Du|^2 n^(2k)
    ``lap``        sum |Lap^m u|^2
    ``dlap``       sum |D Lap^m u|^2
    ``lap_pow``    sum |Lap^m u|^2 n^(2k)
    ``dlap_half``  sum |D Lap^m u|^2 (n-1/2)^(2k)
    ``moment``     sum |u|^2 n^p, with n = 0 left out when p < 0

    Exact sequences give a Fraction, numeric ones a float.
    """

    def need(name, val, lo):
        if val is None:
            raise ValueError(f"form {form_id!r} needs parameter {name}")
        if val < lo:
            raise ValueError(f"parameter {name}={val} must be >= {lo}")
        return val

    if form_id == "diff_half":
        return _weighted_energy(backward_diff(u), "half", 2 * need("k", k, 0))
    if form_id == "diff_pow":
        return _weighted_energy(backward_diff(u), "int", 2 * need("k", k, 0))
    if form_id == "lap":
        return _weighted_energy(laplacian_power(u, need("m", m, 1)), "one", 0)
    if form_id == "dlap":
        return _weighted_energy(d_laplacian_power(u, need("m", m, 1)), "one", 0)
    if form_id == "lap_pow":
        return _weighted_energy(laplacian_power(u, need("m", m, 1)), "int", 2 * need("k", k, 0))
    if form_id == "dlap_half":
        return _weighted_energy(d_laplacian_power(u, need("m", m, 1)), "half", 2 * need("k", k, 0))
    if form_id == "moment":
        if p is None:
            raise ValueError("form 'moment' needs parameter p")
        if p < 0 and u(0):
            raise AdmissibilityError("negative-power moment needs u(0) = 0")
        return _weighted_energy(u, "int", p)
    raise ValueError(f"unknown form id {form_id!r}")
