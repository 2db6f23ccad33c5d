"""Exact constants of the weighted Hardy/Rellich inequalities.

All values are :class:`fractions.Fraction`; nothing here ever rounds.

Naming follows the quantities they compute:

* ``xi(k, i)``        -- the signed double binomial sum that shows up when
  ``d^k (u sin(x/2))`` is expanded with the Leibniz rule and integrated;
* ``alpha``/``beta``  -- coefficients of ``int |d^i u|^2`` and
  ``int |d^i u|^2 sin^2(x/2)`` in that expansion (``raw`` variant built from
  ``xi``, ``simplified`` variant from the closed binomial form);
* ``gamma(k, i)``     -- ``4 alpha(k, k-i) + beta(k, k-i+1) / 4``, the
  coefficient of ``sum |u|^2 n^(2k-2i)`` in the improved weighted Hardy bound;
* ``gamma_printed``   -- the closed form for gamma as it appears in print,
  kept only to demonstrate that it disagrees with ``gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "binom",
    "xi",
    "alpha",
    "beta",
    "gamma",
    "gamma_printed",
    "ConstantTable",
    "constant_table",
    "IdentityCheck",
    "IdentityReport",
    "verify_identity_61",
    "verify_binomial_67_68",
    "erratum_report",
    "rellich_weight_c",
    "higher_order_const",
    "product_const",
    "table_rows",
]


@lru_cache(maxsize=1 << 16)
def binom(n: int, r: int) -> int:
    """Binomial coefficient with ``binom(n, r) = 0`` outside ``0 <= r <= n``."""
    if n < 0:
        raise ValueError(f"binom: n must be non-negative, got {n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def _check_index(k: int, i: int, lo: int = 0) -> None:
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    if not lo <= i <= k:
        raise ValueError(f"index i={i} out of range [{lo}, {k}]")


@lru_cache(maxsize=None)
def xi(k: int, i: int) -> Fraction:
    _check_index(k, i)
    total = 0
    for m in range(min(i, k - i) + 1):
        c_im = binom(k + 1, i - m)
        if not c_im:
            continue
        for n in range(1, k - i + 1):
            c = binom(n - 1, m)
            if not c:
                # binom(n-1, m) vanishes for m > n-1, which also keeps 2^(n-m) integral
                continue
            term = c_im * binom(k, i + n) * c << (n - m)
            total += -term if n & 1 else term
    return Fraction(total)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


@lru_cache(maxsize=None)
def _alpha_raw(k: int, i: int) -> Fraction:
    s = _sign(k - i)
    c = binom(k, i)
    num = Fraction(binom(2 * k, 2 * i), 2) - Fraction(s * c * c, 2) - s * xi(k, i) / 2
    return num / 4 ** (k - i)


@lru_cache(maxsize=None)
def _beta_raw(k: int, i: int) -> Fraction:
    s = _sign(k - i)
    c = binom(k, i)
    return (s * xi(k, i) + s * c * c) / 4 ** (k - i)


def alpha(k: int, i: int, variant: str = "raw") -> Fraction:
    _check_index(k, i)
    if variant == "raw":
        return _alpha_raw(k, i)
    if variant == "simplified":
        return Fraction(binom(2 * k, 2 * i) - binom(k, i), 2 * 4 ** (k - i))
    raise ValueError(f"unknown variant {variant!r}")


def beta(k: int, i: int, variant: str = "raw") -> Fraction:
    _check_index(k, i)
    if variant == "raw":
        return _beta_raw(k, i)
    if variant == "simplified":
        return Fraction(binom(k, i), 4 ** (k - i))
    raise ValueError(f"unknown variant {variant!r}")


def gamma(k: int, i: int, variant: str = "raw") -> Fraction:
    """Coefficient of ``sum |u|^2 n^(2k-2i)``: ``4 alpha(k, k-i) + beta(k, k-i+1)/4``."""
    _check_index(k, i, lo=1)
    return 4 * alpha(k, k - i, variant) + beta(k, k - i + 1, variant) / 4


def gamma_printed(k: int, i: int) -> Fraction:
    """The closed form ``(2 C(2k,2i) - 2 C(k,i) + C(k,i-1)/4) / 2^(2(k-i))`` as printed."""
    _check_index(k, i, lo=1)
    num = 2 * binom(2 * k, 2 * i) - 2 * binom(k, i) + Fraction(binom(k, i - 1), 4)
    return num / 4 ** (k - i)


@dataclass(frozen=True)
class ConstantTable:
    k: int
    xi: tuple[Fraction, ...]
    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    gamma: tuple[Fraction, ...]  # gamma[0] is gamma(k, 1)

    def gamma_at(self, i: int) -> Fraction:
        return self.gamma[i - 1]


@lru_cache(maxsize=256)
def constant_table(k: int) -> ConstantTable:
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return ConstantTable(
        k=k,
        xi=tuple(xi(k, i) for i in range(k + 1)),
        alpha=tuple(alpha(k, i) for i in range(k + 1)),
        beta=tuple(beta(k, i) for i in range(k + 1)),
        gamma=tuple(gamma(k, i) for i in range(1, k + 1)),
    )


@dataclass(frozen=True)
class IdentityCheck:
    i: int
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class IdentityReport:
    k: int
    checks: tuple[IdentityCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def counterexamples(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]


def verify_identity_61(k: int) -> IdentityReport:
    """Check ``xi(k, i) == (-1)^(k-i) C(k,i) - C(k,i)^2`` for every ``0 <= i <= k``."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    checks = []
    for i in range(k + 1):
        c = binom(k, i)
        checks.append(IdentityCheck(i, xi(k, i), Fraction(_sign(k - i) * c - c * c)))
    return IdentityReport(k, tuple(checks))


def verify_binomial_67_68(k: int, n: int) -> bool:
    """Both even-part binomial sums at ``n + 1`` and ``n - 1``, exactly."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    ok = True
    for sgn in (1, -1):
        lhs = sum(binom(2 * k, 2 * i) * (n + sgn) ** (2 * i) for i in range(k + 1))
        rhs2 = (n + 2 * sgn) ** (2 * k) + n ** (2 * k)
        ok = ok and 2 * lhs == rhs2
    return ok


def erratum_report(cases=((1, 1), (2, 1), (2, 2))) -> dict:
    """Compare ``gamma`` against the printed closed form on a few indices."""
    rows = []
    for k, i in cases:
        g, gp = gamma(k, i), gamma_printed(k, i)
        rows.append({"k": k, "i": i, "gamma": g, "gamma_printed": gp, "agree": g == gp})
    return {
        "rows": rows,
        "printed_formula_consistent": all(r["agree"] for r in rows),
    }


def rellich_weight_c(k) -> Fraction:
    """``C(k) = k (k-1) (k-3/2)^2``."""
    k = Fraction(k)
    return k * (k - 1) * (k - Fraction(3, 2)) ** 2


def higher_order_const(m: int, variant: str = "even") -> Fraction:
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if variant == "even":
        return Fraction(2) ** (2 * m - 3) * math.factorial(2 * m - 1)
    if variant == "odd":
        return Fraction(2) ** (2 * m - 2) * math.factorial(2 * m)
    raise ValueError(f"unknown variant {variant!r}")


def product_const(m: int, k: int, variant: str = "even") -> Fraction:
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if variant == "even":
        if k < 2 * m:
            raise ValueError(f"even variant needs k >= 2m, got k={k}, m={m}")
        return math.prod((rellich_weight_c(k - 2 * i) for i in range(m)), start=Fraction(1))
    if variant == "odd":
        if k < 2 * m + 1:
            raise ValueError(f"odd variant needs k >= 2m+1, got k={k}, m={m}")
        lead = Fraction((2 * k - 1) ** 2, 4)
        return lead * math.prod((rellich_weight_c(k - 1 - 2 * i) for i in range(m)), start=Fraction(1))
    raise ValueError(f"unknown variant {variant!r}")


def table_rows(k: int) -> list[dict]:
    """One row per ``0 <= i <= k``; gamma columns are ``None`` at ``i = 0``."""
    t = constant_table(k)
    rows = []
    for i in range(k + 1):
        rows.append(
            {
                "k": k,
                "i": i,
                "xi": t.xi[i],
                "alpha": t.alpha[i],
                "beta": t.beta[i],
                "gamma": t.gamma_at(i) if i >= 1 else None,
                "gamma_printed": gamma_printed(k, i) if i >= 1 else None,
            }
        )
    return rows
