"""Left side, right side and margin of each Hardy-type inequality on a sequence.

Every inequality is "energy of a difference operator >= sum of weighted
moments".  :func:`spec_for` turns an :class:`InequalityId` into that data
(form ids for the lattice module plus exact coefficients), and :func:`check`
evaluates it on one sequence, exactly or in floating point.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import combinatorics as comb
from .exact import GaussianRational
from .lattice import FinSeq, form

__all__ = [
    "INEQUALITY_NAMES",
    "InequalityId",
    "InequalitySpec",
    "spec_for",
    "CheckReport",
    "check",
    "SuiteReport",
    "random_sequence",
    "random_suite",
    "sharpness_family",
    "SharpnessRow",
    "sharpness_sweep",
    "default_beta_grid",
    "DEFAULT_N_GRID",
    "NUMERIC_RTOL",
]

INEQUALITY_NAMES = (
    "hardy_11",
    "thm21",
    "cor22",
    "cor23",
    "cor24",
    "thm25_even",
    "thm25_odd",
    "cor26",
    "thm28_even",
    "thm28_odd",
)

_NEEDS_K = {"thm21", "cor22", "cor23", "cor24", "thm28_even", "thm28_odd"}
_NEEDS_M = {"thm25_even", "thm25_odd", "thm28_even", "thm28_odd"}

NUMERIC_RTOL = 1e-9


@dataclass(frozen=True)
class InequalityId:
    name: str
    k: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.name not in INEQUALITY_NAMES:
            raise ValueError(f"unknown inequality {self.name!r}")
        k, m = self.k, self.m
        if self.name in _NEEDS_K:
            if k is None or k < 1:
                raise ValueError(f"{self.name} needs k >= 1")
        elif k is not None:
            raise ValueError(f"{self.name} takes no k")
        if self.name in _NEEDS_M:
            if m is None or m < 1:
                raise ValueError(f"{self.name} needs m >= 1")
        elif m is not None and not (self.name == "cor26" and m == 1):
            raise ValueError(f"{self.name} takes no m")
        if self.name == "thm28_even" and k < 2 * m:
            raise ValueError(f"thm28_even needs k >= 2m, got k={k}, m={m}")
        if self.name == "thm28_odd" and k < 2 * m + 1:
            raise ValueError(f"thm28_odd needs k >= 2m+1, got k={k}, m={m}")

    @classmethod
    def parse(cls, text: str) -> "InequalityId":
        """``"thm28_even:m=2,k=4"`` style."""
        name, _, rest = text.partition(":")
        kw = {}
        for part in filter(None, rest.split(",")):
            key, _, val = part.partition("=")
            if key.strip() not in ("k", "m"):
                raise ValueError(f"unknown parameter {key!r}")
            kw[key.strip()] = int(val)
        return cls(name.strip(), **kw)

    def label(self) -> str:
        params = [f"{p}={getattr(self, p)}" for p in ("k", "m") if getattr(self, p) is not None]
        return self.name + (":" + ",".join(params) if params else "")

    def to_json(self) -> dict:
        return {"name": self.name, "k": self.k, "m": self.m}


@dataclass(frozen=True)
class InequalitySpec:
    """Data of one inequality: ``lhs_form >= sum coeff * moment(power)``.

    ``zero_upto`` is the last index that must vanish (``u(0..zero_upto) = 0``);
    ``half_line`` says whether the sequence must live on N0.
    """

    ident: InequalityId
    lhs_form: str
    lhs_params: dict
    rhs: tuple[tuple[str, Fraction, int], ...]
    half_line: bool
    zero_upto: int

    @property
    def single_term(self) -> bool:
        return len(self.rhs) == 1

    @property
    def constant(self) -> Fraction:
        """The constant in front of the single moment; 1 for multi-term bounds."""
        return self.rhs[0][1] if self.single_term else Fraction(1)


def _gamma_terms(k: int) -> list[tuple[str, Fraction, int]]:
    terms = [(f"n^{2 * k - 2 * i}", comb.gamma(k, i), 2 * k - 2 * i) for i in range(1, k + 1)]
    terms.append(("n^-2", Fraction(1, 2 ** (2 * k + 4)), -2))
    return terms


def spec_for(ident: InequalityId) -> InequalitySpec:
    n, k, m = ident.name, ident.k, ident.m
    sharp = Fraction((2 * k - 1) ** 2, 4) if k else None
    if n == "hardy_11":
        return InequalitySpec(ident, "diff_pow", {"k": 0}, (("n^-2", Fraction(1, 4), -2),), True, 0)
    if n == "thm21":
        return InequalitySpec(ident, "diff_half", {"k": k}, tuple(_gamma_terms(k)), False, 0)
    if n == "cor22":
        return InequalitySpec(ident, "diff_half", {"k": k}, ((f"n^{2 * k - 2}", sharp, 2 * k - 2),), False, 0)
    if n == "cor23":
        return InequalitySpec(ident, "diff_pow", {"k": k}, tuple(_gamma_terms(k)), True, 0)
    if n == "cor24":
        return InequalitySpec(ident, "diff_pow", {"k": k}, ((f"n^{2 * k - 2}", sharp, 2 * k - 2),), True, 0)
    if n in ("thm25_even", "cor26"):
        m = m or 1
        c = comb.higher_order_const(m, "even")
        return InequalitySpec(ident, "lap", {"m": m}, ((f"n^-{4 * m}", c, -4 * m),), True, 2 * m - 1)
    if n == "thm25_odd":
        c = comb.higher_order_const(m, "odd")
        return InequalitySpec(ident, "dlap", {"m": m}, ((f"n^-{4 * m + 2}", c, -4 * m - 2),), True, 2 * m)
    if n == "thm28_even":
        c = comb.product_const(m, k, "even")
        p = 2 * k - 4 * m
        return InequalitySpec(ident, "lap_pow", {"m": m, "k": k}, ((f"n^{p}", c, p),), False, 0)
    if n == "thm28_odd":
        c = comb.product_const(m, k, "odd")
        p = 2 * k - 4 * m - 2
        return InequalitySpec(ident, "dlap_half", {"m": m, "k": k}, ((f"n^{p}", c, p),), False, 0)
    raise AssertionError(n)


@dataclass(frozen=True)
class CheckReport:
    ident: InequalityId
    exact: bool
    admissible: bool
    detail: str
    lhs: Fraction | float | None = None
    rhs_terms: tuple = ()
    rhs: Fraction | float | None = None
    margin: Fraction | float | None = None

    @property
    def passed(self) -> bool:
        if not self.admissible:
            return False
        if self.exact:
            return self.margin >= 0
        return self.margin >= -NUMERIC_RTOL * max(1.0, abs(self.rhs))


def _admissibility(spec: InequalitySpec, u: FinSeq) -> str:
    if spec.half_line and not u.supported_on_n0():
        return "sequence must vanish on negative integers"
    if not u.zeros_on(0, spec.zero_upto):
        if spec.zero_upto == 0:
            return "u(0) must vanish"
        return f"u(0..{spec.zero_upto}) must vanish"
    return ""


def check(ident: InequalityId | str, u: FinSeq) -> CheckReport:
    if isinstance(ident, str):
        ident = InequalityId.parse(ident)
    spec = spec_for(ident)
    why = _admissibility(spec, u)
    if why:
        return CheckReport(ident, u.exact, False, why)
    lhs = form(u, spec.lhs_form, **spec.lhs_params)
    terms = []
    rhs = Fraction(0) if u.exact else 0.0
    for label, coeff, power in spec.rhs:
        mom = form(u, "moment", p=power)
        terms.append((label, coeff, mom))
        rhs = rhs + (coeff * mom if u.exact else float(coeff) * mom)
    return CheckReport(ident, u.exact, True, "", lhs, tuple(terms), rhs, lhs - rhs)


def _draw_rational(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _critical_exponent(ident: InequalityId) -> float:
    """Power ``beta`` at which ``n^beta`` makes both sides diverge together."""
    k, m = ident.k or 0, ident.m or 1
    name = ident.name
    if name == "hardy_11":
        return 0.5
    if name in ("thm21", "cor22", "cor23", "cor24"):
        return (1 - 2 * k) / 2
    if name in ("thm25_even", "cor26"):
        return 2 * m - 0.5
    if name == "thm25_odd":
        return 2 * m + 0.5
    if name == "thm28_even":
        return 2 * m - k - 0.5
    return 2 * m + 1 - k - 0.5


def random_sequence(
    ident: InequalityId, rng: random.Random, window: tuple[int, int] | None = None, height: int = 20
) -> FinSeq:
    """Exact random sequence meeting the zero and support conditions of ``ident``.

    The support is a random sub-window of ``window`` containing at least one
    free index.  Values are either rational noise or a rounded power profile
    ``|n|^beta`` with ``beta`` near the critical exponent, which is where the
    margins get small.  Required zeros are written in rather than rejected.
    """
    spec = spec_for(ident)
    lo, hi = window if window is not None else ((0, 30) if spec.half_line else (-20, 20))
    if spec.half_line:
        lo = max(lo, 0)

    def forced(n):
        return 0 <= n <= spec.zero_upto

    free = [n for n in range(lo, hi + 1) if not forced(n)]
    if not free:
        raise ValueError(f"window [{lo}, {hi}] leaves no free index for {ident.label()}")
    pivot = rng.choice(free)
    a = rng.randint(lo, pivot)
    b = rng.randint(pivot, hi)
    profile = rng.random() < 0.5
    beta = _critical_exponent(ident) + rng.uniform(-1.0, 0.5)
    vals = []
    for n in range(a, b + 1):
        if forced(n):
            vals.append(GaussianRational())
        elif profile:
            x = abs(n) ** beta * (1 + 0.05 * rng.uniform(-1, 1))
            vals.append(GaussianRational(Fraction(round(x * 10**9), 10**9)))
        else:
            vals.append(GaussianRational(_draw_rational(rng, height), _draw_rational(rng, height)))
    return FinSeq(a, vals, True)


@dataclass
class SuiteReport:
    ident: InequalityId
    trials: int
    seed: int
    min_margin: float = math.inf
    min_scaled_margin: float = math.inf
    exact_checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "id": self.ident.label(),
            "trials": self.trials,
            "seed": self.seed,
            "min_margin": self.min_margin,
            "min_scaled_margin": self.min_scaled_margin,
            "exact_checks": self.exact_checks,
            "failures": self.failures,
            "passed": self.passed,
        }


EXACT_EVERY = 50


def _one_trial(ident, seed, trial, window):
    rng = random.Random(f"{seed}:{trial}")
    u = random_sequence(ident, rng, window)
    num = check(ident, u.to_numeric())
    exact = check(ident, u) if trial % EXACT_EVERY == 0 else None
    return trial, num, exact


def random_suite(
    ident: InequalityId | str,
    trials: int,
    seed: int,
    window: tuple[int, int] | None = None,
    threads: int = 1,
) -> SuiteReport:
    """Numeric margins on ``trials`` random admissible sequences.

    Trial ``t`` uses its own generator seeded from ``(seed, t)``, so the
    report does not depend on ``threads``.  Every 50th trial is redone exactly.
    """
    if isinstance(ident, str):
        ident = InequalityId.parse(ident)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rep = SuiteReport(ident, trials, seed)
    jobs = range(trials)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda t: _one_trial(ident, seed, t, window), jobs))
    else:
        results = [_one_trial(ident, seed, t, window) for t in jobs]
    for trial, num, exact in results:
        scaled = num.margin / max(1.0, abs(num.rhs))
        rep.min_margin = min(rep.min_margin, num.margin)
        rep.min_scaled_margin = min(rep.min_scaled_margin, scaled)
        if not num.passed:
            rep.failures.append({"trial": trial, "mode": "numeric", "margin": num.margin})
        if exact is not None:
            rep.exact_checks += 1
            if not exact.passed:
                rep.failures.append({"trial": trial, "mode": "exact", "margin": str(exact.margin)})
    return rep


def sharpness_family(beta: float, N: int) -> FinSeq:
    """``n^beta`` on ``[1, N]``, then a straight ramp down to zero at ``2N``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    n = np.arange(1, 2 * N + 1, dtype=np.float64)
    vals = np.where(n <= N, n**beta, -(float(N) ** (beta - 1)) * n + 2 * float(N) ** beta)
    return FinSeq(1, vals.astype(np.complex128), False)


@dataclass(frozen=True)
class SharpnessRow:
    beta: float
    N: int
    lhs: float
    rhs: float
    quotient: float
    gap: float

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("beta", "N", "lhs", "rhs", "quotient", "gap")}


DEFAULT_N_GRID = (10**2, 10**3, 10**4, 10**5, 10**6)


def default_beta_grid(k: int, depth: int = 12) -> list[float]:
    """``(1-2k)/2 - 2^-j`` for ``j = 1..depth``."""
    return [(1 - 2 * k) / 2 - 2.0**-j for j in range(1, depth + 1)]


def sharpness_sweep(name: str, k: int, beta_grid=None, N_grid=None) -> list[SharpnessRow]:
    """Rayleigh quotients of the test family for ``cor22`` or ``cor24``."""
    if name not in ("cor22", "cor24"):
        raise ValueError("sharpness sweeps exist for cor22 and cor24 only")
    spec = spec_for(InequalityId(name, k=k))
    betas = default_beta_grid(k) if beta_grid is None else list(beta_grid)
    Ns = DEFAULT_N_GRID if N_grid is None else list(N_grid)
    crit = (1 - 2 * k) / 2
    bad = [b for b in betas if not b < crit]
    if bad:
        raise ValueError(f"beta must stay below {crit} for k={k}; got {bad}")
    target = float(spec.constant)
    rows = []
    for beta in betas:
        for N in Ns:
            u = sharpness_family(beta, N)
            lhs = form(u, spec.lhs_form, **spec.lhs_params)
            rhs = form(u, "moment", p=2 * k - 2)
            q = lhs / rhs
            rows.append(SharpnessRow(beta, N, lhs, rhs, q, q - target))
    return rows
