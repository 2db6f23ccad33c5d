"""Truncated Rayleigh quotients as banded generalized eigenproblems.

Each inequality becomes a pencil ``(A, B)`` on sequences supported in
``[z, N]``: ``u^T A u`` is the left-hand form (stencil terms reaching past
``N`` included, with ``u = 0`` there) and ``B`` is the diagonal weight of the
right-hand side.  The smallest eigenvalue is located by bisection on the
number of negative pivots of ``A - lam B``.

Forming ``A`` explicitly loses everything at large ``N``: the diagonal of
``A`` grows like the weight times the stencil norm while ``lam * b`` is tiny
in comparison, so the cancellation eats all digits.  The default method
therefore counts pivots in the congruent basis ``f = D^r u`` (unit
triangular change of variables, same inertia), where the left-hand form is
diagonal and nothing cancels.  The plain banded ``LDL^T`` is kept as
``method="banded"`` for cross-checks at small ``N``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from ._kernels import count_banded, count_difference
from .inequalities import InequalityId, spec_for
from .lattice import FinSeq, stencil

__all__ = [
    "BandedSymMatrix",
    "Pencil",
    "assemble",
    "trial_start",
    "inertia",
    "upper_bound",
    "min_eig",
    "min_eig_bracket",
    "SweepRow",
    "sweep",
    "extrapolate",
]

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class BandedSymMatrix:
    """Symmetric band matrix in lower storage: ``ab[d, i] = A[i + d, i]``."""

    ab: np.ndarray

    @property
    def dim(self) -> int:
        return self.ab.shape[1]

    @property
    def bandwidth(self) -> int:
        return self.ab.shape[0] - 1

    def diagonal(self) -> np.ndarray:
        return self.ab[0].copy()

    def abs_row_sums(self, scale: np.ndarray | None = None) -> np.ndarray:
        """Row sums of ``|S A S|`` with ``S = diag(scale)``."""
        s = np.ones(self.dim) if scale is None else scale
        out = np.abs(self.ab[0]) * s * s
        for d in range(1, self.bandwidth + 1):
            v = np.abs(self.ab[d, : self.dim - d]) * s[d:] * s[:-d]
            out[d:] += v
            out[:-d] += v
        return out

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.ab[0] * x
        for d in range(1, self.bandwidth + 1):
            band = self.ab[d, : self.dim - d]
            y[d:] += band * x[:-d]
            y[:-d] += band * x[d:]
        return y

    def quad_form(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=np.float64)
        total = float(np.dot(self.ab[0], x * x))
        for d in range(1, self.bandwidth + 1):
            total += 2.0 * float(np.dot(self.ab[d, : self.dim - d], x[:-d] * x[d:]))
        return total

    def to_dense(self) -> np.ndarray:
        n = self.dim
        a = np.zeros((n, n))
        for d in range(self.bandwidth + 1):
            idx = np.arange(n - d)
            a[idx + d, idx] = self.ab[d, : n - d]
            a[idx, idx + d] = self.ab[d, : n - d]
        return a


def _weight(kind: str, power: int, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.float64)
    if kind == "half":
        return (n - 0.5) ** power
    if kind == "int":
        return n**power
    return np.ones_like(n)


_LHS = {
    # form id -> (operator, weight kind)
    "diff_half": ("D", "half"),
    "diff_pow": ("D", "int"),
    "lap": ("lap", "one"),
    "dlap": ("dlap", "one"),
    "lap_pow": ("lap", "int"),
    "dlap_half": ("dlap", "half"),
}


def trial_start(ident: InequalityId) -> int:
    """First index of the trial window: one past the forced zeros."""
    return spec_for(ident).zero_upto + 1


@dataclass(frozen=True)
class Pencil:
    """Pencil ``(A, B)`` plus what the difference-basis counter needs.

    ``order`` is ``r`` with ``f = D^r u``; ``shift`` is ``s`` with the
    left-hand term at ``n`` equal to ``w(n) f(n + s)^2``.  ``stage_weights``
    hold ``w(j - s)`` for ``j = z..N`` and ``tail`` the form of the terms
    ``j = N+1..N+r`` in the state at ``N``.
    """

    ident: InequalityId | None
    z: int
    N: int
    a: BandedSymMatrix
    b_diag: np.ndarray
    order: int | None = None
    shift: int | None = None
    stage_weights: np.ndarray | None = None
    tail: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.a.dim

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.z, self.z + self.dim)

    def finseq(self, x) -> FinSeq:
        return FinSeq(self.z, np.asarray(x, dtype=np.complex128), False)

    def rayleigh(self, x) -> float:
        x = np.asarray(x, dtype=np.float64)
        return self.a.quad_form(x) / float(np.dot(self.b_diag, x * x))

    @classmethod
    def from_dense(cls, a, b_diag) -> "Pencil":
        """Generic pencil from a small dense symmetric ``a`` (banded method only)."""
        a = np.atleast_2d(np.asarray(a, dtype=np.float64))
        n = a.shape[0]
        nz = [abs(i - j) for i in range(n) for j in range(n) if a[i, j] != 0]
        bw = max(nz, default=0)
        ab = np.zeros((bw + 1, n))
        for d in range(bw + 1):
            ab[d, : n - d] = np.diagonal(a, -d)
        b = np.asarray(b_diag, dtype=np.float64)
        if np.any(b <= 0):
            raise ValueError("B must have a positive diagonal")
        return cls(None, 0, n - 1, BandedSymMatrix(ab), b)


def _tail_rows(r: int) -> np.ndarray:
    """Row ``j-1`` expresses ``D^r u(N + j)`` in the state at ``N`` when ``u = 0`` past ``N``.

    Uses ``u(N - i) = sum_t (-1)^t C(i, t) D^t u(N)``.
    """
    rows = np.zeros((r, r))
    for j in range(1, r + 1):
        for t in range(r + 1):
            off = j - t
            if off > 0:
                continue
            i = -off
            coef = (-1) ** t * comb(r, t)
            for q in range(min(i, r - 1) + 1):
                rows[j - 1, q] += coef * (-1) ** q * comb(i, q)
    return rows


def assemble(ident: InequalityId | str, N: int) -> Pencil:
    if isinstance(ident, str):
        ident = InequalityId.parse(ident)
    spec = spec_for(ident)
    z = trial_start(ident)
    if N < z:
        raise ValueError(f"N={N} leaves an empty trial window [{z}, {N}]")
    op, kind = _LHS[spec.lhs_form]
    m = spec.lhs_params.get("m", 1)
    power = 2 * spec.lhs_params.get("k", 0)
    off, coeffs = stencil(op, m)
    c = np.asarray(coeffs, dtype=np.float64)
    L = len(c)
    idx = np.arange(z, N + 1)
    dim = len(idx)
    # (S u)(n) = sum_t c_t u(n - off - t); the pair u(i + d), u(i) meets in the
    # term n = i + off + t + d with taps t and t + d
    ab = np.zeros((L, dim))
    for d in range(L):
        for t in range(L - d):
            w = _weight(kind, power, idx + off + t + d)
            ab[d, : dim - d] += (w * (c[t] * c[t + d]))[: dim - d]
    # single-term bounds: B is the bare weight and the constant is compared
    # against lambda_min; several terms: B is the full right-hand side
    b = np.zeros(dim)
    for _, coeff, p in spec.rhs:
        b += (1.0 if spec.single_term else float(coeff)) * idx.astype(np.float64) ** p
    r = {"D": 1, "lap": 2 * m, "dlap": 2 * m + 1}[op]
    s = 0 if op == "D" else m
    stage = _weight(kind, power, idx - s)
    tail_w = _weight(kind, power, np.arange(N + 1, N + r + 1) - s)
    rows = _tail_rows(r)
    tail = (rows.T * tail_w) @ rows
    return Pencil(ident, z, N, BandedSymMatrix(ab), b, r, s, stage, tail)


def inertia(p: Pencil, lam: float, method: str = "difference") -> int:
    """Number of eigenvalues below ``lam``; -1 if the factorization breaks down."""
    if method == "difference":
        if p.order is None:
            raise ValueError("pencil has no difference-basis data; use method='banded'")
        return int(count_difference(p.tail, p.stage_weights, p.b_diag, float(lam)))
    if method == "banded":
        return int(count_banded(p.a.ab, p.b_diag, float(lam)))
    raise ValueError(f"unknown method {method!r}")


def _count(p: Pencil, lam: float, tol: float, method: str) -> tuple[int, float]:
    step = tol / 8 * max(1.0, abs(lam))
    for _ in range(16):
        c = inertia(p, lam, method)
        if c >= 0:
            return c, lam
        lam += step
    raise ArithmeticError(f"factorization keeps breaking down near {lam}")


def upper_bound(p: Pencil) -> float:
    """``min`` of a Gershgorin bound for ``B^-1/2 A B^-1/2`` and the best ``a_ii / b_i``."""
    s = 1.0 / np.sqrt(p.b_diag)
    gersh = float(np.max(p.a.abs_row_sums(s)))
    diag = float(np.min(p.a.diagonal() / p.b_diag))
    return min(gersh, diag)


def min_eig_bracket(p: Pencil, tol: float = DEFAULT_TOL, method: str = "difference") -> tuple[float, float]:
    """``(lo, hi)`` with no eigenvalue below ``lo``, at least one below ``hi``.

    Stops once ``hi - lo <= tol * max(1, hi)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo = 0.0
    hi = upper_bound(p)
    c, hi = _count(p, hi, tol, method)
    while c < 1:
        hi *= 2.0
        c, hi = _count(p, hi, tol, method)
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        c, mid = _count(p, mid, tol, method)
        if c == 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def min_eig(p: Pencil, tol: float = DEFAULT_TOL, method: str = "difference") -> float:
    lo, hi = min_eig_bracket(p, tol, method)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SweepRow:
    N: int
    lambda_min: float
    paper_constant: float
    gap: float

    def to_json(self) -> dict:
        return {"N": self.N, "lambda_min": self.lambda_min, "paper_constant": self.paper_constant, "gap": self.gap}


def sweep(
    ident: InequalityId | str,
    N_list,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
    method: str = "difference",
) -> list[SweepRow]:
    """``lambda_min`` on each window, next to the constant the inequality promises.

    For bounds with several right-hand terms the pencil's ``B`` is their sum,
    so the promised floor is 1.
    """
    if isinstance(ident, str):
        ident = InequalityId.parse(ident)
    Ns = list(N_list)
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N_list must be strictly increasing")
    const = float(spec_for(ident).constant)

    def cell(N):
        return min_eig(assemble(ident, N), tol, method)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            lams = list(pool.map(cell, Ns))
    else:
        lams = [cell(N) for N in Ns]
    return [SweepRow(N, lam, const, lam - const) for N, lam in zip(Ns, lams)]


def extrapolate(rows: list[SweepRow]) -> dict:
    """Least-squares fit ``lambda_min ~ c0 + c1 / log N``; ``c0`` is only an estimate."""
    if len(rows) < 2:
        raise ValueError("need at least two sweep rows")
    x = np.array([1.0 / math.log(r.N) for r in rows])
    y = np.array([r.lambda_min for r in rows])
    X = np.column_stack([np.ones_like(x), x])
    (c0, c1), *_ = np.linalg.lstsq(X, y, rcond=None)
    return {"model": "c0 + c1/log(N)", "estimate": float(c0), "c1": float(c1), "label": "estimate"}
