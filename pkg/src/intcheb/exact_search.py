"""Exact integer Chebyshev polynomials at small degree.

The search runs over integer coefficient vectors from the top degree down.
At each node two linear programs bound the next coefficient under
|P(x_j)| <= B at sample nodes x_j of E; these are necessary conditions for
||P||_E <= B, so no admissible polynomial is ever cut.  Leaves get the exact
sup norm from the real critical points.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from fpylll import LLL, IntegerMatrix
from scipy.optimize import linprog

from .errors import BudgetTooSmall, DomainError, LengthMismatch, SingularNodes
from .polycore import (
    FACTORS_QUARTER_INTERVAL,
    FACTORS_UNIT_INTERVAL,
    FactorWeight,
    IntervalUnion,
    IntPoly,
    sup_norm,
)

DEFAULT_MAX_DEGREE = 10
TIE_RTOL = 1e-9
_LP_SLACK = 1e-7


# ---------------------------------------------------------------------------
# Records
# ---------------------------------------------------------------------------


class FactorMultiplicity(NamedTuple):
    name: str
    factor: IntPoly
    multiplicity: int
    ratio: float


@dataclass(frozen=True)
class FactorizationRecord:
    """Optimal polynomial of a degree class with its known-factor structure.

    ``degree`` is the searched class n; ``polynomial`` may have lower degree.
    """

    degree: int
    polynomial: IntPoly
    norm: float
    factors: tuple[FactorMultiplicity, ...]
    residual: IntPoly
    domain: IntervalUnion
    ties: tuple[IntPoly, ...] = ()
    diagnostics: dict = field(default_factory=dict)

    def reconstruct(self) -> IntPoly:
        out = self.residual
        for f in self.factors:
            out = out * f.factor**f.multiplicity
        return out

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "domain": self.domain.to_text(),
            "polynomial": list(self.polynomial.coeffs),
            "norm": self.norm,
            "factors": [
                {"name": f.name, "factor": list(f.factor.coeffs), "multiplicity": f.multiplicity, "ratio": f.ratio}
                for f in self.factors
            ],
            "residual": list(self.residual.coeffs),
            "ties": [list(t.coeffs) for t in self.ties],
            "diagnostics": self.diagnostics,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def default_factor_table(E: IntervalUnion) -> list[tuple[str, IntPoly]]:
    """Known factors for [0,1/4] or [0,1]; the [0,1] list otherwise."""
    if E == IntervalUnion.single(0.0, 0.25):
        return [(name, poly) for name, poly, _ in FACTORS_QUARTER_INTERVAL]
    return list(FACTORS_UNIT_INTERVAL)


def factor_analyze(
    p: IntPoly, known_factors: Sequence[tuple[str, IntPoly]] | None = None, n: int | None = None
) -> tuple[tuple[FactorMultiplicity, ...], IntPoly]:
    """Maximal multiplicities of known factors by exact division, and the residual."""
    if p.is_zero():
        raise DomainError("the zero polynomial has no factorization")
    if known_factors is None:
        known_factors = FACTORS_UNIT_INTERVAL
    n = p.degree() if n is None else n
    rest = p
    rows = []
    for name, f in known_factors:
        k = 0
        while True:
            q = rest.exact_quotient(f)
            if q is None:
                break
            rest, k = q, k + 1
        rows.append(FactorMultiplicity(name, f, k, k / n if n else math.nan))
    return tuple(rows), rest


# ---------------------------------------------------------------------------
# Symmetry between [0,1] and [0,1/4]
# ---------------------------------------------------------------------------


class SymmetryReduction(NamedTuple):
    q: IntPoly
    parity: str  # "even": p = q(x(1-x));  "odd": p = (1-2x) q(x(1-x))


_U = IntPoly((0, 1, -1))  # x(1-x)
_ONE_MINUS_2X = IntPoly((1, -2))


def _in_u(p: IntPoly) -> IntPoly | None:
    """q with p(x) = q(x(1-x)), or None."""
    rest = p
    coeffs: dict[int, int] = {}
    while not rest.is_zero():
        d = rest.degree()
        if d % 2:
            return None
        k = d // 2
        c = rest.leading * (-1) ** k  # leading coefficient of u^k is (-1)^k
        coeffs[k] = c
        rest = rest - IntPoly((c,)) * _U**k
    top = max(coeffs, default=-1)
    return IntPoly(tuple(coeffs.get(i, 0) for i in range(top + 1)))


def symmetry_reduce(p: IntPoly) -> SymmetryReduction | None:
    """The [0,1/4] image of p, or None when p has neither symmetric form."""
    if p.is_zero():
        return SymmetryReduction(IntPoly(()), "even")
    q = _in_u(p)
    if q is not None:
        return SymmetryReduction(q, "even")
    h = p.exact_quotient(_ONE_MINUS_2X)
    if h is not None:
        q = _in_u(h)
        if q is not None:
            return SymmetryReduction(q, "odd")
    return None


# ---------------------------------------------------------------------------
# Coefficient boxes
# ---------------------------------------------------------------------------


def _shifted_chebyshev(lo: Fraction, hi: Fraction, n: int) -> list[list[Fraction]]:
    """Monomial coefficients (ascending) of T_k((2x - lo - hi)/(hi - lo)), k = 0..n."""
    s = 2 / (hi - lo)
    u = [-(lo + hi) / (hi - lo), s]
    T = [[Fraction(1)], u[:]]

    def mul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    while len(T) <= n:
        a = [2 * c for c in mul(u, T[-1])]
        b = T[-2] + [Fraction(0)] * (len(a) - len(T[-2]))
        T.append([x - y for x, y in zip(a, b)])
    return T[: n + 1]


def chebyshev_box(E: IntervalUnion, n: int, budget: float) -> list[int]:
    """Bounds |c_i| <= box[i] for every P with ||P||_hull(E) <= budget.

    Chebyshev coefficients of P on the hull satisfy |d_0| <= B and |d_k| <= 2B;
    the exact basis change carries these to the monomial coefficients.
    """
    lo, hi = Fraction(E.lo), Fraction(E.hi)
    if not hi > lo:
        raise DomainError("the hull of E must have positive length")
    T = _shifted_chebyshev(lo, hi, n)
    B = Fraction(budget)
    out = []
    for i in range(n + 1):
        tot = sum(abs(T[k][i]) * (B if k == 0 else 2 * B) for k in range(i, n + 1) if i < len(T[k]))
        out.append(int(math.floor(tot)))
    return out


def sample_nodes(E: IntervalUnion, n: int) -> np.ndarray:
    """Chebyshev extrema on each interval, 4n + 32 per interval."""
    m = 4 * n + 32
    t = np.cos(np.pi * np.arange(m + 1) / m)
    pts = [0.5 * (lo + hi) + 0.5 * (hi - lo) * t for lo, hi in E.intervals]
    return np.unique(np.concatenate(pts))


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------


def _canonical(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    for v in reversed(c):
        if v:
            return tuple(c) if v > 0 else tuple(-x for x in c)
    return tuple(c)


def _candidate_budget(E: IntervalUnion, n: int) -> float:
    """Smallest norm among 1 and products of table factors of total degree <= n."""
    best = sup_norm(IntPoly((1,)), E)
    table = [f for _, f in default_factor_table(E)]
    degs = [f.degree() for f in table]

    def rec(i, deg, poly):
        nonlocal best
        if i == len(table):
            if deg:
                best = min(best, sup_norm(poly, E))
            return
        k, p = 0, poly
        while deg + k * degs[i] <= n:
            rec(i + 1, deg + k * degs[i], p)
            k += 1
            p = p * table[i]

    rec(0, 0, IntPoly((1,)))
    return best


class _Search:
    def __init__(self, E: IntervalUnion, n: int, budget: float, box: list[int]):
        self.E, self.n = E, n
        self.x = sample_nodes(E, n)
        self.V = np.vander(self.x, n + 1, increasing=True)
        self.box = box
        self.incumbent = budget
        self.best: list[tuple[float, tuple[int, ...]]] = []
        self.nodes = 0
        self.leaves = 0
        self.lps = 0

    def _limit(self) -> float:
        return self.incumbent * (1 + TIE_RTOL) + 1e-15

    def _range(self, fixed: dict[int, int], k: int) -> tuple[int, int] | None:
        B = self._limit()
        n = self.n
        bounds = [(fixed[i], fixed[i]) if i in fixed else (-self.box[i], self.box[i]) for i in range(n + 1)]
        if k == 0:
            # closed form: only c_0 is free
            r = self.V[:, 1:] @ np.array([fixed[i] for i in range(1, n + 1)], dtype=float)
            lo, hi = float(np.max(-B - r)), float(np.min(B - r))
        else:
            A = np.vstack([self.V, -self.V])
            b = np.full(2 * len(self.x), B)
            cost = np.zeros(n + 1)
            cost[k] = 1.0
            res_lo = linprog(cost, A_ub=A, b_ub=b, bounds=bounds, method="highs")
            res_hi = linprog(-cost, A_ub=A, b_ub=b, bounds=bounds, method="highs")
            self.lps += 2
            if res_lo.status != 0 or res_hi.status != 0:
                return None
            lo, hi = res_lo.x[k], res_hi.x[k]
        lo = max(math.ceil(lo - _LP_SLACK), -self.box[k])
        hi = min(math.floor(hi + _LP_SLACK), self.box[k])
        return (lo, hi) if lo <= hi else None

    def _leaf(self, fixed: dict[int, int]):
        c = tuple(fixed[i] for i in range(self.n + 1))
        if not any(c):
            return
        self.leaves += 1
        nrm = sup_norm(IntPoly(c), self.E)
        if nrm > self._limit():
            return
        if nrm < self.incumbent:
            self.incumbent = nrm
        self.best.append((nrm, c))

    def run(self, k: int, fixed: dict[int, int], all_zero: bool):
        self.nodes += 1
        if k < 0:
            self._leaf(fixed)
            return
        rng = self._range(fixed, k)
        if rng is None:
            return
        lo, hi = rng
        if all_zero:
            lo = max(lo, 0)  # first nonzero coefficient from the top is positive
        # try small coefficients first so good incumbents appear early
        for v in sorted(range(lo, hi + 1), key=lambda t: (abs(t), t)):
            fixed[k] = v
            self.run(k - 1, fixed, all_zero and v == 0)
        fixed.pop(k, None)


def _finish(E, n, found, diag, known_factors) -> FactorizationRecord:
    best_norm = min(v for v, _ in found)
    ties = sorted({_canonical(c) for v, c in found if v <= best_norm * (1 + TIE_RTOL) + 1e-15})
    winner = IntPoly(ties[0])
    table = default_factor_table(E) if known_factors is None else known_factors
    facs, residual = factor_analyze(winner, table, n)
    return FactorizationRecord(
        degree=n,
        polynomial=winner,
        norm=float(sup_norm(winner, E)),
        factors=facs,
        residual=residual,
        domain=E,
        ties=tuple(IntPoly(t) for t in ties),
        diagnostics=diag,
    )


def search_integer_chebyshev(
    E: IntervalUnion,
    n: int,
    norm_budget: float | None = None,
    max_degree: int = DEFAULT_MAX_DEGREE,
    known_factors: Sequence[tuple[str, IntPoly]] | None = None,
) -> FactorizationRecord:
    """Global minimizer of ||P||_E over nonzero P in P_n(Z).

    Ties (equal norms up to a relative 1e-9) are all kept in ``ties``; the
    reported polynomial is the smallest ascending coefficient vector whose
    highest nonzero coefficient is positive.
    """
    if n < 0 or n > max_degree:
        raise DomainError(f"degree {n} outside 0..{max_degree}")
    if E.is_empty():
        raise DomainError("empty set")
    budget = _candidate_budget(E, n) if norm_budget is None else float(norm_budget)
    box = chebyshev_box(E, n, budget)
    s = _Search(E, n, budget, box)
    s.run(n, {}, True)
    if not s.best:
        raise BudgetTooSmall(f"no nonzero integer polynomial of degree <= {n} has norm <= {budget}")
    diag = {"budget": budget, "box": box, "nodes": s.nodes, "leaves": s.leaves, "linear_programs": s.lps}
    return _finish(E, n, s.best, diag, known_factors)


def brute_force_search(
    E: IntervalUnion, n: int, norm_budget: float, chunk: int = 1_000_000
) -> FactorizationRecord:
    """Exhaustive enumeration of the Chebyshev coefficient box (the oracle).

    Every vector of the box is screened by its maximum over a few Chebyshev
    points, then over a dense grid (both lower estimates of the norm);
    survivors get the exact norm.
    """
    box = chebyshev_box(E, n, norm_budget)
    sizes = np.array([2 * b + 1 for b in box], dtype=np.int64)
    total = int(np.prod(sizes))
    coarse = sample_nodes(E, 0)[:: max(1, 32 // (2 * n + 3))]
    fine = E.grid(max(400, 64 * (n + 1)) / max(E.length(), 1e-12))
    Vc = np.vander(coarse, n + 1, increasing=True)
    Vf = np.vander(fine, n + 1, increasing=True)
    offset = np.array(box, dtype=np.int64)
    found: list[tuple[float, tuple[int, ...]]] = []
    limit = norm_budget * (1 + TIE_RTOL)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        C = np.stack(np.unravel_index(idx, sizes), axis=1) - offset
        Cf = C.astype(float)
        C = C[np.max(np.abs(Cf @ Vc.T), axis=1) <= limit + 1e-12]
        if not len(C):
            continue
        C = C[np.max(np.abs(C.astype(float) @ Vf.T), axis=1) <= limit + 1e-12]
        for row in C:
            c = tuple(int(v) for v in row)
            if not any(c):
                continue
            nrm = sup_norm(IntPoly(c), E)
            if nrm <= limit:
                found.append((nrm, c))
                limit = min(limit, nrm * (1 + TIE_RTOL))
    if not found:
        raise BudgetTooSmall(f"no nonzero integer polynomial of degree <= {n} has norm <= {norm_budget}")
    return _finish(E, n, found, {"budget": norm_budget, "box": box, "enumerated": total}, None)


# ---------------------------------------------------------------------------
# Constructive small polynomials from linear forms at weighted nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Construction:
    polynomial: IntPoly
    certified_bound: float
    forms: tuple[float, ...]
    diagnostics: dict = field(default_factory=dict)


def hilbert_fekete_construct(
    E: IntervalUnion,
    w: FactorWeight,
    n: int,
    nodes: Sequence[float],
    precision_bits: int = 64,
) -> Construction:
    """Nonzero P in P_n(Z) with small l_i = w(z_i)^n P(z_i) at n + 1 nodes.

    Lattice reduction (LLL) of the integer-scaled form matrix gives short
    integer combinations; the one with the smallest max |l_i| is returned with
    the bound (n + 1) max |l_i|.  Powers of the nodes are exact rationals, so
    only the row weights are rounded.
    """
    if n < 1:
        raise DomainError("degree must be at least 1")
    nodes = [float(z) for z in nodes]
    if len(nodes) != n + 1:
        raise LengthMismatch(f"need {n + 1} nodes, got {len(nodes)}")
    if len(set(nodes)) != len(nodes):
        raise SingularNodes("two nodes coincide")
    for z in nodes:
        if not E.contains(z):
            raise DomainError(f"node {z} is outside E")
    logw = [float(w.log_abs(z)) for z in nodes]
    if any(not math.isfinite(v) for v in logw):
        raise DomainError("the weight vanishes at a node")
    # row scale: w^n relative to its largest value, exponent kept separately
    top = max(n * v for v in logw)
    rows = [Fraction(math.exp(n * v - top)) for v in logw]
    Z = [Fraction(z) for z in nodes]
    powers = [[z**k for k in range(n + 1)] for z in Z]
    smallest = min(abs(r * p) for r, row in zip(rows, powers) for p in row if p != 0)
    shift = precision_bits + max(0, -math.floor(math.log2(smallest)))
    scale = 2**shift
    basis = [[round(rows[i] * powers[i][k] * scale) for i in range(n + 1)] for k in range(n + 1)]
    M = IntegerMatrix.from_matrix(basis)
    U = IntegerMatrix.identity(n + 1)
    LLL.reduction(M, U)

    def forms_of(c):
        return [math.exp(top) * float(rows[i] * sum(ck * powers[i][k] for k, ck in enumerate(c))) for i in range(n + 1)]

    best = None
    for r in range(n + 1):
        c = [int(U[r, k]) for k in range(n + 1)]
        if not any(c):
            continue
        f = forms_of(c)
        m = max(abs(v) for v in f)
        if best is None or m < best[0]:
            best = (m, c, f)
    m, c, f = best
    c = list(_canonical(c))
    f = forms_of(c)
    P = IntPoly(tuple(c))
    return Construction(
        polynomial=P,
        certified_bound=(n + 1) * m,
        forms=tuple(f),
        diagnostics={"sum_abs_forms": sum(abs(v) for v in f), "scale_bits": shift, "max_form": m},
    )
