"""Upper and lower bounds for integer Chebyshev constants.

Every public function returns a :class:`BoundReport`.  Sweeps over
multiplicity lattices work in the [0,1] multiplicities alpha_i; a factor's
exponent in the weight on [0,1/4] is ``scale_i * alpha_i`` where the scale
comes from the substitution z = x(1-x) (2 for every tabulated factor except
4z-1, which is already a square).
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from . import jacobi
from .errors import DomainError, LengthMismatch, ModeUnavailable, NonConvergence, PointInSupport
from .leja import (
    DEFAULT_GRID_DENSITY,
    estimate_log_capacity,
    estimate_potential_gap,
    leja_sequence,
    support_estimate,
)
from .polycore import FactorWeight, IntervalUnion, IntPoly, RationalPoint, pullback_scale

DEFAULT_M = 0.179335
QUARTER_INTERVAL = IntervalUnion.single(0.0, 0.25)
UNIT_INTERVAL = IntervalUnion.single(0.0, 1.0)
_Z = IntPoly((0, 1))
_FOUR_Z_MINUS_ONE = IntPoly((-1, 4))


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _squaring(domain: IntervalUnion | None, value: float) -> dict | None:
    """Companion value under t([0,1])^2 = t([0,1/4])."""
    if domain is None or not math.isfinite(value):
        return None
    if domain == QUARTER_INTERVAL:
        return {"domain": UNIT_INTERVAL.to_text(), "value": math.sqrt(value)}
    if domain == UNIT_INTERVAL:
        return {"domain": QUARTER_INTERVAL.to_text(), "value": value * value}
    return None


@dataclass(frozen=True)
class BoundReport:
    """A bound value with the inputs and method that produced it.

    ``kind`` is one of upper, lower, exact or bracket.  A bracket keeps its
    lower end in ``value`` and its upper end in ``upper``.
    """

    kind: str
    value: float
    method: str
    parameters: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    upper: float | None = None
    squaring: dict | None = None

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "method": self.method,
            "parameters": self.parameters,
            "diagnostics": self.diagnostics,
        }
        if self.upper is not None:
            out["upper"] = self.upper
        if self.squaring is not None:
            out["squaring"] = self.squaring
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


def _report(kind, value, method, domain=None, parameters=None, diagnostics=None, upper=None):
    params = dict(parameters or {})
    if domain is not None:
        params.setdefault("domain", domain.to_text())
    return BoundReport(
        kind=kind,
        value=float(value),
        method=method,
        parameters=params,
        diagnostics=dict(diagnostics or {}),
        upper=upper,
        squaring=_squaring(domain, float(value)),
    )


# ---------------------------------------------------------------------------
# Classical bounds
# ---------------------------------------------------------------------------


def fekete_upper(
    E: IntervalUnion, leja_length: int = 2000, grid_density: float = DEFAULT_GRID_DENSITY
) -> BoundReport:
    """min(1, sqrt(cap E)); closed-form capacity for one interval, Leja otherwise."""
    if E.is_empty():
        raise DomainError("empty set")
    diag = {}
    if len(E.intervals) == 1:
        cap = (E.hi - E.lo) / 4.0
        diag["capacity_source"] = "closed form"
    else:
        seq = leja_sequence(E, FactorWeight(()), leja_length, grid_density)
        lc = estimate_log_capacity(seq)
        cap = math.exp(lc.value)
        diag.update(capacity_source="leja", leja_length=leja_length, log_capacity_spread=lc.spread)
    diag["capacity"] = cap
    return _report("upper", min(1.0, math.sqrt(cap)), "fekete", E, diagnostics=diag)


def trigub_lower(m: int) -> BoundReport:
    """Lower bound on I_m = [1/(m+4), 1/m] from the conjugate-set argument."""
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m}")
    m = int(m)
    s = m + 2
    value = 2.0 / (s + math.sqrt(s * s - 4))
    E = IntervalUnion.single(1.0 / (m + 4), 1.0 / m)
    return _report(
        "lower",
        value,
        "trigub",
        E,
        parameters={"m": m},
        diagnostics={"one_over_m_plus_2": 1.0 / s, "sqrt_cap": math.sqrt(1.0 / m - 1.0 / (m + 4)) / 2},
    )


def _root(r: float, m: int) -> float:
    return math.sqrt(r) if m == 2 else r ** (1.0 / m)


def lemniscate_tz(V: IntPoly, r: float, irreducible: bool = False) -> BoundReport:
    """t_Z of {|V(z)| = r}: exact r^(1/m) when V is monic, or irreducible with r <= 1/|a_m|."""
    m = V.degree()
    if m < 1:
        raise DomainError("V must be nonconstant")
    r = float(r)
    if not 0 <= r < 1:
        raise DomainError(f"r must satisfy 0 <= r < 1, got {r}")
    lead = abs(V.leading)
    params = {"poly": V.to_text(), "r": r, "irreducible": bool(irreducible)}
    hi = _root(r, m)
    if lead == 1:
        return _report("exact", hi, "lemniscate", parameters=params, diagnostics={"branch": "monic"})
    if irreducible:
        if r > 1.0 / lead:
            raise DomainError(f"irreducible branch needs r <= 1/|a_m| = {1.0 / lead}")
        return _report(
            "exact",
            hi,
            "lemniscate",
            parameters=params,
            diagnostics={"branch": "irreducible", "capacity": _root(r / lead, m)},
        )
    return _report("bracket", _root(r / lead, m), "lemniscate", parameters=params, upper=hi)


# ---------------------------------------------------------------------------
# Weighted bounds
# ---------------------------------------------------------------------------


def two_factor_params(E: IntervalUnion, w: FactorWeight) -> jacobi.TwoFactorParams | None:
    """The (alpha1, alpha2) of w when it is |z|^{2 a1} |4z-1|^{a2} on [0,1/4], else None."""
    if E != QUARTER_INTERVAL:
        return None
    a1 = a2 = 0.0
    for poly, expo in w.factors:
        if poly in (_Z, -_Z) and a1 == 0:
            a1 = expo / 2
        elif poly in (_FOUR_Z_MINUS_ONE, -_FOUR_Z_MINUS_ONE) and a2 == 0:
            a2 = expo
        else:
            return None
    return jacobi.TwoFactorParams(a1, a2)


def weighted_upper(
    E: IntervalUnion,
    w: FactorWeight,
    mode: str = "leja",
    leja_length: int = 4000,
    grid_density: float = DEFAULT_GRID_DENSITY,
) -> BoundReport:
    """cap(E, w)^((1 - alpha)/2)."""
    alpha = w.alpha_total
    params = {"weight": w.to_text(), "alpha": alpha, "mode": mode}
    if mode == "closedForm":
        p = two_factor_params(E, w)
        if p is None:
            raise ModeUnavailable("closedForm needs the weight |z|^(2 a1) |4z-1|^a2 on [0,1/4]")
        cap = jacobi.weighted_capacity(p)
        log_cap = math.log(cap.value)
        diag = {"quadrature_error": cap.error, "alpha1": p.alpha1, "alpha2": p.alpha2}
    elif mode == "leja":
        seq = leja_sequence(E, w, leja_length, grid_density)
        lc = estimate_log_capacity(seq)
        log_cap = lc.value
        diag = {"log_capacity_spread": lc.spread, "leja_length": leja_length, "grid_density": grid_density}
    else:
        raise ModeUnavailable(f"unknown mode {mode!r}")
    diag["capacity"] = math.exp(log_cap)
    return _report("upper", math.exp(log_cap * (1 - alpha) / 2), "weighted-capacity", E, params, diag)


def robin_lower(
    w: FactorWeight,
    F_w: float,
    closed_form: jacobi.TwoFactorParams | None = None,
    domain: IntervalUnion | None = None,
) -> BoundReport:
    """exp((alpha - 1) F_w).

    With two-factor parameters the product form
    cap(S_w) prod |a_i|^{alpha_i} exp(sum alpha_i g(z_ji, inf)) is computed
    from the Green function as well, and must agree to 1e-6.
    """
    alpha = w.alpha_total
    value = math.exp((alpha - 1) * F_w)
    diag = {"robin_constant": F_w}
    if closed_form is not None:
        p = closed_form
        S = jacobi.support_endpoints(p)
        g = jacobi.green_at_infinity_of_zeros(p)
        log_prod = math.log(S.capacity) + 2 * p.alpha1 * g[0.0] + p.alpha2 * (math.log(4.0) + g[0.25])
        prod = math.exp(log_prod)
        diag["product_form"] = prod
        diag["agreement"] = abs(prod - value)
        if abs(prod - value) > 1e-6:
            raise NonConvergence(f"robin bound {value} and product form {prod} disagree")
    return _report("lower", value, "robin", domain, {"weight": w.to_text(), "alpha": alpha}, diag)


def constraint_value(alpha: float, q: int, gap: float) -> float:
    """q^(alpha - 1) exp((alpha - 1) gap)."""
    return math.exp((alpha - 1) * (math.log(q) + gap))


def rational_point_lower(
    w: FactorWeight,
    zetas: Sequence[RationalPoint],
    gap_values: Sequence[float],
    domain: IntervalUnion | None = None,
) -> BoundReport:
    """max_i q_i^(alpha-1) exp((alpha-1) (F_w - U(zeta_i)))."""
    if len(zetas) != len(gap_values):
        raise LengthMismatch(f"{len(zetas)} points but {len(gap_values)} gap values")
    if not zetas:
        raise LengthMismatch("need at least one point")
    alpha = w.alpha_total
    vals = [constraint_value(alpha, z.q, g) for z, g in zip(zetas, gap_values)]
    return _report(
        "lower",
        max(vals),
        "rational-point",
        domain,
        {"weight": w.to_text(), "alpha": alpha, "zetas": [z.to_text() for z in zetas]},
        {"constraints": vals, "gaps": list(map(float, gap_values))},
    )


# ---------------------------------------------------------------------------
# Multiplicity lattices
# ---------------------------------------------------------------------------


class GapEvaluator(Protocol):
    """Maps a multiplicity vector to potential-theory data of its weight."""

    names: tuple[str, ...]
    coefficients: tuple[float, ...]

    def gaps(self, alphas: Sequence[float], zetas: Sequence[RationalPoint]) -> tuple[list[float], dict]: ...

    def log_capacity(self, alphas: Sequence[float]) -> tuple[float, dict]: ...


def alpha_total(coefficients: Sequence[float], alphas: Sequence[float]) -> float:
    return float(sum(c * a for c, a in zip(coefficients, alphas)))


def _ev_alpha(ev, alphas) -> float:
    return alpha_total(ev.coefficients, alphas) + getattr(ev, "fixed_alpha", 0.0)


def _room(ev) -> float:
    return 1.0 - getattr(ev, "fixed_alpha", 0.0)


class ClosedFormGaps:
    """Two-factor evaluator (z and 4z-1 on [0,1/4]) from the explicit solution."""

    names = ("alpha1", "alpha2")
    coefficients = (2.0, 1.0)

    def gaps(self, alphas, zetas):
        p = jacobi.TwoFactorParams(*alphas)
        return [jacobi.potential_gap(p, z.value) for z in zetas], {}

    def log_capacity(self, alphas):
        return jacobi.log_capacity_from_gaps(jacobi.TwoFactorParams(*alphas)), {}

    def constraint_arrays(self, A: np.ndarray, zetas: Sequence[RationalPoint]) -> np.ndarray:
        """Constraint values for many lattice points at once, shape (len(A), len(zetas))."""
        tot, _, gaps, _ = jacobi.sweep_arrays(A[:, 0], A[:, 1], [z.value for z in zetas])
        cols = []
        for z in zetas:
            g = gaps[jacobi._key(z.value)]
            cols.append(np.exp((tot - 1) * (math.log(z.q) + g)))
        return np.stack(cols, axis=1)

    def upper_arrays(self, A: np.ndarray) -> np.ndarray:
        tot, _, _, lc = jacobi.sweep_arrays(A[:, 0], A[:, 1], [])
        return np.exp(lc * (1 - tot) / 2)


@dataclass
class LejaGaps:
    """Evaluator for any factor set through a fresh Leja sequence per point."""

    factors: tuple[IntPoly, ...]
    scales: tuple[float, ...]
    domain: IntervalUnion = QUARTER_INTERVAL
    leja_length: int = 2000
    grid_density: float = 20_000
    names: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.factors) != len(self.scales):
            raise LengthMismatch("one scale per factor")
        if not self.names:
            self.names = tuple(f"alpha{i + 1}" for i in range(len(self.factors)))

    @classmethod
    def for_factors(cls, factors: Sequence[IntPoly], domain: IntervalUnion = QUARTER_INTERVAL, **kw) -> LejaGaps:
        """Scales from the factor table on [0,1/4], 1 elsewhere."""
        scales = []
        for f in factors:
            s = pullback_scale(f) if domain == QUARTER_INTERVAL else None
            scales.append(float(s if s is not None else 1))
        return cls(tuple(factors), tuple(scales), domain, **kw)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(s * f.degree() for f, s in zip(self.factors, self.scales))

    def weight(self, alphas) -> FactorWeight:
        return FactorWeight(tuple((f, s * a) for f, s, a in zip(self.factors, self.scales, alphas) if a > 0))

    def _sequence(self, alphas):
        return leja_sequence(self.domain, self.weight(alphas), self.leja_length, self.grid_density)

    def gaps(self, alphas, zetas):
        key = (tuple(round(float(a), 12) for a in alphas), tuple(z.to_text() for z in zetas))
        if key not in self._cache:
            seq = self._sequence(alphas)
            out, spreads = [], []
            for z in zetas:
                est = estimate_potential_gap(seq, z.value)
                out.append(est.value)
                spreads.append(est.spread)
            self._cache[key] = (out, {"gap_spreads": spreads, "support": support_estimate(seq).to_text()})
        out, diag = self._cache[key]
        return list(out), dict(diag)

    def log_capacity(self, alphas):
        est = estimate_log_capacity(self._sequence(alphas))
        return est.value, {"log_capacity_spread": est.spread}


@dataclass
class Pinned:
    """Sweeps a subset of an evaluator's coordinates; the rest stay at fixed values."""

    inner: object
    fixed: dict  # coordinate index -> multiplicity

    @property
    def free(self) -> list[int]:
        return [i for i in range(len(self.inner.names)) if i not in self.fixed]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.inner.names[i] for i in self.free)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(self.inner.coefficients[i] for i in self.free)

    @property
    def fixed_alpha(self) -> float:
        return float(sum(self.inner.coefficients[i] * a for i, a in self.fixed.items()))

    def full(self, alphas) -> list[float]:
        out = [0.0] * len(self.inner.names)
        for i, a in self.fixed.items():
            out[i] = a
        for i, a in zip(self.free, alphas):
            out[i] = float(a)
        return out

    def gaps(self, alphas, zetas):
        return self.inner.gaps(self.full(alphas), zetas)

    def log_capacity(self, alphas):
        return self.inner.log_capacity(self.full(alphas))


def lattice_points(
    coefficients: Sequence[float],
    step: float,
    box: Sequence[tuple[float, float]] | None = None,
    room: float = 1.0,
) -> np.ndarray:
    """Lattice k*step (k >= 1) inside sum c_i alpha_i <= room - step/2, optionally clipped to a box."""
    k = len(coefficients)
    ranges = []
    for i, c in enumerate(coefficients):
        top = (room - step / 2) / c
        lo, hi = (step, top) if box is None else (max(step, box[i][0]), min(top, box[i][1]))
        k_lo = max(1, int(math.ceil(lo / step - 1e-9)))
        k_hi = int(math.floor(hi / step + 1e-9))
        ranges.append(np.arange(k_lo, k_hi + 1))
    if any(len(r) == 0 for r in ranges):
        return np.zeros((0, k))
    grids = np.meshgrid(*ranges, indexing="ij")
    K = np.stack([g.ravel() for g in grids], axis=1)
    A = np.round(K * step, 12)
    keep = A @ np.asarray(coefficients, dtype=float) <= room - step / 2 + 1e-12
    return A[keep]


def _point_constraints(ev, alphas, zetas) -> tuple[list[float], dict]:
    gaps, diag = ev.gaps(alphas, zetas)
    tot = _ev_alpha(ev, alphas)
    return [constraint_value(tot, z.q, g) for z, g in zip(zetas, gaps)], diag


def _map(fn, items, workers: int) -> list:
    """Ordered map, in worker processes when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _constraints_at(ev, zetas, a) -> list[float]:
    return _point_constraints(ev, a, zetas)[0]


def _upper_at(ev, a) -> float:
    lc, _ = ev.log_capacity(a)
    return math.exp(lc * (1 - _ev_alpha(ev, a)) / 2)


def _evaluate_max(ev, A: np.ndarray, zetas, workers: int = 1) -> np.ndarray:
    return _constraint_rows(ev, A, zetas, workers).max(axis=1)


def _evaluate_upper(ev, A: np.ndarray, workers: int = 1) -> np.ndarray:
    if hasattr(ev, "upper_arrays") and len(A):
        return ev.upper_arrays(A)
    return np.array(_map(functools.partial(_upper_at, ev), A, workers))


def _argmin(values: np.ndarray, A: np.ndarray) -> int:
    """Smallest value; ties go to the lexicographically smallest alpha."""
    best = np.min(values)
    idx = np.nonzero(values == best)[0]
    return int(min(idx, key=lambda i: tuple(A[i])))


def _coordinate_descent(f: Callable, start: np.ndarray, fstart: float, alpha_of: Callable, step: float, rounds: int):
    """Pattern search with steps step/2, step/4, ... (one halving per round)."""
    x, fx = np.array(start, dtype=float), fstart
    h = step
    evals = 0
    for _ in range(rounds):
        h /= 2
        improved = True
        while improved:
            improved = False
            for i, sgn in itertools.product(range(len(x)), (-1, 1)):
                y = x.copy()
                y[i] += sgn * h
                if y[i] <= 0 or alpha_of(y) >= 1 - h / 2:
                    continue
                fy = f(y)
                evals += 1
                if fy < fx:
                    x, fx, improved = y, fy, True
    return x, fx, evals


def _sweep(kind, ev, values_fn, step, box, refine_rounds, extra_params):
    A = lattice_points(ev.coefficients, step, box, _room(ev))
    if len(A) == 0:
        raise DomainError("the lattice has no admissible points")
    vals = values_fn(A)
    finite = np.isfinite(vals)
    if not finite.any():
        raise NonConvergence("no lattice point produced a finite value")
    vals = np.where(finite, vals, np.inf)
    j = _argmin(vals, A)
    lattice_best, lattice_arg = float(vals[j]), A[j]
    best, arg, evals = lattice_best, lattice_arg, 0
    if refine_rounds:
        arg, best, evals = _coordinate_descent(
            lambda a: float(values_fn(np.asarray([a]))[0]), lattice_arg, lattice_best, lambda a: _ev_alpha(ev, a), step, refine_rounds
        )
    params = {
        "names": list(ev.names),
        "step": step,
        "box": None if box is None else [list(b) for b in box],
        "refine_rounds": refine_rounds,
        **extra_params,
    }
    diag = {
        "argmin": [float(a) for a in arg],
        "lattice_value": lattice_best,
        "lattice_argmin": [float(a) for a in lattice_arg],
        "lattice_size": int(len(A)),
        "refinement_evaluations": evals,
        "alpha": _ev_alpha(ev, arg),
    }
    return kind, best, params, diag


def sweep_lower_bound(
    ev: GapEvaluator,
    zetas: Sequence[RationalPoint],
    step: float,
    box: Sequence[tuple[float, float]] | None = None,
    refine_rounds: int = 3,
    domain: IntervalUnion = QUARTER_INTERVAL,
    workers: int = 1,
) -> BoundReport:
    """inf over the lattice of max_i l_i(alpha), refined by coordinate descent near the argmin."""
    if not zetas:
        raise LengthMismatch("need at least one rational point")
    kind, best, params, diag = _sweep(
        "lower", ev, lambda A: _evaluate_max(ev, A, zetas, workers), step, box, refine_rounds,
        {"zetas": [z.to_text() for z in zetas]},
    )
    return _report(kind, best, "rational-point", domain, params, diag)


def sweep_upper_bound(
    ev: GapEvaluator,
    step: float,
    box: Sequence[tuple[float, float]] | None = None,
    refine_rounds: int = 3,
    domain: IntervalUnion = QUARTER_INTERVAL,
    workers: int = 1,
) -> BoundReport:
    """inf over the lattice of cap(E, w_alpha)^((1 - alpha)/2)."""
    kind, best, params, diag = _sweep(
        "upper", ev, lambda A: _evaluate_upper(ev, A, workers), step, box, refine_rounds, {}
    )
    return _report(kind, best, "weighted-capacity", domain, params, diag)


# ---------------------------------------------------------------------------
# Feasibility regions
# ---------------------------------------------------------------------------


@dataclass
class RegionSpec:
    """Lattice of multiplicities tested against q^(alpha-1) exp((alpha-1) gap) < M."""

    alpha_names: tuple[str, ...]
    lattice_step: float
    bound: float = DEFAULT_M
    constraints: tuple[RationalPoint, ...] = ()
    box: tuple[tuple[float, float], ...] | None = None
    points: np.ndarray | None = None
    values: np.ndarray | None = None

    @property
    def feasible(self) -> np.ndarray:
        if self.values is None:
            raise ValueError("region has not been evaluated")
        return np.all(self.values < self.bound, axis=1)

    def feasible_points(self) -> np.ndarray:
        return self.points[self.feasible]

    def bounding_box(self) -> list[tuple[float, float]] | None:
        F = self.feasible_points()
        if len(F) == 0:
            return None
        return [(float(F[:, i].min()), float(F[:, i].max())) for i in range(F.shape[1])]

    def to_csv(self, fh=None) -> str:
        """Rows alpha_1..alpha_k, constraint_1..constraint_j, feasible (0/1)."""
        buf = fh if fh is not None else io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow([*self.alpha_names, *(f"l_{z.to_text()}" for z in self.constraints), "feasible"])
        feas = self.feasible
        for a, v, f in zip(self.points, self.values, feas):
            wr.writerow([*(f"{x:.9g}" for x in a), *(f"{x:.9g}" for x in v), int(f)])
        return buf.getvalue() if fh is None else ""


def _constraint_rows(ev, A: np.ndarray, zetas, workers: int = 1) -> np.ndarray:
    if hasattr(ev, "constraint_arrays") and len(A):
        return ev.constraint_arrays(A, zetas)
    rows = _map(functools.partial(_constraints_at, ev, zetas), A, workers)
    return np.array(rows, dtype=float).reshape(len(A), len(zetas))


def feasible_region(
    spec: RegionSpec, ev: GapEvaluator, strategy: str = "full", seed=None, workers: int = 1
) -> RegionSpec:
    """Evaluate every constraint on the lattice and fill ``points``/``values``.

    ``strategy="flood"`` evaluates only the lattice neighbours of feasible
    points, starting from ``seed`` (a lattice point); it gives the same
    feasible set whenever that set is connected in the lattice graph.
    """
    if spec.bound <= 0:
        raise DomainError("M must be positive")
    if not spec.constraints:
        raise LengthMismatch("need at least one constraint")
    zetas = spec.constraints
    step = spec.lattice_step
    A = lattice_points(ev.coefficients, step, spec.box, _room(ev))
    if strategy == "full":
        spec.points, spec.values = A, _constraint_rows(ev, A, zetas, workers)
        return spec
    if strategy != "flood":
        raise ValueError(f"unknown strategy {strategy!r}")
    if seed is None:
        raise ValueError("flood strategy needs a seed point")
    index = {tuple(np.round(a / step).astype(int)): a for a in A}
    start = tuple(int(round(s / step)) for s in seed)
    if start not in index:
        raise DomainError(f"seed {seed} is not on the admissible lattice")
    seen = {start: _constraint_rows(ev, np.asarray([index[start]]), zetas)[0]}
    frontier = [start] if np.all(seen[start] < spec.bound) else []
    while frontier:
        nxt = []
        for key in frontier:
            for i, sgn in itertools.product(range(len(key)), (-1, 1)):
                nb = list(key)
                nb[i] += sgn
                nb = tuple(nb)
                if nb in seen or nb not in index:
                    continue
                seen[nb] = _constraint_rows(ev, np.asarray([index[nb]]), zetas)[0]
                if np.all(seen[nb] < spec.bound):
                    nxt.append(nb)
        frontier = nxt
    keys = sorted(seen)
    spec.points = np.array([index[k] for k in keys])
    spec.values = np.array([seen[k] for k in keys])
    return spec


# ---------------------------------------------------------------------------
# Neighbourhoods of factor zeros
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvarianceCheck:
    holds: bool
    inconclusive: bool
    max_value: float
    samples: int

    def __bool__(self) -> bool:
        return self.holds


def neighborhood_invariance_check(
    w: FactorWeight,
    epsilon: float,
    gap_evaluator: Callable[[complex], float],
    support: IntervalUnion | None = None,
    radial: int = 8,
    angular: int = 32,
) -> InvarianceCheck:
    """Sample F_w - U(z) + log w(z) <= 0 on the disks |z - z_j| <= epsilon around factor zeros.

    Inconclusive (and not holding) when a disk meets the support, or the gap
    evaluator refuses a sample point.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    zeros = w.zeros()
    if support is not None and any(support.distance(z) <= epsilon for z in zeros):
        return InvarianceCheck(False, True, math.nan, 0)
    best, count = -math.inf, 0
    radii = epsilon * np.arange(1, radial + 1) / radial
    angles = 2 * math.pi * np.arange(angular) / angular
    for z0 in zeros:
        for r, t in itertools.product(radii, angles):
            z = complex(z0) + r * complex(math.cos(t), math.sin(t))
            try:
                val = gap_evaluator(z) + float(w.log_abs(z))
            except PointInSupport:
                return InvarianceCheck(False, True, best, count)
            count += 1
            best = max(best, val)
    return InvarianceCheck(best <= 0, False, best, count)
