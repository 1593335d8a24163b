"""Weighted Leja points on real interval unions and the estimators built on them.

The step-k objective  k log w(z) + sum_{i<k} log|z - a_i|  is kept on a
uniform grid as a running log-sum, so one step costs one pass over the grid
plus a local refinement of the grid argmax.  Nothing here is random; equal
inputs give equal sequences.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import EmptyDomain, PointInSupport
from .polycore import FactorWeight, IntervalUnion

DEFAULT_GRID_DENSITY = 200_000
SUPPORT_MARGIN_CELLS = 10
_CLUSTER_GAP_FACTOR = 50.0


@dataclass(frozen=True)
class Estimate:
    """Estimator value plus the spread of its running value over the last 10% of steps."""

    value: float
    spread: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class EquilibriumData:
    support_estimate: IntervalUnion
    robin_constant: float
    weighted_capacity: float
    source_length: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class LejaSequence:
    """Points a_0..a_n with log|L_k(a_k)| and log w(a_k) for every k.

    ``log_products[0]`` is 0 (L_0 = 1).  The grid state needed to append
    further points is carried along privately.
    """

    points: np.ndarray
    log_products: np.ndarray
    weight_logs: np.ndarray
    domain: IntervalUnion
    weight: FactorWeight
    grid_density: float
    _grid: np.ndarray = field(repr=False)
    _grid_logw: np.ndarray = field(repr=False)
    _grid_logsum: np.ndarray = field(repr=False)
    _interval_id: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        """Index of the last point (the sequence holds n + 1 points)."""
        return len(self.points) - 1

    @property
    def cell(self) -> float:
        return 1.0 / self.grid_density


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


class _Builder:
    def __init__(self, domain: IntervalUnion, weight: FactorWeight, grid_density: float):
        self.domain = domain
        self.weight = weight
        self.grid_density = float(grid_density)
        parts, ids = [], []
        for i, (lo, hi) in enumerate(domain.intervals):
            g = IntervalUnion.single(lo, hi).grid(self.grid_density)
            parts.append(g)
            ids.append(np.full(len(g), i))
        self.grid = np.concatenate(parts)
        self.interval_id = np.concatenate(ids)
        self.grid_logw = np.asarray(weight.log_abs(self.grid), dtype=float)
        if not np.any(np.isfinite(self.grid_logw)):
            raise EmptyDomain("the weight vanishes at every grid point")
        self.logsum = np.zeros_like(self.grid)
        self._init_roots()
        self.points: list[float] = []
        self.sorted_points: list[float] = []
        self.log_products: list[float] = []
        self.weight_logs: list[float] = []

    @classmethod
    def from_sequence(cls, seq: LejaSequence) -> _Builder:
        b = cls.__new__(cls)
        b.domain, b.weight, b.grid_density = seq.domain, seq.weight, seq.grid_density
        b.grid, b.interval_id, b.grid_logw = seq._grid, seq._interval_id, seq._grid_logw
        b.logsum = seq._grid_logsum.copy()
        b._init_roots()
        b.points = list(seq.points)
        b.sorted_points = sorted(b.points)
        b.log_products = list(seq.log_products)
        b.weight_logs = list(seq.weight_logs)
        return b

    def _init_roots(self):
        w = self.weight
        nodes, mass, lead = [], [], 0.0
        for (poly, expo), roots in zip(w.factors, w.factor_roots()):
            lead += expo * math.log(abs(poly.leading))
            nodes.extend(roots)
            mass.extend([expo] * len(roots))
        self.root_nodes = np.array(nodes, dtype=complex)
        self.root_mass = np.array(mass, dtype=float) * w.scale
        self.log_lead = lead * w.scale
        self.real_zeros = [z.real for z in nodes if z.imag == 0.0]

    def _objective_parts(self):
        k = len(self.points)
        if k == 0:
            # |z| w(z): one "previous point" at the origin with unit weight power
            return 1.0, np.array([0.0])
        return float(k), np.asarray(self.points)

    def step(self) -> float:
        coef, anchors = self._objective_parts()
        k = len(self.points)
        with np.errstate(invalid="ignore"):
            if k == 0:
                with np.errstate(divide="ignore"):
                    obj = np.log(np.abs(self.grid)) + self.grid_logw
            else:
                obj = coef * self.grid_logw + self.logsum
        obj = np.where(np.isnan(obj), -np.inf, obj)
        j = int(np.argmax(obj))
        best_val = float(obj[j])
        if not math.isfinite(best_val):
            raise EmptyDomain("no grid point has a finite step objective")
        x, val = self._refine(j, best_val, coef, anchors)
        log_w = float(self.weight.log_abs(x))
        log_l = val - coef * log_w if k > 0 else 0.0
        self.points.append(x)
        bisect.insort(self.sorted_points, x)
        self.log_products.append(log_l)
        self.weight_logs.append(log_w)
        with np.errstate(divide="ignore"):
            self.logsum += np.log(np.abs(self.grid - x))
        return x

    def _refine(self, j: int, grid_val: float, coef: float, anchors: np.ndarray):
        """Maximize the step objective inside the grid cells around index j.

        Between consecutive Leja points the objective is concave, so its
        maximum is the unique zero of the derivative, bracketed and found
        with Brent's method.
        """
        g = self.grid
        x0 = float(g[j])
        lo = float(g[j - 1]) if j > 0 and self.interval_id[j - 1] == self.interval_id[j] else x0
        hi = float(g[j + 1]) if j + 1 < len(g) and self.interval_id[j + 1] == self.interval_id[j] else x0
        if lo == hi:
            return x0, grid_val
        if len(self.points):
            i = bisect.bisect_left(self.sorted_points, x0)
            if i > 0:
                lo = max(lo, self.sorted_points[i - 1])
            if i < len(self.sorted_points):
                hi = min(hi, self.sorted_points[i])
        for zr in self.real_zeros:
            if lo < zr < x0:
                lo = zr
            elif x0 < zr < hi:
                hi = zr
        # weight roots act as extra anchors with weight coef * exponent
        nodes = np.concatenate((anchors.astype(complex), self.root_nodes))
        mass = np.concatenate((np.ones(len(anchors)), coef * self.root_mass))
        const = coef * self.log_lead

        def deriv(t):
            inv = 1.0 / (t - nodes)
            return float((mass * inv.real).sum())

        def value(t):
            return const + float((mass * np.log(np.abs(t - nodes))).sum())

        # The derivative is decreasing on the bracket; its zero is the maximizer.
        # Singular bracket ends (earlier points, weight zeros) are nudged inward.
        width = hi - lo
        a = lo + 1e-9 * width if lo < x0 else x0
        b = hi - 1e-9 * width if hi > x0 else x0
        with np.errstate(divide="ignore", invalid="ignore"):
            da, db = deriv(a), deriv(b)
        if not da > 0:
            t = a
        elif not db < 0:
            t = b
        else:
            t = optimize.brentq(deriv, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        with np.errstate(divide="ignore"):
            v = value(t)
        if math.isfinite(v) and v > grid_val and self.domain.contains(t):
            return t, v
        return x0, grid_val

    def freeze(self) -> LejaSequence:
        return LejaSequence(
            points=np.array(self.points),
            log_products=np.array(self.log_products),
            weight_logs=np.array(self.weight_logs),
            domain=self.domain,
            weight=self.weight,
            grid_density=self.grid_density,
            _grid=self.grid,
            _grid_logw=self.grid_logw,
            _grid_logsum=self.logsum.copy(),
            _interval_id=self.interval_id,
        )


def start_leja(domain: IntervalUnion, weight: FactorWeight, grid_density: float = DEFAULT_GRID_DENSITY) -> LejaSequence:
    """Sequence holding only a_0, the maximizer of |z| w(z)."""
    b = _Builder(domain, weight, grid_density)
    b.step()
    return b.freeze()


def next_leja_point(seq: LejaSequence) -> LejaSequence:
    """A new sequence extended by one point; ``seq`` is left untouched."""
    b = _Builder.from_sequence(seq)
    b.step()
    return b.freeze()


def leja_sequence(
    domain: IntervalUnion,
    weight: FactorWeight,
    n: int,
    grid_density: float = DEFAULT_GRID_DENSITY,
) -> LejaSequence:
    """Points a_0..a_n (n + 1 points)."""
    b = _Builder(domain, weight, grid_density)
    for _ in range(n + 1):
        b.step()
    return b.freeze()


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def _tail(n: int) -> range:
    start = max(2, int(math.ceil(0.9 * n)))
    return range(min(start, n), n + 1)


def _spread(values) -> float:
    values = [v for v in values if math.isfinite(v)]
    return max(values) - min(values) if values else math.nan


def _robin_at(seq: LejaSequence, k: int) -> float:
    return -(seq.weight_logs[k] + seq.log_products[k] / k)


def _log_cap_at(seq: LejaSequence, k: int, csum_w: np.ndarray) -> float:
    return seq.weight_logs[k] + (seq.log_products[k] + csum_w[k]) / k


def estimate_robin(seq: LejaSequence) -> Estimate:
    """F_w from -log( w(a_n) |L_n(a_n)|^{1/n} )."""
    n = seq.n
    if n < 2:
        raise ValueError("need at least a_0, a_1, a_2")
    return Estimate(_robin_at(seq, n), _spread(_robin_at(seq, k) for k in _tail(n)))


def estimate_log_capacity(seq: LejaSequence) -> Estimate:
    n = seq.n
    if n < 2:
        raise ValueError("need at least a_0, a_1, a_2")
    csum = np.concatenate(([0.0], np.cumsum(seq.weight_logs)))  # csum[k] = sum_{i<k}
    return Estimate(_log_cap_at(seq, n, csum), _spread(_log_cap_at(seq, k, csum) for k in _tail(n)))


def estimate_capacity(seq: LejaSequence) -> Estimate:
    """cap(E, w) = lim w(a_n) (|L_n(a_n)| prod_{i<n} w(a_i))^{1/n}, evaluated in logs."""
    lc = estimate_log_capacity(seq)
    v = math.exp(lc.value)
    return Estimate(v, v * (math.exp(lc.spread) - 1.0) if math.isfinite(lc.spread) else math.nan)


def support_estimate(seq: LejaSequence) -> IntervalUnion:
    """Hulls of the Leja point clusters.

    Consecutive sorted points belong to different clusters when their gap
    exceeds both 10 grid cells and 50 times the median gap.
    """
    pts = np.sort(seq.points)
    if len(pts) < 3:
        return IntervalUnion(((float(pts[0]), float(pts[-1])),))
    gaps = np.diff(pts)
    thresh = max(SUPPORT_MARGIN_CELLS * seq.cell, _CLUSTER_GAP_FACTOR * float(np.median(gaps)))
    breaks = np.nonzero(gaps > thresh)[0]
    ivs, start = [], 0
    for b in breaks:
        ivs.append((float(pts[start]), float(pts[b])))
        start = b + 1
    ivs.append((float(pts[start]), float(pts[-1])))
    return IntervalUnion(tuple(ivs))


def estimate_potential_gap(seq: LejaSequence, zeta: complex) -> Estimate:
    """F_w - U^{mu_w}(zeta) from -log w(a_n) + (log|L_n(zeta)| - log|L_n(a_n)|)/n.

    Raises PointInSupport when zeta is within 10 grid cells of a Leja cluster.
    """
    n = seq.n
    if n < 2:
        raise ValueError("need at least a_0, a_1, a_2")
    zeta = complex(zeta)
    hull = support_estimate(seq)
    if hull.distance(zeta) <= SUPPORT_MARGIN_CELLS * seq.cell:
        raise PointInSupport(f"zeta={zeta} lies within the Leja cluster hull {hull.intervals}")
    logs = np.log(np.abs(zeta - seq.points))
    csum = np.concatenate(([0.0], np.cumsum(logs)))

    def at(k):
        return -seq.weight_logs[k] + (csum[k] - seq.log_products[k]) / k

    return Estimate(at(n), _spread(at(k) for k in _tail(n)))


def equilibrium_data(seq: LejaSequence) -> EquilibriumData:
    F = estimate_robin(seq)
    lc = estimate_log_capacity(seq)
    return EquilibriumData(
        support_estimate=support_estimate(seq),
        robin_constant=F.value,
        weighted_capacity=math.exp(lc.value),
        source_length=seq.n,
        diagnostics={"robin_spread": F.spread, "log_capacity_spread": lc.spread},
    )


def energy_consistency(seq: LejaSequence) -> float:
    """log cap + F_w - mean(log w(a_i)); tends to 0 along a Leja sequence."""
    return (
        estimate_log_capacity(seq).value
        + estimate_robin(seq).value
        - float(np.mean(seq.weight_logs))
    )


def kolmogorov_distance(points: np.ndarray, cdf) -> float:
    """sup |F_emp - F| for a vectorized or scalar CDF."""
    x = np.sort(np.asarray(points, dtype=float))
    m = len(x)
    F = np.array([cdf(t) for t in x])
    upper = np.arange(1, m + 1) / m - F
    lower = F - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


def to_csv(seq: LejaSequence, fh: io.TextIOBase | None = None) -> str:
    """Columns index, point, log_weight, log_product, running_F_w (blank for k = 0)."""
    buf = fh if fh is not None else io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["index", "point", "log_weight", "log_product", "running_F_w"])
    for k in range(len(seq.points)):
        running = "" if k == 0 else f"{_robin_at(seq, k):.9g}"
        wr.writerow([k, f"{seq.points[k]:.17g}", f"{seq.weight_logs[k]:.9g}", f"{seq.log_products[k]:.9g}", running])
    return buf.getvalue() if fh is None else ""
