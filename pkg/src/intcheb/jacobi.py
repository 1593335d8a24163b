"""Closed-form equilibrium data for the weight |z|^{2a1} |1-4z|^{a2} on [0, 1/4].

Everything here is explicit: support endpoints, modified Robin constant,
density, and the potential gap F_w - U^{mu_w}(z) expressed through Green
functions of the complement of the support (exterior conformal maps).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError
from .polycore import FactorWeight, IntPoly

QUARTER = 0.25
LOG4 = math.log(4.0)


@dataclass(frozen=True)
class TwoFactorParams:
    """Multiplicities (alpha1, alpha2) of x(1-x) and 2x-1 on [0,1].

    The weight on [0,1/4] uses exponents 2*alpha1 on z and alpha2 on 4z-1.
    The open triangle is 2*alpha1 + alpha2 < 1, alpha1, alpha2 > 0; the
    edges alpha1 = 0 or alpha2 = 0 are accepted as limits.
    """

    alpha1: float
    alpha2: float

    def __post_init__(self):
        a1, a2 = float(self.alpha1), float(self.alpha2)
        if not (a1 >= 0 and a2 >= 0 and 2 * a1 + a2 < 1):
            raise DomainError(f"({a1}, {a2}) is outside the triangle 2*alpha1 + alpha2 < 1")
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "alpha2", a2)

    @property
    def alpha_total(self) -> float:
        return 2 * self.alpha1 + self.alpha2

    @property
    def normalizer(self) -> float:
        return 1.0 - self.alpha_total

    def weight(self) -> FactorWeight:
        facs = []
        if self.alpha1 > 0:
            facs.append((IntPoly((0, 1)), 2 * self.alpha1))
        if self.alpha2 > 0:
            facs.append((IntPoly((-1, 4)), self.alpha2))
        return FactorWeight(tuple(facs))

    def log_weight(self, x):
        """log w(x) with the natural extension to complex x."""
        x = np.asarray(x)
        with np.errstate(divide="ignore"):
            out = np.zeros(x.shape)
            if self.alpha1 > 0:
                out = out + 2 * self.alpha1 * np.log(np.abs(x))
            if self.alpha2 > 0:
                out = out + self.alpha2 * np.log(np.abs(1 - 4 * x))
        out = out / self.normalizer
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class SupportInterval:
    a: float
    b: float
    delta: float

    @property
    def capacity(self) -> float:
        return (self.b - self.a) / 4.0


def _params(p) -> TwoFactorParams:
    if isinstance(p, TwoFactorParams):
        return p
    return TwoFactorParams(*p)


def support_endpoints(p: TwoFactorParams) -> SupportInterval:
    p = _params(p)
    a1, a2 = p.alpha1, p.alpha2
    delta = (1 - (2 * a1 + a2) ** 2) * (1 - (2 * a1 - a2) ** 2)
    s = math.sqrt(delta)
    a = (4 * a1 * a1 - a2 * a2 - s + 1) / 8
    b = (4 * a1 * a1 - a2 * a2 + s + 1) / 8
    # exact edges of the triangle
    if a1 == 0:
        a = 0.0
    if a2 == 0:
        b = QUARTER
    return SupportInterval(a, b, delta)


def robin_constant(p: TwoFactorParams) -> float:
    """Modified Robin constant F_w in closed form."""
    p = _params(p)
    S = support_endpoints(p)
    a, b, N = S.a, S.b, p.normalizer
    out = (1 - p.alpha2) / N * LOG4 - math.log(b - a)
    if p.alpha1 > 0:
        out -= 4 * p.alpha1 / N * math.log(math.sqrt(a) + math.sqrt(b))
    if p.alpha2 > 0:
        out -= 2 * p.alpha2 / N * math.log(math.sqrt(QUARTER - a) + math.sqrt(QUARTER - b))
    return out


def density_at(p: TwoFactorParams, x: float) -> float:
    """Density of the weighted equilibrium measure at x in [a, b]."""
    p = _params(p)
    S = support_endpoints(p)
    if not S.a <= x <= S.b:
        raise DomainError(f"x={x} outside the support [{S.a}, {S.b}]")
    if x == S.a or x == S.b:
        if (x == 0 and p.alpha1 == 0) or (x == QUARTER and p.alpha2 == 0):
            return math.inf
        return 0.0
    return math.sqrt((x - S.a) * (S.b - x)) / (math.pi * p.normalizer * x * (QUARTER - x))


def equilibrium_cdf(p: TwoFactorParams, x: float) -> float:
    """mu_w([a, x]) by quadrature in the angle variable x = a + (b-a) sin^2(t)."""
    p = _params(p)
    S = support_endpoints(p)
    if x <= S.a:
        return 0.0
    if x >= S.b:
        return 1.0
    t_hi = math.asin(math.sqrt((x - S.a) / (S.b - S.a)))
    val, _ = integrate.quad(lambda t: _angle_density(p, S, t), 0.0, t_hi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def _angle_density(p: TwoFactorParams, S: SupportInterval, t: float) -> float:
    st, ct = math.sin(t), math.cos(t)
    x = S.a + (S.b - S.a) * st * st
    w = S.b - S.a
    return 2 * w * w * st * st * ct * ct / (math.pi * p.normalizer * x * (QUARTER - x))


# ---------------------------------------------------------------------------
# Green functions of the complement of [a, b]
# ---------------------------------------------------------------------------


def _max_branch(first: complex, root: complex, denom: complex) -> complex:
    u = (first + root) / denom
    v = (first - root) / denom
    return u if abs(u) >= abs(v) else v


def phi_infinity(z: complex, a: float, b: float) -> complex:
    """Exterior map of C minus [a, b] onto |w| > 1 with infinity -> infinity."""
    z = complex(z)
    r = 2 * cmath.sqrt((z - a) * (z - b))
    return _max_branch(2 * z - a - b, r, b - a)


def phi_pole(z: complex, c: float, a: float, b: float) -> complex:
    """Exterior map sending the finite pole c (outside [a, b]) to infinity."""
    u = 1 / (complex(z) - c)
    ia, ib = 1 / (a - c), 1 / (b - c)
    r = 2 * cmath.sqrt((u - ia) * (u - ib))
    return _max_branch(2 * u - ib - ia, r, ib - ia)


def _log_dist_plus_green(z: complex, c: float, a: float, b: float) -> float:
    """log|z - c| + g(z, c), finite at z = c.

    Uses (z - c) * Phi_c(z) = (2 - d(p+q) +- 2 sqrt((1-dp)(1-dq))) / (p - q)
    with d = z - c, p = 1/(b-c), q = 1/(a-c), which has no singularity at d = 0.
    """
    d = complex(z) - c
    p, q = 1 / (b - c), 1 / (a - c)
    r = 2 * cmath.sqrt((1 - d * p) * (1 - d * q))
    return math.log(abs(_max_branch(2 - d * (p + q), r, p - q)))


@dataclass(frozen=True)
class GreenEvaluator:
    """g(z, pole) for the complement of [a, b]; pole is ``math.inf``, 0.0 or 0.25."""

    support: SupportInterval
    pole: float

    def __call__(self, z: complex) -> float:
        a, b = self.support.a, self.support.b
        if math.isinf(self.pole):
            return math.log(abs(phi_infinity(z, a, b)))
        if complex(z) == self.pole:
            return math.inf
        return math.log(abs(phi_pole(z, self.pole, a, b)))


def potential_gap(p: TwoFactorParams, z: complex) -> float:
    """F_w - U^{mu_w}(z), continuous on C and harmonic off [a, b]."""
    p = _params(p)
    S = support_endpoints(p)
    a, b = S.a, S.b
    out = math.log(abs(phi_infinity(z, a, b)))
    if p.alpha1 > 0:
        out -= 2 * p.alpha1 * _log_dist_plus_green(z, 0.0, a, b)
    if p.alpha2 > 0:
        out -= p.alpha2 * (LOG4 + _log_dist_plus_green(z, QUARTER, a, b))
    return out / p.normalizer


def green_at_infinity_of_zeros(p: TwoFactorParams) -> dict[float, float]:
    """g(z_j, infinity) at the factor zeros 0 and 1/4."""
    S = support_endpoints(_params(p))
    g = GreenEvaluator(S, math.inf)
    return {0.0: g(0.0), QUARTER: g(QUARTER)}


# ---------------------------------------------------------------------------
# Weighted capacity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


def integral_log_weight(p: TwoFactorParams, measure: str = "equilibrium") -> QuadResult:
    """Integral of log w against mu_w (``"equilibrium"``) or the arcsine measure of [a, b] (``"harmonic"``)."""
    p = _params(p)
    S = support_endpoints(p)
    w = S.b - S.a

    def x_of(t):
        return S.a + w * math.sin(t) ** 2

    if measure == "equilibrium":
        f = lambda t: p.log_weight(x_of(t)) * _angle_density(p, S, t)  # noqa: E731
    elif measure == "harmonic":
        f = lambda t: p.log_weight(x_of(t)) * (2 / math.pi)  # noqa: E731
    else:
        raise ValueError(f"unknown measure {measure!r}")
    if p.alpha_total == 0:
        return QuadResult(0.0, 0.0)
    val, err = integrate.quad(f, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return QuadResult(val, err)


def weighted_capacity(p: TwoFactorParams, route: str = "robin") -> QuadResult:
    """cap([0,1/4], w) in log form, returned as exp.

    route ``"robin"``: exp(int log w dmu_w - F_w).
    route ``"harmonic"``: cap(S_w) exp(int log w d(omega + mu_w)).
    """
    p = _params(p)
    eq = integral_log_weight(p, "equilibrium")
    if route == "robin":
        log_cap = eq.value - robin_constant(p)
        err = eq.error
    elif route == "harmonic":
        hm = integral_log_weight(p, "harmonic")
        log_cap = math.log(support_endpoints(p).capacity) + hm.value + eq.value
        err = eq.error + hm.error
    else:
        raise ValueError(f"unknown route {route!r}")
    cap = math.exp(log_cap)
    return QuadResult(cap, cap * err)


def robin_from_green(p: TwoFactorParams) -> float:
    """F_w from cap(S_w), leading coefficients and g(z_j, infinity).

    Independent of the closed-form Robin constant; used as a consistency check.
    """
    p = _params(p)
    S = support_endpoints(p)
    g = green_at_infinity_of_zeros(p)
    total = math.log(S.capacity)
    if p.alpha1 > 0:
        total += 2 * p.alpha1 * g[0.0]
    if p.alpha2 > 0:
        total += p.alpha2 * (LOG4 + g[QUARTER])
    return total / (p.alpha_total - 1)


def log_capacity_from_gaps(p: TwoFactorParams) -> float:
    """log cap([0,1/4], w) without quadrature.

    For c outside the support, int log|x - c| dmu_w = -U^{mu_w}(c), which is
    potential_gap(c) - F_w.  Summing over the factor zeros gives
    int log w dmu_w, and log cap = int log w dmu_w - F_w follows.
    """
    p = _params(p)
    F = robin_constant(p)
    total = 0.0
    if p.alpha1 > 0:
        total += 2 * p.alpha1 * (potential_gap(p, 0.0) - F)
    if p.alpha2 > 0:
        total += p.alpha2 * (LOG4 + potential_gap(p, QUARTER) - F)
    return total / p.normalizer - F


# ---------------------------------------------------------------------------
# Vectorized forms for lattice sweeps
# ---------------------------------------------------------------------------


def _max_branch_arr(first, root, denom):
    u = (first + root) / denom
    v = (first - root) / denom
    return np.where(np.abs(u) >= np.abs(v), u, v)


def _ldpg_arr(z, c, a, b):
    d = z - c
    p, q = 1 / (b - c), 1 / (a - c)
    r = 2 * np.sqrt((1 - d * p) * (1 - d * q))
    return np.log(np.abs(_max_branch_arr(2 - d * (p + q), r, p - q)))


def _key(z):
    z = complex(z)
    return z.real if z.imag == 0 else z


def sweep_arrays(alpha1, alpha2, zetas=(0.0, QUARTER)):
    """Closed-form data on arrays of strictly interior parameters.

    Returns (alpha_total, robin, {zeta: potential_gap}, log_capacity), all
    arrays broadcast from ``alpha1`` and ``alpha2``.  Both multiplicities
    must be positive so that 0 and 1/4 lie off the support.
    """
    a1 = np.asarray(alpha1, dtype=float)
    a2 = np.asarray(alpha2, dtype=float)
    a1, a2 = np.broadcast_arrays(a1, a2)
    if np.any(a1 <= 0) or np.any(a2 <= 0) or np.any(2 * a1 + a2 >= 1):
        raise DomainError("sweep_arrays needs points of the open triangle")
    tot = 2 * a1 + a2
    N = 1 - tot
    s = np.sqrt((1 - tot**2) * (1 - (2 * a1 - a2) ** 2))
    a = (4 * a1 * a1 - a2 * a2 - s + 1) / 8
    b = (4 * a1 * a1 - a2 * a2 + s + 1) / 8
    F = (
        (1 - a2) / N * LOG4
        - np.log(b - a)
        - 4 * a1 / N * np.log(np.sqrt(a) + np.sqrt(b))
        - 2 * a2 / N * np.log(np.sqrt(QUARTER - a) + np.sqrt(QUARTER - b))
    )
    a = a.astype(complex)
    b = b.astype(complex)

    def gap(z):
        z = complex(z)
        rt = 2 * np.sqrt((z - a) * (z - b))
        g_inf = np.log(np.abs(_max_branch_arr(2 * z - a - b, rt, b - a)))
        out = g_inf - 2 * a1 * _ldpg_arr(z, 0.0, a, b) - a2 * (LOG4 + _ldpg_arr(z, QUARTER, a, b))
        return out / N

    gaps = {_key(z): gap(z) for z in zetas}
    g0 = gaps[0.0] if 0.0 in gaps else gap(0.0)
    gq = gaps[QUARTER] if QUARTER in gaps else gap(QUARTER)
    log_cap = (2 * a1 * (g0 - F) + a2 * (LOG4 + gq - F)) / N - F
    return tot, F, gaps, log_cap
