"""Integer polynomials, evaluation domains and log-domain weight evaluation.

Coefficients are exact Python integers; everything analytic is float64.
Products of many small factors are always accumulated as sums of logs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DomainError, NonConvergence

_MINUS_SIGNS = str.maketrans({"−": "-", "–": "-"})
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class IntPoly:
    """Dense polynomial with integer coefficients, ascending order c0..cn.

    The zero polynomial has ``coeffs == ()`` and degree -1.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        for c in self.coeffs:
            if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                if isinstance(c, (float, Fraction)) and c == int(c):
                    continue
                raise TypeError(f"non-integer coefficient {c!r}")
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    # construction -----------------------------------------------------

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPoly:
        return cls((0,) * k + (c,))

    @classmethod
    def parse(cls, text: str) -> IntPoly:
        """Parse ``"-1,5"`` (ascending coefficients) or ``"5z-1"`` style text."""
        s = text.translate(_MINUS_SIGNS).strip()
        if s.startswith("[") and s.endswith("]"):
            s = s[1:-1]
        if re.fullmatch(r"\s*[+-]?\d+(\s*,\s*[+-]?\d+)*\s*", s):
            return cls(tuple(int(t) for t in s.split(",")))
        return cls._parse_expression(s)

    @classmethod
    def _parse_expression(cls, s: str) -> IntPoly:
        s = s.replace(" ", "").replace("**", "^")
        if not s:
            raise ValueError("empty polynomial text")
        term_re = re.compile(r"([+-]?)(\d*)\*?([zx](?:\^(\d+))?)?")
        pos = 0
        acc: dict[int, int] = {}
        while pos < len(s):
            m = term_re.match(s, pos)
            if m is None or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse polynomial {s!r} at position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                power = int(m.group(4)) if m.group(4) else 1
            else:
                power = 0
            acc[power] = acc.get(power, 0) + sign * coef
            pos = m.end()
            if pos < len(s) and s[pos] not in "+-":
                raise ValueError(f"cannot parse polynomial {s!r} at position {pos}")
        deg = max(acc)
        return cls(tuple(acc.get(k, 0) for k in range(deg + 1)))

    # basic properties -----------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f"{sign}{body}"
        return out

    # evaluation -----------------------------------------------------

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction input, numpy otherwise."""
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            acc = Fraction(0) if isinstance(x, Fraction) else 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = np.asarray(x)
        acc = np.zeros_like(x, dtype=np.result_type(x.dtype, np.float64))
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc if acc.ndim else acc[()]

    def derivative(self) -> IntPoly:
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:])

    # arithmetic -------------------------------------------------------

    def __add__(self, other: IntPoly) -> IntPoly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> IntPoly:
        return _as_poly(other) - self

    def __mul__(self, other) -> IntPoly:
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPoly:
        if k < 0:
            raise ValueError("negative power")
        result = IntPoly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def compose(self, inner: IntPoly) -> IntPoly:
        """Return ``self(inner(z))``."""
        acc = IntPoly(())
        for c in reversed(self.coeffs):
            acc = acc * inner + IntPoly((c,))
        return acc

    def divmod_rational(self, divisor: IntPoly) -> tuple[list[Fraction], list[Fraction]]:
        """Polynomial long division over Q; returns (quotient, remainder) coefficient lists."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        dd = divisor.degree()
        lead = Fraction(divisor.leading)
        if len(rem) - 1 < dd:
            return [], rem
        quot = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(divisor.coeffs):
                    rem[k + j] -= q * c
        rem = rem[:dd]
        while rem and rem[-1] == 0:
            rem.pop()
        return quot, rem

    def exact_quotient(self, divisor: IntPoly) -> IntPoly | None:
        """Quotient if ``divisor`` divides ``self`` in Z[z], else None."""
        quot, rem = self.divmod_rational(divisor)
        if rem or any(q.denominator != 1 for q in quot):
            return None
        return IntPoly(tuple(int(q) for q in quot))

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0


def _as_poly(x) -> IntPoly:
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, (int, np.integer)):
        return IntPoly((int(x),))
    raise TypeError(f"cannot combine IntPoly with {type(x).__name__}")


Z = IntPoly((0, 1))


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------


class Root(NamedTuple):
    value: complex
    multiplicity: int


def _rational_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(list(a)), trim(list(b))
    while b:
        # a mod b
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            q = r[-1] / b[-1]
            shift = len(r) - 1 - db
            for j, c in enumerate(b):
                r[shift + j] -= q * c
            r.pop()
            trim(r)
        a, b = b, r
    return [c / a[-1] for c in a]


def _squarefree_parts(p: IntPoly) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm over Q: [(squarefree factor, multiplicity), ...]."""
    f = [Fraction(c) for c in p.coeffs]
    df = [Fraction(k * c) for k, c in enumerate(p.coeffs)][1:]

    a0 = _rational_gcd(f, df)
    b = _fdiv(f, a0)
    c = _fdiv(df, a0)
    d = _fsub(c, _fderiv(b))
    parts = []
    i = 1
    while len(b) > 1:
        a = _rational_gcd(b, d)
        if len(a) > 1:
            parts.append((a, i))
        b = _fdiv(b, a)
        c = _fdiv(d, a)
        d = _fsub(c, _fderiv(b))
        i += 1
    return parts


def _fdiv(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [Fraction(0)]
    quot = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        q = r[k + db] / b[-1]
        quot[k] = q
        for j, c in enumerate(b):
            r[k + j] -= q * c
    while len(quot) > 1 and quot[-1] == 0:
        quot.pop()
    return quot


def _fsub(a, b):
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return [Fraction(c) for c in out]


def _fderiv(a):
    out = [k * c for k, c in enumerate(a)][1:]
    return out or [Fraction(0)]


def _polish(coeffs_desc: np.ndarray, r: complex, steps: int = 8) -> tuple[complex, float]:
    dcoeffs = np.polyder(coeffs_desc)
    step = 0.0
    for _ in range(steps):
        fp = np.polyval(dcoeffs, r)
        if fp == 0:
            break
        step = np.polyval(coeffs_desc, r) / fp
        r = r - step
        if abs(step) <= 1e-17 * max(1.0, abs(r)):
            break
    fp = np.polyval(dcoeffs, r)
    err = abs(np.polyval(coeffs_desc, r) / fp) if fp != 0 else math.inf
    return complex(r), float(max(err, abs(step)))


def poly_roots(p: IntPoly, tol: float = 1e-10) -> list[Root]:
    """Complex roots with multiplicities.

    Multiplicities come from an exact square-free decomposition over Q, so
    each numerical root-finding call sees only simple roots.  Real roots are
    returned with zero imaginary part and complex roots as exact conjugate
    pairs.  Raises NonConvergence if a root cannot be certified to ``tol``
    by its final Newton correction.
    """
    if p.is_zero() or p.degree() < 1:
        raise DomainError("poly_roots needs a nonzero polynomial of degree >= 1")
    out: list[Root] = []
    for part, mult in _squarefree_parts(p):
        desc = np.array([float(c) for c in reversed(part)])
        raw = np.roots(desc)
        polished = []
        for r in raw:
            val, err = _polish(desc, complex(r))
            if not err <= tol:
                raise NonConvergence(f"root {val} of {p} only certified to {err:.3g} > tol={tol:g}")
            polished.append(val)
        # enforce conjugate symmetry
        reals = [complex(v.real, 0.0) for v in polished if abs(v.imag) <= tol]
        upper = sorted((v for v in polished if v.imag > tol), key=lambda v: (v.real, v.imag))
        lower = sorted((v for v in polished if v.imag < -tol), key=lambda v: (v.real, -v.imag))
        if len(upper) != len(lower):
            raise NonConvergence(f"unpaired complex roots for {p}")
        for u, l in zip(upper, lower):
            v = complex((u.real + l.real) / 2, (u.imag - l.imag) / 2)
            out.append(Root(v, mult))
            out.append(Root(v.conjugate(), mult))
        out.extend(Root(v, mult) for v in reals)
    out.sort(key=lambda r: (r.value.real, r.value.imag))
    return out


# ---------------------------------------------------------------------------
# Domains and rational points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalUnion:
    """Finite union of closed real intervals, normalized to be sorted and disjoint."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = []
        for lo, hi in self.intervals:
            lo, hi = float(lo), float(hi)
            if not lo <= hi:
                raise DomainError(f"interval [{lo}, {hi}] has lo > hi")
            ivs.append((lo, hi))
        ivs.sort()
        merged: list[tuple[float, float]] = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def single(cls, lo: float, hi: float) -> IntervalUnion:
        return cls(((lo, hi),))

    @classmethod
    def parse(cls, text: str) -> IntervalUnion:
        """Parse ``"0:0.25"`` or ``"0:1/5,1/4:1/3"`` (fractions allowed)."""
        ivs = []
        for chunk in text.translate(_MINUS_SIGNS).replace(" ", "").split(","):
            chunk = chunk.strip("[]")
            lo, hi = chunk.split(":")
            ivs.append((float(Fraction(lo)), float(Fraction(hi))))
        return cls(tuple(ivs))

    def to_text(self) -> str:
        return ",".join(f"{lo!r}:{hi!r}" for lo, hi in self.intervals)

    @property
    def lo(self) -> float:
        return self.intervals[0][0]

    @property
    def hi(self) -> float:
        return self.intervals[-1][1]

    def hull(self) -> tuple[float, float]:
        return self.lo, self.hi

    def length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def distance(self, z: complex) -> float:
        """Euclidean distance from a complex point to the set."""
        z = complex(z)
        best = math.inf
        for lo, hi in self.intervals:
            dx = 0.0 if lo <= z.real <= hi else min(abs(z.real - lo), abs(z.real - hi))
            best = min(best, math.hypot(dx, z.imag))
        return best

    def grid(self, density: float) -> np.ndarray:
        """Uniform grid with about ``density`` points per unit length, endpoints included."""
        parts = []
        for lo, hi in self.intervals:
            m = max(2, int(math.ceil((hi - lo) * density)) + 1) if hi > lo else 1
            parts.append(np.linspace(lo, hi, m))
        return np.concatenate(parts)

    def is_symmetric(self, tol: float = 0.0) -> bool:
        c = 0.5 * (self.lo + self.hi)
        mirrored = IntervalUnion(tuple((2 * c - hi, 2 * c - lo) for lo, hi in self.intervals))
        return all(
            abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol
            for a, b in zip(self.intervals, mirrored.intervals)
        ) and len(self.intervals) == len(mirrored.intervals)


@dataclass(frozen=True)
class RationalPoint:
    """Complex rational (p1 + i p2)/q in lowest terms, q > 0."""

    p1: int
    p2: int = 0
    q: int = 1

    def __post_init__(self):
        p1, p2, q = int(self.p1), int(self.p2), int(self.q)
        if q == 0:
            raise DomainError("denominator must be nonzero")
        if q < 0:
            p1, p2, q = -p1, -p2, -q
        g = math.gcd(math.gcd(p1, p2), q)
        object.__setattr__(self, "p1", p1 // g)
        object.__setattr__(self, "p2", p2 // g)
        object.__setattr__(self, "q", q // g)

    @classmethod
    def from_fractions(cls, re_part, im_part=0) -> RationalPoint:
        re_part, im_part = Fraction(re_part), Fraction(im_part)
        q = re_part.denominator * im_part.denominator // math.gcd(
            re_part.denominator, im_part.denominator
        )
        return cls(int(re_part * q), int(im_part * q), q)

    @classmethod
    def parse(cls, text: str) -> RationalPoint:
        """``"1/5"`` for a real point, ``"1/5:1/3"`` for real:imaginary parts."""
        text = text.translate(_MINUS_SIGNS).strip()
        if ":" in text:
            re_s, im_s = text.split(":")
            return cls.from_fractions(Fraction(re_s), Fraction(im_s))
        return cls.from_fractions(Fraction(text))

    def to_text(self) -> str:
        re_part = Fraction(self.p1, self.q)
        if self.p2 == 0:
            return str(re_part)
        return f"{re_part}:{Fraction(self.p2, self.q)}"

    @property
    def value(self) -> complex:
        return complex(self.p1 / self.q, self.p2 / self.q)


# ---------------------------------------------------------------------------
# Weights built from integer factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FactorWeight:
    """w(z) = (prod |Q_i(z)|^{alpha_i})^{1/(1-alpha)}, alpha = sum alpha_i deg Q_i.

    An empty factor list is the unit weight.  Factor roots are computed once
    here and cached.
    """

    factors: tuple[tuple[IntPoly, float], ...] = ()
    _roots: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        facs = []
        for poly, expo in self.factors:
            if not isinstance(poly, IntPoly):
                poly = IntPoly.parse(poly) if isinstance(poly, str) else IntPoly(tuple(poly))
            expo = float(expo)
            if poly.degree() < 1:
                raise DomainError(f"weight factor {poly} is constant")
            if not expo > 0:
                raise DomainError(f"weight exponent {expo} must be positive")
            facs.append((poly, expo))
        object.__setattr__(self, "factors", tuple(facs))
        if not self.alpha_total < 1:
            raise DomainError(f"sum of exponent*degree = {self.alpha_total} must be < 1")
        roots = tuple(
            tuple(r.value for r in poly_roots(poly) for _ in range(r.multiplicity))
            for poly, _ in facs
        )
        object.__setattr__(self, "_roots", roots)

    @classmethod
    def parse(cls, text: str) -> FactorWeight:
        """``"z:0.5,4z-1:0.1"``; bracketed coefficient lists like ``"[-1,4]:0.1"`` also work."""
        if not text.strip():
            return cls(())
        return cls(tuple((p, float(e)) for p, e in split_factor_specs(text)))

    def to_text(self) -> str:
        return ",".join(f"{p}:{e!r}" for p, e in self.factors)

    @property
    def alpha_total(self) -> float:
        return sum(e * p.degree() for p, e in self.factors)

    @property
    def scale(self) -> float:
        return 1.0 / (1.0 - self.alpha_total)

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def zeros(self) -> list[complex]:
        return [z for rs in self._roots for z in rs]

    def factor_roots(self) -> tuple[tuple[complex, ...], ...]:
        return self._roots

    def log_abs(self, x) -> np.ndarray | float:
        """log w(x), vectorized; -inf exactly where a factor evaluates to zero."""
        x = np.asarray(x)
        out = np.zeros(x.shape, dtype=float)
        if not self.factors:
            return out if out.ndim else float(out)
        with np.errstate(divide="ignore"):
            for (poly, expo), roots in zip(self.factors, self._roots):
                acc = np.full(x.shape, math.log(abs(poly.leading)))
                for r in roots:
                    acc = acc + np.log(np.abs(x - r))
                exact_zero = poly(x) == 0
                acc = np.where(exact_zero, -np.inf, acc)
                out = out + expo * acc
        out = out * self.scale
        return out if out.ndim else float(out)

    def dlog_abs(self, x: np.ndarray | float):
        """First and second derivatives of log w at real x."""
        x = np.asarray(x, dtype=float)
        d1 = np.zeros(x.shape)
        d2 = np.zeros(x.shape)
        for (_, expo), roots in zip(self.factors, self._roots):
            for r in roots:
                inv = 1.0 / (x - r)
                d1 = d1 + expo * inv.real
                d2 = d2 - expo * (inv * inv).real
        return d1 * self.scale, d2 * self.scale


def split_factor_specs(text: str) -> list[tuple[str, str]]:
    """Split ``"z:*,[-1,4]:0.1"`` into [("z", "*"), ("[-1,4]", "0.1")].

    Extra ``:``-separated fields after the exponent are kept in the second
    element (e.g. ``"z:*:2"`` yields ("z", "*:2")).
    """
    chunks, depth, cur = [], 0, ""
    for ch in text.translate(_MINUS_SIGNS):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            chunks.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        chunks.append(cur)
    out = []
    for chunk in chunks:
        chunk = chunk.strip()
        if ":" not in chunk:
            raise ValueError(f"factor spec {chunk!r} must look like POLY:EXPONENT")
        poly, rest = chunk.split(":", 1)
        out.append((poly.strip(), rest.strip()))
    return out


def eval_log_abs_weight(w: FactorWeight, x: float) -> float:
    """log w(x); ``-inf`` at factor zeros."""
    return float(w.log_abs(float(x)))


# ---------------------------------------------------------------------------
# Sup norms
# ---------------------------------------------------------------------------


def golden_max(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200):
    """Golden-section search for a maximum of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def _local_max_indices(v: np.ndarray) -> np.ndarray:
    n = len(v)
    if n == 1:
        return np.array([0])
    left = np.concatenate(([-np.inf], v[:-1]))
    right = np.concatenate((v[1:], [-np.inf]))
    return np.nonzero((v >= left) & (v >= right))[0]


def sup_norm_argmax(p: IntPoly, E: IntervalUnion, grid_density: int) -> tuple[float, float]:
    """(x*, |p(x*)|) for the grid-plus-refinement sup-norm estimate.

    Ties go to the smallest coordinate.
    """
    if E.is_empty():
        raise DomainError("empty domain")
    best_x, best_v = math.nan, -math.inf
    fabs = lambda t: abs(float(p(t)))  # noqa: E731
    for lo, hi in E.intervals:
        xs = IntervalUnion.single(lo, hi).grid(grid_density)
        vals = np.abs(p(xs))
        for i in _local_max_indices(vals):
            x, v = float(xs[i]), float(vals[i])
            if 0 < i < len(xs) - 1:
                xr, vr = golden_max(fabs, float(xs[i - 1]), float(xs[i + 1]))
                if vr > v:
                    x, v = xr, vr
            if v > best_v or (v == best_v and x < best_x):
                best_x, best_v = x, v
    return best_x, best_v


def sup_norm_on_grid(p: IntPoly, E: IntervalUnion, grid_density: int = 1000) -> float:
    """Estimate of sup |p| over E: grid maximum refined by golden-section in each bracketing cell."""
    return sup_norm_argmax(p, E, grid_density)[1]


def sup_norm(p: IntPoly, E: IntervalUnion) -> float:
    """Sup norm on a real interval union from endpoints and real critical points."""
    if p.is_zero():
        return 0.0
    cands = []
    for lo, hi in E.intervals:
        cands.extend([lo, hi])
    dp = p.derivative()
    if dp.degree() >= 1:
        for r in poly_roots(dp, tol=1e-8):
            if abs(r.value.imag) <= 1e-9 and E.contains(r.value.real):
                cands.append(r.value.real)
    # exact rational evaluation: float Horner loses everything to cancellation at high degree
    return float(max(abs(p(Fraction(float(c)))) for c in cands))


# ---------------------------------------------------------------------------
# Known factor tables
# ---------------------------------------------------------------------------

# Irreducible factors of small integer polynomials on [0,1] ...
FACTORS_UNIT_INTERVAL: tuple[tuple[str, IntPoly], ...] = (
    ("A1", IntPoly((0, 1, -1))),
    ("A2", IntPoly((-1, 2))),
    ("A3", IntPoly((1, -5, 5))),
    ("A4", IntPoly((1, -6, 6))),
    ("A5", IntPoly((1, -11, 40, -58, 29))),
    ("A6", IntPoly((-1, 9, -20, 13)) * IntPoly((-1, 8, -19, 13))),
    ("A7", IntPoly((1, -12, 44, -63, 31)) * IntPoly((1, -11, 41, -61, 31))),
    (
        "A8",
        IntPoly((1, -28, 338, -2317, 9995, -28388, 53866, -67586, 53804, -24605, 4921)),
    ),
)

# ... and their images under z = x(1-x) on [0,1/4].  The third entry is the
# factor by which a multiplicity on [0,1] converts to an exponent on [0,1/4].
FACTORS_QUARTER_INTERVAL: tuple[tuple[str, IntPoly, int], ...] = (
    ("Q11", IntPoly((0, 1)), 2),
    ("Q12", IntPoly((-1, 4)), 1),
    ("Q13", IntPoly((-1, 5)), 2),
    ("Q14", IntPoly((-1, 6)), 2),
    ("Q25", IntPoly((1, -11, 29)), 2),
    ("Q36", IntPoly((-1, 17, -94, 169)), 2),
    ("Q47", IntPoly((1, -23, 194, -712, 961)), 2),
    ("Q58", IntPoly((-1, 28, -310, 1697, -4594, 4921)), 2),
)


def pullback_scale(poly: IntPoly) -> int | None:
    """Multiplicity conversion factor for a tabulated [0,1/4] factor (up to sign), else None."""
    for _, q, s in FACTORS_QUARTER_INTERVAL:
        if poly == q or poly == -q:
            return s
    return None


def x_one_minus_x() -> IntPoly:
    return IntPoly((0, 1, -1))
