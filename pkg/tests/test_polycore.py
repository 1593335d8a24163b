import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intcheb.errors import DomainError
from intcheb.polycore import (
    FactorWeight,
    IntervalUnion,
    IntPoly,
    RationalPoint,
    eval_log_abs_weight,
    poly_roots,
    sup_norm,
    sup_norm_on_grid,
)

UNIT = IntervalUnion.single(0, 1)
small_polys = st.lists(st.integers(-9, 9), min_size=2, max_size=6).map(lambda c: IntPoly(tuple(c))).filter(
    lambda p: p.degree() >= 1
)


class TestIntPoly:
    def test_text_forms_agree(self):
        assert IntPoly.parse("-1,5") == IntPoly.parse("5z-1") == IntPoly((-1, 5))

    def test_trailing_zeros_stripped(self):
        p = IntPoly((1, 2, 0, 0))
        assert p.coeffs == (1, 2) and p.degree() == 1

    def test_zero_polynomial(self):
        assert IntPoly(()).degree() == -1 and IntPoly((0, 0)).is_zero()

    def test_rational_evaluation_is_exact(self):
        p = IntPoly((1, -6, 6))
        assert p(Fraction(1, 3)) == Fraction(-1, 3)

    def test_rejects_non_integer(self):
        with pytest.raises(TypeError):
            IntPoly((0.5, 1))

    @given(small_polys, small_polys)
    def test_product_division_roundtrip(self, p, q):
        assert (p * q).exact_quotient(q) == p


class TestRationalPoint:
    def test_reduced(self):
        r = RationalPoint(2, 0, 10)
        assert (r.p1, r.p2, r.q) == (1, 0, 5)

    def test_zero_convention(self):
        assert RationalPoint.parse("0").q == 1

    def test_complex_parse(self):
        r = RationalPoint.parse("1/2:1/3")
        assert (r.p1, r.p2, r.q) == (3, 2, 6)


class TestIntervalUnion:
    def test_merge_is_idempotent(self):
        E = IntervalUnion(((0, 1), (0.5, 2), (3, 4)))
        assert E.intervals == ((0.0, 2.0), (3.0, 4.0))
        assert IntervalUnion(E.intervals) == E

    def test_parse_fractions(self):
        assert IntervalUnion.parse("0:1/4").hi == 0.25

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            IntervalUnion.single(1, 0)


class TestLogWeight:
    def test_unit_modulus(self):
        assert eval_log_abs_weight(FactorWeight.parse("z:0.4"), 1.0) == 0.0

    def test_zero_sentinel(self):
        assert eval_log_abs_weight(FactorWeight.parse("z:0.4"), 0.0) == -math.inf

    def test_two_factor_value(self):
        # exact rationals first: |x| = 1/8, |4x - 1| = 1/2
        w = FactorWeight(((IntPoly((0, 1)), 0.5), (IntPoly((-1, 4)), 0.1)))
        want = (0.5 * math.log(Fraction(1, 8)) + 0.1 * math.log(Fraction(1, 2))) / (1 - 0.6)
        assert eval_log_abs_weight(w, 0.125) == pytest.approx(want, rel=1e-14)

    def test_alpha_total_below_one(self):
        with pytest.raises(DomainError):
            FactorWeight.parse("z:0.6,4z-1:0.5")

    def test_finite_off_roots(self):
        w = FactorWeight.parse("5z^2-5z+1:0.2")
        xs = np.linspace(0, 1, 1001)
        vals = np.array([eval_log_abs_weight(w, x) for x in xs])
        assert np.isfinite(vals).all()


class TestRoots:
    def test_linear(self):
        (r,) = poly_roots(IntPoly.parse("4z-1"))
        assert r.value == pytest.approx(0.25) and r.multiplicity == 1

    def test_quadratic(self):
        got = sorted(r.value.real for r in poly_roots(IntPoly((1, -5, 5))))
        assert got == pytest.approx([(5 - math.sqrt(5)) / 10, (5 + math.sqrt(5)) / 10], abs=1e-12)

    def test_conjugate_pair(self):
        got = sorted((r.value for r in poly_roots(IntPoly((1, 0, 1)))), key=lambda z: z.imag)
        assert got[0] == pytest.approx(-1j) and got[1] == pytest.approx(1j)

    def test_multiplicity(self):
        rs = poly_roots(IntPoly((0, 1, -1)) ** 3)
        assert sum(r.multiplicity for r in rs) == 6

    @given(small_polys)
    @settings(max_examples=50, deadline=None)
    def test_monic_reconstruction(self, p):
        roots = [r.value for r in poly_roots(p) for _ in range(r.multiplicity)]
        rebuilt = np.poly(roots)[::-1]
        want = np.array(p.coeffs, dtype=float) / p.leading
        scale = max(1.0, np.abs(want).max())
        assert np.allclose(rebuilt.real, want, atol=1e-6 * scale * p.degree())


class TestSupNorm:
    @pytest.mark.parametrize(
        "coeffs, want",
        [((0, -1, 1), 0.25), ((-1, 2), 1.0), ((0, -1, 3, -2), 1 / (6 * math.sqrt(3)))],
    )
    def test_known_values(self, coeffs, want):
        p = IntPoly(coeffs)
        assert sup_norm_on_grid(p, UNIT, 1000) == pytest.approx(want, abs=1e-12)
        assert sup_norm(p, UNIT) == pytest.approx(want, abs=1e-12)

    @given(small_polys)
    @settings(max_examples=40, deadline=None)
    def test_grid_never_exceeds_exact(self, p):
        assert sup_norm_on_grid(p, UNIT, 200) <= sup_norm(p, UNIT) * (1 + 1e-12) + 1e-12

    def test_monotone_in_density(self):
        p = IntPoly((1, -23, 194, -712, 961))
        E = IntervalUnion.single(0, 0.25)
        vals = [sup_norm_on_grid(p, E, d) for d in (10, 100, 1000, 10000)]
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))

    @given(small_polys)
    @settings(max_examples=30, deadline=None)
    def test_reflection_invariance(self, p):
        # p(1 - x) via composition with 1 - x
        q = p.compose(IntPoly((1, -1)))
        assert sup_norm_on_grid(q, UNIT, 500) == pytest.approx(sup_norm_on_grid(p, UNIT, 500), rel=1e-9)

    def test_high_degree_exact(self):
        p = IntPoly((0, 1, -1)) ** 20
        assert sup_norm(p, UNIT) == pytest.approx(0.25**20, rel=1e-12)
