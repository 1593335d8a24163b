import functools
import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from intcheb.errors import BudgetTooSmall, DomainError, LengthMismatch, SingularNodes
from intcheb.exact_search import (
    brute_force_search,
    chebyshev_box,
    factor_analyze,
    hilbert_fekete_construct,
    search_integer_chebyshev,
    symmetry_reduce,
)
from intcheb.leja import leja_sequence
from intcheb.polycore import FactorWeight, IntervalUnion, IntPoly, sup_norm

UNIT = IntervalUnion.single(0, 1)
QUARTER = IntervalUnion.single(0, 0.25)
U = IntPoly((0, 1, -1))  # x(1-x)


@functools.lru_cache(maxsize=None)
def optimum(n, E=UNIT):
    return search_integer_chebyshev(E, n)


def markov_oracle(n, budget):
    """Independent enumeration: monomial coefficients of a polynomial with sup norm <= B
    on [0,1] are bounded by B times those of the shifted Chebyshev polynomial."""
    T = np.polynomial.chebyshev.cheb2poly([0] * n + [1])
    # coefficients of T_n(2x - 1) in ascending order
    t = np.polynomial.Polynomial(np.polynomial.chebyshev.cheb2poly([0] * n + [1]))
    s = t(np.polynomial.Polynomial([-1, 2])).coef
    bounds = [int(math.floor(budget * abs(c) + 1e-9)) for c in s]
    xs = np.linspace(0, 1, 4001)
    V = np.vander(xs, n + 1, increasing=True)
    best = math.inf
    for c in itertools.product(*(range(-b, b + 1) for b in bounds)):
        if not any(c):
            continue
        if np.max(np.abs(V @ np.array(c, dtype=float))) > best * (1 + 1e-6):
            continue
        best = min(best, sup_norm(IntPoly(c), UNIT))
    return best


class TestSearch:
    def test_degree_one(self):
        rec = optimum(1)
        assert rec.norm == 1.0
        assert IntPoly((-1, 2)) in rec.ties or IntPoly((1, -2)) in rec.ties

    def test_degree_two(self):
        rec = optimum(2)
        assert rec.norm == 0.25 and rec.polynomial in (U, -U)

    def test_degree_three(self):
        rec = optimum(3)
        assert rec.norm == pytest.approx(1 / (6 * math.sqrt(3)), rel=1e-12)
        assert rec.polynomial in (U * IntPoly((-1, 2)), -(U * IntPoly((-1, 2))))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_against_brute_force(self, n):
        rec = optimum(n)
        bf = brute_force_search(UNIT, n, rec.diagnostics["budget"])
        assert bf.norm == pytest.approx(rec.norm, rel=1e-9)
        assert bf.polynomial == rec.polynomial
        assert set(bf.ties) == set(rec.ties)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_against_markov_enumeration(self, n):
        assert markov_oracle(n, optimum(n).diagnostics["budget"]) == pytest.approx(optimum(n).norm, rel=1e-9)

    def test_quarter_interval(self):
        rec = search_integer_chebyshev(QUARTER, 2)
        assert rec.norm == pytest.approx(optimum(4).norm, rel=1e-9)

    def test_monotone(self):
        norms = [optimum(n).norm for n in range(1, 6)]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))

    def test_budget_too_small(self):
        with pytest.raises(BudgetTooSmall):
            search_integer_chebyshev(UNIT, 2, norm_budget=0.2)

    def test_degree_cap(self):
        with pytest.raises(DomainError):
            search_integer_chebyshev(UNIT, 11)

    def test_record_roundtrip(self):
        rec = optimum(4)
        assert rec.reconstruct() == rec.polynomial
        d = json.loads(rec.to_json())
        assert IntPoly(tuple(d["polynomial"])) == rec.polynomial
        used = sum(f.multiplicity * f.factor.degree() for f in rec.factors)
        assert used + max(rec.residual.degree(), 0) == rec.polynomial.degree()
        assert abs(rec.residual.leading) >= 1

    def test_beats_factor_products(self):
        # no product of tabulated factors of degree <= 5 beats the optimum
        rec = optimum(5)
        facs = [IntPoly((0, 1, -1)), IntPoly((-1, 2)), IntPoly((1, -5, 5)), IntPoly((1, -6, 6))]
        for e in itertools.product(range(3), range(5), range(3), range(3)):
            deg = sum(k * f.degree() for k, f in zip(e, facs))
            if 1 <= deg <= 5:
                p = IntPoly((1,))
                for k, f in zip(e, facs):
                    p = p * f**k
                assert rec.norm <= sup_norm(p, UNIT) * (1 + 1e-12)

    def test_box_grows_with_budget(self):
        assert all(a <= b for a, b in zip(chebyshev_box(UNIT, 4, 0.1), chebyshev_box(UNIT, 4, 0.2)))


class TestSymmetry:
    def test_even(self):
        r = symmetry_reduce(IntPoly((0, -1, 1)))
        assert r.parity == "even" and r.q == IntPoly((0, -1))

    def test_odd(self):
        # (2x - 1)(x^2 - x) = (1 - 2x) * z with z = x(1 - x)
        r = symmetry_reduce(IntPoly((-1, 2)) * IntPoly((0, -1, 1)))
        assert r.parity == "odd" and r.q == IntPoly((0, 1))

    def test_not_symmetric(self):
        assert symmetry_reduce(IntPoly((0, 0, 0, 1))) is None

    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=5), st.booleans())
    def test_roundtrip(self, coeffs, odd):
        q = IntPoly(tuple(coeffs))
        p = q.compose(U) * (IntPoly((1, -2)) if odd else IntPoly((1,)))
        r = symmetry_reduce(p)
        if q.is_zero():
            assert r is not None and r.q.is_zero()
        else:
            assert r.q == q and r.parity == ("odd" if odd else "even")

    @pytest.mark.parametrize("n", [2, 4])
    def test_even_optimum_reduces(self, n):
        r = symmetry_reduce(optimum(n).polynomial)
        assert r is not None and r.parity == "even"
        assert sup_norm(r.q, QUARTER) == pytest.approx(optimum(n).norm, rel=1e-12)


class TestFactorAnalyze:
    def test_square(self):
        rows, rest = factor_analyze(U * U, n=4)
        a1 = rows[0]
        assert a1.multiplicity == 2 and a1.ratio == 0.5 and rest == IntPoly((1,))

    def test_residual(self):
        p = U * IntPoly((3, 0, 1))
        rows, rest = factor_analyze(p)
        assert rest == IntPoly((3, 0, 1)) and rows[0].multiplicity == 1

    def test_zero(self):
        with pytest.raises(DomainError):
            factor_analyze(IntPoly(()))


class TestConstruction:
    def test_degree_two_unweighted(self):
        nodes = leja_sequence(UNIT, FactorWeight(()), 2, 20_000).points
        c = hilbert_fekete_construct(UNIT, FactorWeight(()), 2, nodes)
        assert not c.polynomial.is_zero()
        assert c.certified_bound >= 0.25
        assert c.certified_bound <= 3 * max(abs(v) for v in c.forms) * (1 + 1e-12)

    def test_forms_are_values(self):
        nodes = leja_sequence(UNIT, FactorWeight(()), 6, 20_000).points
        c = hilbert_fekete_construct(UNIT, FactorWeight(()), 6, nodes)
        assert c.forms == pytest.approx([float(c.polynomial(float(z))) for z in nodes], abs=1e-12)

    def test_singular_nodes(self):
        with pytest.raises(SingularNodes):
            hilbert_fekete_construct(UNIT, FactorWeight(()), 2, [0.0, 0.5, 0.5])

    def test_length(self):
        with pytest.raises(LengthMismatch):
            hilbert_fekete_construct(UNIT, FactorWeight(()), 3, [0.0, 0.5, 1.0])
