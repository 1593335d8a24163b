"""End-to-end reproduction of the numerical claims, one test per criterion.

Each test records a PASS/FAIL line shown in the terminal summary.  Parts
that do not reproduce are reported as FAIL and marked xfail with the
measured numbers; see the decisions ledger for the analysis.
"""

import math
import time

import numpy as np
import pytest

from intcheb import jacobi
from intcheb.bounds import (
    DEFAULT_M,
    QUARTER_INTERVAL,
    UNIT_INTERVAL,
    ClosedFormGaps,
    LejaGaps,
    RegionSpec,
    constraint_value,
    feasible_region,
    fekete_upper,
    lemniscate_tz,
    rational_point_lower,
    robin_lower,
    sweep_lower_bound,
    sweep_upper_bound,
    weighted_upper,
)
from intcheb.exact_search import brute_force_search, search_integer_chebyshev, symmetry_reduce
from intcheb.jacobi import TwoFactorParams
from intcheb.leja import (
    estimate_capacity,
    estimate_potential_gap,
    estimate_robin,
    kolmogorov_distance,
    leja_sequence,
)
from intcheb.polycore import FACTORS_QUARTER_INTERVAL, FactorWeight, IntervalUnion, IntPoly, RationalPoint

Z0, Z14, Z15 = (RationalPoint.parse(t) for t in ("0", "1/4", "1/5"))
THREE_FACTORS = [IntPoly.parse("z"), IntPoly.parse("4z-1"), IntPoly.parse("5z-1")]
THREE_SEED = (0.325, 0.125, 0.045)
THREE_BOX = [(0.31, 0.34), (0.11, 0.14), (0.035, 0.057)]
TWO_BOX = [(0.2961, 0.3634), (0.0952, 0.1767)]
BETA = (0.625, 0.11, 0.07, 0.0032, 0.0302, 0.0112, 0.0048, 0.00094)


def within(got, want, tol):
    return abs(got - want) <= tol + 1e-12


@pytest.fixture(scope="module")
def three_factor():
    """Leja evaluator and the flood-filled feasible lattice at step 0.005."""
    ev = LejaGaps.for_factors(THREE_FACTORS, leja_length=2000, grid_density=20_000)
    t = time.perf_counter()
    spec = RegionSpec(tuple(ev.names), 0.005, DEFAULT_M, (Z0, Z14, Z15))
    feasible_region(spec, ev, "flood", THREE_SEED)
    return ev, spec, time.perf_counter() - t


def test_criterion_01_two_factor_upper(report):
    t = time.perf_counter()
    rep = sweep_upper_bound(ClosedFormGaps(), 0.002)
    dt = time.perf_counter() - t
    a1, a2 = rep.diagnostics["argmin"]
    ok = within(rep.value, 0.18043338, 2e-4) and within(a1, 0.290447, 0.005) and within(a2, 0.09, 0.005) and dt < 60
    report(1, ok, f"inf {rep.value:.9f} at ({a1:.5f}, {a2:.5f}); {dt:.1f} s")
    assert ok


def test_criterion_02_two_factor_lower(report):
    t = time.perf_counter()
    rep = sweep_lower_bound(ClosedFormGaps(), [Z0, Z14], 0.002)
    dt = time.perf_counter() - t
    a1, a2 = rep.diagnostics["argmin"]
    ok_closed = within(rep.value, 0.176056, 5e-4) and within(a1, 0.330333, 0.005) and within(a2, 0.128, 0.005)
    ok_closed = ok_closed and dt < 60

    # Leja mode at n = 2000; the minimizer is feasible, so the feasible box of
    # the closed form at M contains it
    ev = LejaGaps.for_factors(THREE_FACTORS[:2], leja_length=2000, grid_density=20_000)
    t = time.perf_counter()
    lrep = sweep_lower_bound(ev, [Z0, Z14], 0.005, box=TWO_BOX)
    ldt = time.perf_counter() - t
    b1, b2 = lrep.diagnostics["argmin"]
    ok_leja = within(lrep.value, 0.176056, 5e-4) and within(b1, 0.330333, 0.005) and within(b2, 0.128, 0.005)
    ok_leja = ok_leja and ldt < 1800
    ok = ok_closed and ok_leja
    report(
        2,
        ok,
        f"closed form {rep.value:.7f} at ({a1:.5f}, {a2:.5f}) in {dt:.1f} s; "
        f"Leja {lrep.value:.7f} at ({b1:.4f}, {b2:.4f}) in {ldt:.0f} s",
    )
    assert ok


def test_criterion_03_three_factor_lower(report, three_factor):
    ev, spec, region_time = three_factor
    vals = spec.values.max(axis=1)
    j = int(np.argmin(vals))
    seed = spec.points[j]
    box = [(a - 0.005, a + 0.005) for a in seed]
    t = time.perf_counter()
    rep = sweep_lower_bound(ev, [Z0, Z14, Z15], 0.005, box=box)
    dt = region_time + time.perf_counter() - t
    lattice = rep.diagnostics["lattice_value"]
    value = rep.value
    ok = value >= 0.177 and within(value, 0.1775, 2e-3) and math.sqrt(value) >= 0.4207 and dt <= 7200
    arg = ", ".join(f"{a:.5f}" for a in rep.diagnostics["argmin"])
    report(
        3,
        ok,
        f"lattice inf {lattice:.6f}, refined {value:.6f} at ({arg}); "
        f"t_Z([0,1]) >= {math.sqrt(value):.5f}; {dt:.0f} s",
    )
    assert ok


def test_criterion_04_eight_factor_upper(report):
    w = FactorWeight(tuple((poly, b) for (_, poly, _), b in zip(FACTORS_QUARTER_INTERVAL, BETA)))
    t = time.perf_counter()
    rep = weighted_upper(QUARTER_INTERVAL, w, "leja", leja_length=4000)
    dt = time.perf_counter() - t
    ok = rep.value < 0.1793 and rep.squaring["value"] < 0.4235
    report(
        4,
        ok,
        f"cap^((1-a)/2) = {rep.value:.6f} (alpha {w.alpha_total:.4f}); "
        f"t_Z([0,1]) < {rep.squaring['value']:.5f}; {dt:.0f} s",
    )
    assert ok


def test_criterion_05_regions(report, three_factor):
    two = feasible_region(RegionSpec(("alpha1", "alpha2"), 0.0005, DEFAULT_M, (Z0, Z14)), ClosedFormGaps())
    box2 = two.bounding_box()
    ok2 = all(within(g, w, 0.002) for gb, wb in zip(box2, TWO_BOX) for g, w in zip(gb, wb))

    _, spec, _ = three_factor
    box3 = spec.bounding_box()
    errs = [abs(g - w) for gb, wb in zip(box3, THREE_BOX) for g, w in zip(gb, wb)]
    ok3 = max(errs) <= 0.005 + 1e-12
    fmt = lambda box: " x ".join(f"[{lo:.4f}, {hi:.4f}]" for lo, hi in box)  # noqa: E731
    report(
        5,
        ok2 and ok3,
        f"two-factor {fmt(box2)} ({'ok' if ok2 else 'off'}); "
        f"three-factor {fmt(box3)}, worst edge error {max(errs):.4f} ({'ok' if ok3 else 'off'})",
    )
    assert ok2
    if not ok3:
        pytest.xfail(f"three-factor box {fmt(box3)} misses the reference box by {max(errs):.4f}")


def test_criterion_06_leja_cross_validation(report):
    pairs = [(0.05, 0.05), (0.1, 0.3), (0.15, 0.15), (0.2, 0.4), (0.25, 0.05),
             (0.29, 0.09), (0.33, 0.13), (0.35, 0.2), (0.4, 0.1), (0.1, 0.7)]
    worst = {"robin": 0.0, "gap": 0.0, "ks": 0.0}
    for a1, a2 in pairs:
        p = TwoFactorParams(a1, a2)
        seq = leja_sequence(QUARTER_INTERVAL, p.weight(), 4000)
        worst["robin"] = max(worst["robin"], abs(estimate_robin(seq).value - jacobi.robin_constant(p)))
        for z in (0.0, 0.25):
            err = abs(estimate_potential_gap(seq, z).value - jacobi.potential_gap(p, z))
            worst["gap"] = max(worst["gap"], err)
        ks = kolmogorov_distance(seq.points, lambda x, p=p: jacobi.equilibrium_cdf(p, x))
        worst["ks"] = max(worst["ks"], ks)
    ok = worst["robin"] <= 0.02 and worst["gap"] <= 0.02 and worst["ks"] <= 0.05
    report(6, ok, f"max |dF| {worst['robin']:.2e}, max |dgap| {worst['gap']:.2e}, max KS {worst['ks']:.4f}")
    assert ok


def test_criterion_07_unweighted(report):
    unit = FactorWeight(())
    quarter = estimate_capacity(leja_sequence(QUARTER_INTERVAL, unit, 2000)).value
    wide = estimate_capacity(leja_sequence(IntervalUnion.single(-2, 2), unit, 2000)).value
    fek = fekete_upper(UNIT_INTERVAL).value
    ok_q, ok_w, ok_f = within(quarter, 1 / 16, 1e-3), within(wide, 1.0, 1e-3), fek == 0.5
    report(7, ok_q and ok_w and ok_f, f"cap[0,1/4] {quarter:.6f}, cap[-2,2] {wide:.6f}, fekete [0,1] {fek}")
    assert ok_q and ok_f
    if not ok_w:
        pytest.xfail(f"Leja capacity of [-2,2] at n = 2000 is {wide:.6f}, outside 1 +- 1e-3")


def test_criterion_08_lemniscates(report):
    cases = [
        (lemniscate_tz(IntPoly.parse("z"), 0.5), 0.5),
        (lemniscate_tz(IntPoly.parse("2z-1"), 0.5, irreducible=True), 0.5),
        (lemniscate_tz(IntPoly.parse("z^2-2"), 0.81), 0.9),
    ]
    exact = all(r.kind == "exact" and r.value == v for r, v in cases)
    collapse = all(
        (lemniscate_tz(IntPoly((1,) + (0,) * (m - 1) + (a,)), 0.3).kind == "exact") == (abs(a) == 1)
        for a in (-3, -2, -1, 1, 2, 3)
        for m in (1, 2, 3)
    )
    report(8, exact and collapse, f"values {[r.value for r, _ in cases]}; bracket collapses iff |a_m| = 1: {collapse}")
    assert exact and collapse


def test_criterion_09_exact_search(report):
    E = UNIT_INTERVAL
    t = time.perf_counter()
    oracle_ok = True
    recs = {}
    for n in range(1, 9):
        recs[n] = search_integer_chebyshev(E, n)
        if n <= 5:
            bf = brute_force_search(E, n, recs[n].diagnostics["budget"])
            oracle_ok &= math.isclose(bf.norm, recs[n].norm, rel_tol=1e-9) and bf.polynomial == recs[n].polynomial
    norms = [recs[n].norm for n in range(1, 9)]
    monotone = all(b <= a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))
    roots = [recs[n].norm ** (1 / n) for n in range(1, 9)]
    sym_ok = True
    for n in (2, 4, 6, 8):
        images = [symmetry_reduce(p) for p in (recs[n].ties or (recs[n].polynomial,))]
        images = [r for r in images if r is not None]
        quarter = search_integer_chebyshev(QUARTER_INTERVAL, n // 2)
        sym_ok &= bool(images) and math.isclose(quarter.norm, recs[n].norm, rel_tol=1e-9)
    dt = time.perf_counter() - t
    ok = oracle_ok and monotone and norms[1] == 0.25 and sym_ok and min(roots) >= 0.4207
    report(
        9,
        ok,
        f"norms {', '.join(f'{v:.6g}' for v in norms)}; min n-th root {min(roots):.4f}; "
        f"oracle n<=5 {oracle_ok}; symmetry {sym_ok}; {dt:.0f} s",
    )
    assert ok


def test_criterion_10_formula_fidelity(report):
    pairs = [(a1, a2) for a1 in (0.05, 0.2, 0.29, 0.33, 0.4) for a2 in (0.05, 0.09, 0.13) if 2 * a1 + a2 < 1]
    cap_err = gap_err = con_err = 0.0
    for a1, a2 in pairs:
        p = TwoFactorParams(a1, a2)
        robin = jacobi.weighted_capacity(p, "robin").value
        harmonic = jacobi.weighted_capacity(p, "harmonic").value
        cap_err = max(cap_err, abs(robin - harmonic))
        rep = robin_lower(p.weight(), jacobi.robin_constant(p), closed_form=p)
        gap_err = max(gap_err, rep.diagnostics["agreement"])
        gaps = [jacobi.potential_gap(p, z) for z in (0.0, 0.25)]
        rp = rational_point_lower(p.weight(), [Z0, Z14], gaps)
        a = 2 * a1 + a2
        by_hand = [math.pow(1, a - 1) * math.exp((a - 1) * gaps[0]), math.pow(4, a - 1) * math.exp((a - 1) * gaps[1])]
        con_err = max(con_err, max(abs(x - y) for x, y in zip(rp.diagnostics["constraints"], by_hand)))
        con_err = max(con_err, abs(constraint_value(a, 4, gaps[1]) - by_hand[1]))
    ok = cap_err <= 1e-6 and gap_err <= 1e-6 and con_err <= 1e-12
    report(10, ok, f"capacity routes {cap_err:.1e}; robin vs product {gap_err:.1e}; constraints {con_err:.1e}")
    assert ok
