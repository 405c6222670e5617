"""Acceptance criteria 1-10, one test each.

Each test records a one-line detail; the terminal summary prints a PASS or
FAIL line per criterion.
"""
import math
import time

import numpy as np
import pytest

from bohrkit.functionals import (FAIL, GPOLY_SQRT5_BOUND, GPoly, FunctionalKind as K, envelope_bound,
                                 functional_values, gpoly_admissible, sr_over_pi)
from bohrkit.matcore import spectral_norm
from bohrkit.multidim import CircularDomain, compose_linear, homothety_verify
from bohrkit.radii import RadiusSpec, solve_radius, threshold_a
from bohrkit.series import blaschke_series, colligation_series, schur_samples
from bohrkit.sharpness import CONFIRMS, CONTRADICTS, adjudicate_radius

from conftest import eig_oracle_norm

SQ5 = math.sqrt(5)
SEED = 20240601
D_COEFF = [2 * (SQ5 - 1)]


@pytest.fixture
def detail(record_property):
    return lambda text: record_property("detail", text)


@pytest.mark.criterion(1)
def test_radius_table(detail):
    t0 = time.perf_counter()
    cases = [
        (RadiusSpec("RN", N=1), SQ5 - 2),
        (RadiusSpec("RNprime", N=1), 1 / 3),
        (RadiusSpec("ScalarRefined1", a0=0.0), (3 - SQ5) / 2),
        (RadiusSpec("ScalarRefined1", a0=1.0), SQ5 - 2),
        (RadiusSpec("Const", name="one_third"), 1 / 3),
        (RadiusSpec("Const", name="one_fifth"), 1 / 5),
        (RadiusSpec("Const", name="sqrt5_minus2"), SQ5 - 2),
    ]
    results = [(solve_radius(spec), want) for spec, want in cases]
    elapsed = time.perf_counter() - t0
    worst_err = max(abs(res.value - want) for res, want in results)
    worst_res = max(res.residual for res, _ in results)
    detail(f"max |radius - closed form| {worst_err:.1e}, max residual {worst_res:.1e}, {elapsed:.3f} s")
    print(f"criterion 1: {'PASS' if worst_err < 1e-12 and worst_res < 1e-10 and elapsed < 1 else 'FAIL'}")
    assert worst_err < 1e-12 and worst_res < 1e-10 and elapsed < 1.0


@pytest.mark.criterion(2)
def test_thresholds(detail):
    t0 = time.perf_counter()
    n1, n2 = threshold_a("N1"), threshold_a("N2")
    elapsed = time.perf_counter() - t0
    ok = abs(n1 - 0.402964) <= 1e-5 and abs(n2 - 0.489758) <= 1e-5 and elapsed < 1.0
    detail(f"N1 {n1:.7f}, N2 {n2:.7f}, {elapsed:.3f} s")
    print(f"criterion 2: {'PASS' if ok else 'FAIL'}")
    assert ok


CRIT3 = [
    (K.bp(1.0), "one_third", (0.0, 1.0)),
    (K.bp(0.5), "one_third", (0.0, 1.0)),
    (K.c(1), "one_fifth", (0.0, 1.0)),
    (K.c(2), "one_third", (0.0, 1.0)),
    (K.m(2), "one_third", (0.0, 1.0)),
    (K.d(D_COEFF), "sqrt5_minus2", (0.0, 1.0)),
    (K.n1(8 / 9), "one_third", (0.0, 0.402964)),
    (K.n2(9 / 8), "nkind", (0.0, 0.489758)),
]
RADIUS = {"one_third": 1 / 3, "one_fifth": 1 / 5, "sqrt5_minus2": SQ5 - 2}


@pytest.mark.slow
@pytest.mark.criterion(3)
def test_inequality_verification(detail):
    t0 = time.perf_counter()
    fails = {}
    for k, radius, a0_range in CRIT3:
        count = 0
        for s in schur_samples(SEED, 1000, dim=4, order=128, a0_range=a0_range):
            r = 1 / (3 - s.a0) if radius == "nkind" else RADIUS[radius]
            (est,) = functional_values([k], s, r)
            count += est.verdict() == FAIL
        fails[k.label] = count
    elapsed = time.perf_counter() - t0
    summary = ", ".join(f"{lab} {n}" for lab, n in fails.items())
    ok = not any(fails.values()) and elapsed < 300
    detail(f"FAIL counts per 1000: {summary}; {elapsed:.0f} s")
    print(f"criterion 3: {'PASS' if ok else 'FAIL'} ({summary})")
    assert ok, f"FAIL counts {fails}"


@pytest.mark.criterion(4)
def test_sharpness_confirmation(detail):
    got = {}
    for k in (K.bohr(), K.c(1), K.bp(1.0)):
        rep = adjudicate_radius(k, seed=SEED)
        got[k.label] = (rep.empirical_radius, rep.verdict)
    ok = (abs(got["Bohr"][0] - 1 / 3) <= 1e-4 and abs(got["C(1)"][0] - 0.2) <= 1e-4
          and abs(got["Bp(1)"][0] - 1 / 3) <= 1e-4 and all(v == CONFIRMS for _, v in got.values()))
    detail(", ".join(f"{lab} {r:.6f} {v}" for lab, (r, v) in got.items()))
    print(f"criterion 4: {'PASS' if ok else 'FAIL'}")
    assert ok


@pytest.mark.criterion(5)
def test_discrepancy_adjudication(detail):
    rep = adjudicate_radius(K.m(1), seed=SEED)
    w = rep.worst_witness
    ok = (abs(rep.empirical_radius - (SQ5 - 2)) <= 1e-3 and rep.verdict == CONTRADICTS and w is not None
          and w.b is not None and w.b >= 0.999 and 0.24 < w.r < 0.26 and w.value > 1)
    detail(f"empirical {rep.empirical_radius:.6f} vs claimed {rep.claimed_radius:.6f}, {rep.verdict}, "
           f"witness b={w.b} r={w.r:.4f} value={w.value:.10f}")
    print(f"criterion 5: {'PASS' if ok else 'FAIL'}")
    assert ok


CRIT6 = [K.m(1), K.m(2), K.c(1), K.c(2), K.bp(0.5), K.d(D_COEFF), K.n1(8 / 9), K.n2(9 / 8)]


@pytest.mark.slow
@pytest.mark.criterion(6)
def test_envelope_dominance(detail):
    rs = np.linspace(0.01, 0.9, 50)
    violations, worst, checks = 0, -math.inf, 0
    for s in schur_samples(SEED, 1000):
        for r in rs:
            for k, est in zip(CRIT6, functional_values(CRIT6, s, float(r))):
                excess = est.value - est.slack - envelope_bound(k, s.a0, float(r))
                worst = max(worst, excess)
                violations += excess > 0
                checks += 1
    detail(f"{violations} violations in {checks} checks, worst excess {worst:.2e}")
    print(f"criterion 6: {'PASS' if violations == 0 else 'FAIL'}")
    assert violations == 0


@pytest.mark.criterion(7)
def test_area_bound(detail):
    rs = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]

    def worst_excess(dim):
        count, worst = 0, -math.inf
        for s in schur_samples(SEED, 1000, dim=dim):
            a = s.a0
            for r in rs:
                est = sr_over_pi(s, r)
                excess = est.value - est.slack - r * r * (1 - a * a) ** 2 / (1 - a * a * r * r) ** 2
                worst = max(worst, excess)
                count += excess > 0
        return count, worst

    mobius_err = max(abs(sr_over_pi(blaschke_series(b), r).value - r * r * (1 - b * b) ** 2 / (1 - b * b * r * r) ** 2)
                  for b in (0.0, 0.3, 0.6, 0.9, 0.99) for r in rs)
    n4, w4 = worst_excess(4)
    n1, w1 = worst_excess(1)
    ok = n4 == 0 and mobius_err <= 1e-6
    detail(f"d=4: {n4} violations, worst excess {w4:.3e}; d=1: {n1} violations, worst {w1:.1e}; "
           f"Moebius equality error {mobius_err:.1e}")
    print(f"criterion 7: {'PASS' if ok else 'FAIL'}")
    assert n1 == 0 and mobius_err <= 1e-6
    assert n4 == 0, f"{n4} violations for 4x4 samples, worst excess {w4}"


@pytest.mark.criterion(8)
def test_gpoly(detail):
    bound = gpoly_admissible(GPoly((1.0,)), "sqrt5_minus2").bound
    third = gpoly_admissible(GPoly((8 / 9,)), "one_third")
    listed = gpoly_admissible(GPoly(tuple(D_COEFF)), "sqrt5_minus2")
    ok = (abs(bound - (13 - 5 * SQ5) / 4) <= 1e-12 and abs(GPOLY_SQRT5_BOUND - 0.454915028125) <= 1e-12
          and abs(third.value - 1.0) <= 1e-12 and third.admissible and listed.admissible)
    detail(f"bound {bound:.12f}, one_third value at 8/9 {third.value:.15f}, listed margin {listed.margin:.6f}")
    print(f"criterion 8: {'PASS' if ok else 'FAIL'}")
    assert ok


CRIT9 = [(K.c(1), 1 / 5), (K.bp(1.0), 1 / 3), (K.bp(0.5), 1 / 3), (K.m(2), 1 / 3), (K.d(D_COEFF), SQ5 - 2)]


@pytest.mark.slow
@pytest.mark.criterion(9)
def test_multidim_homothety(detail):
    t0 = time.perf_counter()
    inners = list(schur_samples(SEED, 100))
    fails, witnesses = {}, {}
    for d, w in ((CircularDomain.polydisc(2), (0.5, 0.5)), (CircularDomain.ball(3), (3 ** -0.5,) * 3)):
        for k, rho in CRIT9:
            key = f"{d.label}/{k.label}"
            fails[key] = sum(homothety_verify(compose_linear(s, w, d), k, rho, seed=SEED + i, count=10_000).verdict
                             == FAIL for i, s in enumerate(inners))
            extremal = compose_linear(blaschke_series(0.9999), w, d)
            witnesses[key] = homothety_verify(extremal, k, rho + 0.05, seed=SEED, count=10_000).verdict == FAIL
    elapsed = time.perf_counter() - t0
    bad = {key: n for key, n in fails.items() if n}
    ok = not bad and all(witnesses.values()) and elapsed < 600
    detail(f"FAIL counts (of 100) {bad or 'none'}; witnesses at rho+0.05 "
           f"{sum(witnesses.values())}/{len(witnesses)}; {elapsed:.0f} s")
    print(f"criterion 9: {'PASS' if ok else 'FAIL'}")
    assert all(witnesses.values()) and elapsed < 600
    assert not bad, f"FAIL counts {bad}"


@pytest.mark.criterion(10)
def test_oracle_cross_checks(detail):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for i in range(1000):
        d = 1 + i % 8
        m = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) * 10.0 ** rng.uniform(-3, 3)
        oracle = eig_oracle_norm(m)
        worst = max(worst, abs(spectral_norm(m) - oracle) / oracle)
    coll = 0.0
    for b in (0.0, 0.3, 0.7, 0.99):
        s = math.sqrt(1 - b * b)
        one = lambda x: np.array([[x]], dtype=complex)
        f = colligation_series(one(b), one(-s), one(s), one(b), order=128)
        coll = max(coll, float(np.max(np.abs(f.norms - blaschke_series(b, dim=1).norms))))
    ok = worst <= 1e-10 and coll <= 1e-12
    detail(f"spectral norm max relative error {worst:.1e}; colligation vs Moebius {coll:.1e}")
    print(f"criterion 10: {'PASS' if ok else 'FAIL'}")
    assert ok
