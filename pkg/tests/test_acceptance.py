"""End-to-end acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line, printed in the "acceptance criteria"
section of the pytest terminal summary.
"""
import time
from dataclasses import replace
from fractions import Fraction as F
from itertools import product

import mpmath
from hypothesis import given, settings, strategies as st

from renvol.chern import build_cutoff, cutoff_independence, localized_integral
from renvol.exact_core import ModelParams, PiValue, check_decomposition, eval_chern_integral_tube, eval_renvol_formula
from renvol.profile import build_profile, tail_coefficients
from renvol.series import (
    TruncatedSeries,
    constant_term_residue,
    constant_term_reversion,
    eps_constant_term,
    eps_of_u,
    series_compose,
    series_exp,
    series_log,
    series_revert,
)
from renvol.volume import DEFAULT_EPS_GRID, expansion_exact, fit_expansion, formula_comparison, sample_volumes

BETAS = [F(-3), F(-1), F(-1, 2), F(0), F(1, 3), F(1, 2), F(9, 10)]
VOLLS = [F(1), F(2), F(7)]


def test_decomposition_identity(acceptance):
    start = time.perf_counter()
    bad = [(n, b, v) for n, b, v in product(range(9), BETAS, VOLLS)
           if not check_decomposition(ModelParams(n, b, v)).is_zero()]
    spot = eval_renvol_formula(ModelParams(1, F(1, 2), 2))
    elapsed = time.perf_counter() - start
    ok = not bad and spot == PiValue(F(1, 36), 2) and elapsed < 1
    acceptance("1 decomposition identity", ok, f"{9 * 7 * 3} points, residual exactly 0, {elapsed:.2f}s")
    assert ok, (bad, spot, elapsed)


def test_reversion_residue_oracle_pair(acceptance):
    start = time.perf_counter()
    bad = []
    for n, b in product(range(9), BETAS):
        m = n + 1
        prof = build_profile(n, b)
        tail = tail_coefficients(prof, m + 2)
        want = (-b / m) ** m
        tampered = tail_coefficients(replace(prof, capC=prof.capC * 3 + 1), m + 2)
        if not (constant_term_reversion(tail, m) == constant_term_residue(tail[m - 1], m) == want
                == constant_term_reversion(tampered, m)):
            bad.append((n, b))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    acceptance("2 reversion == residue == (-beta/(n+1))^(n+1), capC tamper", ok, f"{elapsed:.2f}s")
    assert ok, (bad, elapsed)


def test_n0_closed_form(acceptance):
    results = []
    for b in (F(0), F(1, 2), F(-1)):
        p = ModelParams(0, b, 1)
        e = expansion_exact(p)
        r = formula_comparison(p)
        results.append(e.constant == -b - (1 - b) / 2
                       and e.renormalized_volume == PiValue(-(1 + b), 1) == eval_renvol_formula(p)
                       and r.cap_ratio == 1 and r.boundary_ratio in (1, None))
    ok = all(results)
    acceptance("3 n=0 closed form", ok, "V = -pi(1+beta), both term ratios 1")
    assert ok


def test_numeric_vs_exact(acceptance):
    start = time.perf_counter()
    worst = mpmath.mpf(0)
    for n, b in product(range(3), (F(0), F(1, 2), F(-1))):
        p = ModelParams(n, b, 1)
        fit = fit_expansion(sample_volumes(p, DEFAULT_EPS_GRID, 256), n, 256)
        exact = expansion_exact(p).renormalized_volume
        with mpmath.workprec(256):
            ref = exact.to_mpf(256) if not exact.is_zero() else (2 * mpmath.pi) ** (n + 1)
            worst = max(worst, abs(fit.constant - exact.to_mpf(256)) / abs(ref))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 60
    acceptance("4 numeric fit vs exact constant", ok,
               f"worst relative gap {mpmath.nstr(worst, 3)} (tol 1e-6), {elapsed:.1f}s")
    assert ok


def test_chern_localization(acceptance):
    cutoffs = [build_cutoff(-2, -1, 2), build_cutoff(-3, F(-1, 2), 4), build_cutoff(-6, -2, 3),
               build_cutoff(-4, -2, shape="exp")]
    worst, spread = mpmath.mpf(0), mpmath.mpf(0)
    for n, b, v in product(range(4), (F(-1), F(0), F(1, 2), F(9, 10)), (F(1), F(7))):
        p = ModelParams(n, b, v)
        rep = cutoff_independence(p, cutoffs)
        t = eval_chern_integral_tube(p)
        with mpmath.workprec(256):
            tq = mpmath.mpf(t.numerator) / t.denominator
            worst = max(worst, max(abs(x / tq - 1) for x in rep.values))
        spread = max(spread, rep.max_deviation)
    zeros = all(localized_integral(ModelParams(n, 1, 3), c) == 0 for n in range(4) for c in cutoffs)
    ok = worst < 1e-8 and spread < 1e-10 and zeros
    acceptance("5 localized Chern integral", ok,
               f"worst relative gap {mpmath.nstr(worst, 3)}, max spread {mpmath.nstr(spread, 3)}, beta=1 -> 0")
    assert ok


def test_convention_audit(acceptance):
    boundary = {}
    ok = True
    for n in range(9):
        reports = [formula_comparison(ModelParams(n, b, v)) for b, v in product(BETAS, VOLLS)]
        caps = {r.cap_ratio for r in reports}
        bnds = {r.boundary_ratio for r in reports if r.boundary_ratio is not None}
        ok = ok and caps == {1} and len(bnds) == 1 and (n > 0 or bnds == {1})
        boundary[n] = next(iter(bnds))
    shown = ", ".join(f"{n}:{r}" for n, r in boundary.items())
    acceptance("6 per-term ratios (caps 1; boundary recorded)", ok, f"boundary ratio by n {{{shown}}}")
    assert ok


def test_series_engine_laws(acceptance):
    rationals = st.fractions(min_value=-3, max_value=3, max_denominator=9)
    count = {"n": 0}

    @settings(max_examples=170, database=None)
    @given(rationals.filter(lambda c: c != 0), st.lists(rationals, min_size=1, max_size=6))
    def revert_compose(c1, rest):
        N = len(rest) + 2
        s = TruncatedSeries([0, c1] + rest, 0, N)
        g = series_revert(s)
        x = TruncatedSeries.identity(N)
        assert series_compose(s, g) == x and series_compose(g, s) == x
        count["n"] += 1

    @settings(max_examples=170, database=None)
    @given(st.lists(rationals, min_size=1, max_size=7))
    def exp_log(tail):
        N = len(tail) + 1
        a = TruncatedSeries([0] + tail, 0, N)
        assert series_log(series_exp(a)) == a
        count["n"] += 1

    @settings(max_examples=170, database=None)
    @given(st.integers(1, 6), st.lists(rationals, min_size=6, max_size=6),
           st.fractions(min_value=F(1, 20), max_value=20, max_denominator=20))
    def gauge(m, tail, lam):
        eps = eps_of_u(tail[:m])
        assert eps_constant_term(eps * lam, m) == eps_constant_term(eps, m)
        count["n"] += 1

    start = time.perf_counter()
    revert_compose()
    exp_log()
    gauge()
    elapsed = time.perf_counter() - start
    ok = count["n"] >= 500 and elapsed < 10
    acceptance("7 series engine laws", ok, f"{count['n']} exact property cases, {elapsed:.1f}s")
    assert ok
