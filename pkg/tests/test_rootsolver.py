import cmath
import csv
import io
import itertools
import math

import gmpy2
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logconcave_roots import rootsolver as rsv
from logconcave_roots import sampler as sp
from logconcave_roots.errors import ConvergenceError, DomainError


def model_poly(model, n, seed):
    s = sp.sample_convex(n, sp.make_rng(seed, n))
    return rsv.as_poly(sp.make_coeffs(s, model))


def roots_of_unity_except_one(m):
    return np.array([cmath.exp(2j * math.pi * k / m) for k in range(1, m)])


def hull_vertices_brute(lc):
    """Indices on the upper hull: no chord between other points passes strictly above."""
    n = len(lc) - 1
    out = []
    for k in range(n + 1):
        above = False
        for a, b in itertools.combinations(range(n + 1), 2):
            if a < k < b:
                chord = lc[a] + (lc[b] - lc[a]) * (k - a) / (b - a)
                if chord >= lc[k] - 1e-12 * (1 + abs(lc[k])):
                    above = True
                    break
        if not above:
            out.append(k)
    return out


# ---------------------------------------------------------------------------
# polynomial type and evaluation
# ---------------------------------------------------------------------------

def test_poly_validation():
    with pytest.raises(DomainError):
        rsv.LogCoeffPoly([1.0])
    with pytest.raises(DomainError):
        rsv.LogCoeffPoly([0.0, -math.inf, 0.0])
    with pytest.raises(DomainError):
        rsv.LogCoeffPoly.from_coeffs([1, 0, 1])
    p = rsv.LogCoeffPoly([0.0, 3.0, -1.0])
    assert p.n == 2 and p.spread == 4.0


def test_eval_log_examples():
    assert rsv.eval_log([0.5, 1.0, 2.0], 0) == (0.5, 1 + 0j)
    lm, _ = rsv.eval_log([0.0, 0.0], -1.0)
    assert lm == -math.inf
    lm, ph = rsv.eval_log([0.0, 0.0, 0.0], 1j)
    assert lm == pytest.approx(0.0, abs=1e-15)
    assert ph == pytest.approx(1j, abs=1e-15)
    for prec in (64, 256):
        lm, ph = rsv.eval_log([0.0, 0.0, 0.0], 1j, prec=prec)
        assert lm == pytest.approx(0.0, abs=1e-15) and ph == pytest.approx(1j, abs=1e-15)
        assert rsv.eval_log([0.0, 0.0], -1.0, prec=prec)[0] == -math.inf


def test_eval_log_double_matches_multiprecision():
    poly = model_poly("beta", 60, 1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = cmath.exp(complex(rng.uniform(-3, 3), rng.uniform(-math.pi, math.pi)))
        lm, ph = rsv.eval_log(poly, z)
        lm2, ph2 = rsv.eval_log(poly, z, prec=rsv.seed_precision(poly))
        assert lm == pytest.approx(lm2, abs=1e-10)
        assert abs(ph - ph2) < 1e-10


def test_eval_log_polar_no_overflow():
    # coefficients and argument far outside the double range
    poly = rsv.LogCoeffPoly(np.array([0.0, 5000.0, 9000.0]))
    lm, ph = rsv.eval_log_polar(poly, 800.0, 0.0)
    assert lm == pytest.approx(9000.0 + 1600.0, rel=1e-15)
    assert ph == pytest.approx(1.0)


def test_real_evaluator_matches_horner():
    poly = model_poly("beta", 40, 2)
    with gmpy2.context(gmpy2.get_context(), precision=2048):
        coeffs = rsv._mp_coeffs(poly)
        for z in (gmpy2.mpc(-0.3, 0.9), gmpy2.mpc(2.5, -1e-3), gmpy2.mpc(1e-5, 4.0)):
            p1, d1 = rsv._horner(coeffs, z)
            p2, d2 = rsv._horner_real(coeffs, z)
            assert abs(p1 - p2) <= gmpy2.mpfr(2) ** -1900 * (1 + abs(p1))
            assert abs(d1 - d2) <= gmpy2.mpfr(2) ** -1900 * (1 + abs(d1))


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

def test_newton_polygon_examples():
    segs = rsv.newton_polygon_radii(np.zeros(8))
    assert len(segs) == 1 and segs[0].radius == 1.0 and segs[0].multiplicity == 7
    segs = rsv.newton_polygon_radii([0.0, 10.0, 0.0])
    assert [s.multiplicity for s in segs] == [1, 1]
    assert segs[0].log_radius == -10.0 and segs[1].log_radius == 10.0


def test_newton_polygon_beta_model():
    n = 50
    s = sp.sample_convex(n, sp.make_rng(3))
    segs = rsv.newton_polygon_radii(sp.make_coeffs(s, "beta"))
    assert [g.multiplicity for g in segs] == [1] * n
    np.testing.assert_allclose([g.log_radius for g in segs], n * np.diff(s.w), rtol=1e-12, atol=1e-12)


@settings(max_examples=60)
@given(st.lists(st.integers(min_value=-20, max_value=20), min_size=2, max_size=12))
def test_newton_polygon_against_brute_force(vals):
    lc = np.array(vals, dtype=float)
    segs = rsv.newton_polygon_radii(lc)
    assert sum(g.multiplicity for g in segs) == len(lc) - 1
    logs = [g.log_radius for g in segs]
    assert all(a < b for a, b in zip(logs, logs[1:]))
    vertices = np.concatenate([[0], np.cumsum([g.multiplicity for g in segs])]).tolist()
    assert vertices == hull_vertices_brute(lc)


def test_initial_guesses_off_positive_axis():
    for model in ("uniform", "beta"):
        w = rsv.initial_log_guesses(model_poly(model, 101, 4))
        assert len(w) == 101
        assert np.min(np.abs(w.imag)) > 1e-3


# ---------------------------------------------------------------------------
# find_roots
# ---------------------------------------------------------------------------

def test_double_root_with_exact_coefficients():
    rs = rsv.find_roots(rsv.LogCoeffPoly.from_coeffs([1, 2, 1]))
    assert rs.n == 2 and rs.converged
    assert np.max(np.abs(rs.as_complex() + 1)) <= 1e-10
    assert rsv.count_real_roots(rs) == {"negative_axis": 2, "positive_axis": 0}


def test_double_root_from_log_coefficients_splits_by_rounding():
    # exp(log 2) in double precision is not exactly 2; the split is sqrt of that error
    rs = rsv.find_roots(rsv.LogCoeffPoly([0.0, math.log(2.0), 0.0]))
    assert np.max(np.abs(rs.as_complex() + 1)) <= 1e-7


@pytest.mark.parametrize("n", [20, 21])
def test_kac_roots_of_unity(n):
    rs = rsv.find_roots(rsv.LogCoeffPoly(np.zeros(n + 1)))
    expected = roots_of_unity_except_one(n + 1)
    oracle = rsv._rootset([gmpy2.mpc(z) for z in expected], np.zeros(n), 53, True, 0)
    assert np.max(rsv.match_roots(rs, oracle)) <= 1e-12
    counts = rsv.count_real_roots(rs)
    # -1 is a root exactly when n + 1 is even
    assert counts == {"negative_axis": n % 2, "positive_axis": 0}


@pytest.mark.parametrize("model", ["uniform", "beta"])
@pytest.mark.parametrize("n", [5, 10, 20, 40])
def test_matches_companion_oracle(model, n):
    for seed in range(5):
        poly = model_poly(model, n, seed)
        rs = rsv.find_roots(poly)
        oracle = rsv.companion_oracle(poly)
        assert oracle.n == n
        assert np.max(rsv.match_roots(rs, oracle)) <= 1e-8


def test_companion_oracle_examples():
    oracle = rsv.companion_oracle(rsv.LogCoeffPoly(np.zeros(21)))
    expected = rsv._rootset([gmpy2.mpc(z) for z in roots_of_unity_except_one(21)], np.zeros(20), 53, True, 0)
    assert np.max(rsv.match_roots(oracle, expected)) <= 1e-14
    double = rsv.companion_oracle(rsv.LogCoeffPoly.from_coeffs([1, 2, 1]))
    assert np.max(np.abs(double.as_complex() + 1)) <= 1e-10
    with pytest.raises(DomainError):
        rsv.companion_oracle(np.zeros(62))


@pytest.mark.parametrize("model,n", [("uniform", 200), ("beta", 120), ("alpha_scaled", 80)])
def test_rootset_invariants(model, n):
    s = sp.sample_convex(n, sp.make_rng(9))
    poly = rsv.as_poly(sp.make_coeffs(s, model, alpha=1.5))
    rs = rsv.find_roots(poly)
    assert rs.n == n and rs.converged
    assert rs.precision_bits >= rsv.seed_precision(poly)
    assert rsv.conjugate_closure_error(rs) <= 1e-8
    assert rsv.vieta_log_error(poly, rs) <= 1e-6 * n
    assert np.max(rs.residuals) <= 1e-12
    assert rsv.count_real_roots(rs)["positive_axis"] == 0
    assert np.min(np.abs(rs.arg)) > rsv.POSITIVE_AXIS_ARG


def test_scale_invariance():
    poly = model_poly("beta", 60, 5)
    a = rsv.find_roots(poly)
    b = rsv.find_roots(rsv.LogCoeffPoly(poly.log_coeffs + 1234.5))
    c = rsv.find_roots(rsv.LogCoeffPoly(poly.log_coeffs - 77.25))
    for other in (b, c):
        assert np.max(rsv.match_roots(a, other)) <= 1e-10


def test_deterministic():
    poly = model_poly("beta", 80, 6)
    a = rsv.find_roots(poly)
    b = rsv.find_roots(poly)
    assert a.roots == b.roots
    assert np.array_equal(a.residuals, b.residuals)
    assert a.precision_bits == b.precision_bits


def test_precision_cap_reports_partial_results():
    poly = model_poly("beta", 60, 7)
    config = rsv.SolverConfig(precision=24, max_precision_bits=24, max_iters=2)
    with pytest.raises(ConvergenceError) as info:
        rsv.find_roots(poly, config)
    partial = info.value.partial
    assert isinstance(partial, rsv.RootSet) and partial.n == 60 and not partial.converged
    assert info.value.diagnostics["levels"][0]["bits"] == 24


def test_precision_doubles_when_budget_runs_out():
    poly = model_poly("beta", 40, 8)
    rs = rsv.find_roots(poly, rsv.SolverConfig(precision=24, max_iters=3, warm_iters=2))
    levels = rs.diagnostics["levels"]
    assert rs.converged and len(levels) >= 2
    assert [lv["bits"] for lv in levels] == [24 * 2**i for i in range(len(levels))]


def test_roots_far_outside_double_range():
    n = 150
    s = sp.sample_convex(n, sp.make_rng(10))
    poly = rsv.as_poly(sp.make_coeffs(s, "alpha_scaled", alpha=1.7))
    rs = rsv.find_roots(poly)
    assert rs.log_abs.min() < -745 and rs.log_abs.max() > 710
    assert np.all(np.isfinite(rs.log_abs))
    assert rsv.vieta_log_error(poly, rs) <= 1e-6 * n
    assert rsv.conjugate_closure_error(rs) <= 1e-8


# ---------------------------------------------------------------------------
# classification, matching, output
# ---------------------------------------------------------------------------

def _set(zs):
    return rsv._rootset([gmpy2.mpc(complex(z)) for z in zs], np.zeros(len(zs)), 53, True, 0)


def test_count_real_roots_relative_tolerance():
    rs = _set([-2.0, -1e-30 + 1e-40j, -1e-30 - 1e-40j, -1 + 1e-3j, -1 - 1e-3j, 3.0])
    assert rsv.count_real_roots(rs) == {"negative_axis": 3, "positive_axis": 1}
    # absolute tolerance would call the tiny pair above real at any angle
    rs = _set([-1e-30 + 1e-31j, -1e-30 - 1e-31j])
    assert rsv.count_real_roots(rs)["negative_axis"] == 0


def test_match_roots_permutation():
    zs = [1 + 1j, -2, 0.5 - 3j, 4j]
    a, b = _set(zs), _set(zs[::-1])
    assert np.max(rsv.match_roots(a, b)) == 0


def test_csv_output():
    poly = model_poly("beta", 400, 10)
    rs = rsv.find_roots(poly)
    text = rsv.roots_to_csv(rs)
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == rsv.CSV_HEADER
    assert len(rows) == 401
    for row in rows[1:]:
        for cell in row:
            mant = cell.lstrip("-").split("e")[0].replace(".", "")
            assert len(mant) == 17
    logs = np.array([float(r[4]) for r in rows[1:]])
    np.testing.assert_array_equal(logs, rs.log_abs)
    # |z| printed in full even when it underflows a double
    tiny = int(np.argmin(rs.log_abs))
    mant, exp = rows[tiny + 1][2].split("e")
    log10_abs = rs.log_abs[tiny] / math.log(10)
    assert int(exp) == math.floor(log10_abs)
    assert math.log10(float(mant)) == pytest.approx(log10_abs - math.floor(log10_abs), abs=1e-9)


def test_g17_formatting():
    assert rsv._g17(1.0) == "1.0000000000000000e+00"
    with gmpy2.context(gmpy2.get_context(), precision=200):
        x = gmpy2.mpfr("-1.2345678901234567891e-500")
    assert rsv._g17(x) == "-1.2345678901234568e-500"
    assert rsv._g17(gmpy2.mpfr(0)) == "0.0000000000000000e+00"
