from fractions import Fraction
from math import comb, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_vanishing_count, kernel_vanishing_count
from zforge.errors import ArityMismatch, BudgetExceeded, DuplicatePoints, IncompatibleField, SpecMismatch
from zforge.gf import field_make
from zforge.poly import (
    MultiPoly,
    PointSet,
    all_points,
    common_zeros,
    count_vanishing,
    monomial_count,
    monomials,
    poly_eval,
    poly_eval_many,
    poly_random,
    poly_sub,
    vanish_probability_exact,
    vanish_probability_mc,
)

F2, F3, F5, F7 = (field_make(p) for p in (2, 3, 5, 7))
F4 = field_make(2, 2)


def test_monomial_count_examples():
    assert monomial_count(2, 3) == 10
    assert all(monomial_count(1, d) == d + 1 for d in range(8))
    assert monomial_count(3, 0) == 1


def test_monomial_order_graded_lex():
    assert monomials(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    for nvars in (1, 2, 3):
        for d in range(5):
            mons = monomials(nvars, d)
            assert len(mons) == len(set(mons)) == monomial_count(nvars, d)
            assert [sum(m) for m in mons] == sorted(sum(m) for m in mons)


def test_canonical_form_strips_zeros():
    f = MultiPoly(F5, 2, 2, {(1, 0): 0, (0, 1): 3})
    assert f.terms == {(0, 1): 3}
    assert f == MultiPoly.from_vector(F5, 2, 2, [0, 0, 3, 0, 0, 0])
    assert hash(f) == hash(MultiPoly(F5, 2, 2, {(0, 1): 3}))


def test_degree_cap_enforced():
    with pytest.raises(ValueError):
        MultiPoly(F5, 2, 1, {(1, 1): 1})
    with pytest.raises(ArityMismatch):
        MultiPoly(F5, 2, 1, {(1,): 1})


def test_poly_random_deterministic():
    a = poly_random(F5, 2, 3, np.random.default_rng(42))
    b = poly_random(F5, 2, 3, np.random.default_rng(42))
    assert a == b


def test_poly_random_budget_boundary():
    assert monomial_count(3, 4) == 35 and monomial_count(3, 5) == 56 and monomial_count(3, 6) == 84
    poly_random(F5, 3, 5, 0)
    with pytest.raises(BudgetExceeded):
        poly_random(F5, 3, 6, 0)


def test_sample_space_f2_linear():
    assert F2.q ** monomial_count(2, 1) == 8
    rng = np.random.default_rng(3)
    seen = {poly_random(F2, 2, 1, rng) for _ in range(400)}
    assert len(seen) == 8


def test_poly_random_coefficient_histogram():
    rng = np.random.default_rng(2024)
    counts = np.zeros(5, dtype=np.int64)
    draws = 10**5
    for _ in range(draws):
        f = poly_random(F5, 1, 0, rng)
        counts[f.coefficient_vector()[0]] += 1
    expected = draws / 5
    sigma = sqrt(draws * 0.2 * 0.8)
    assert (np.abs(counts - expected) <= 3 * sigma).all()
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    assert chi2 < 18.47  # 4 degrees of freedom, p = 0.001


def test_eval_examples():
    f = MultiPoly(F5, 2, 2, {(2, 0): 1, (0, 1): 2})
    assert poly_eval(f, [F5(3), F5(1)]).value == 1
    assert f(3, 1).value == 1
    zero = MultiPoly.zero(F5, 2, 2)
    assert all(zero(x, y).value == 0 for x in range(5) for y in range(5))
    g = MultiPoly(F2, 2, 1, {(1, 0): 1, (0, 1): 1})
    x = F4(2)
    assert poly_eval(g, [x, x]) == F4(0)


def test_eval_errors():
    f = MultiPoly(F5, 2, 1, {(1, 0): 1})
    with pytest.raises(ArityMismatch):
        poly_eval(f, [F5(1)])
    with pytest.raises(IncompatibleField):
        poly_eval(f, [F7(1), F7(2)])
    h = MultiPoly(F4, 1, 1, {(1,): 1})
    with pytest.raises(IncompatibleField):
        poly_eval(h, [field_make(2, 4)(3)])


def test_eval_in_extension_matches_scalar():
    F25 = field_make(5, 2)
    rng = np.random.default_rng(5)
    f = poly_random(F5, 2, 3, rng)
    pts = rng.integers(0, 25, size=(50, 2))
    many = poly_eval_many(f, pts, F25)
    for (a, b), v in zip(pts.tolist(), many.tolist()):
        assert poly_eval(f, [F25(a), F25(b)]).value == v


def test_poly_sub_examples():
    f = poly_random(F7, 2, 2, 1)
    assert poly_sub(f, f).is_zero()
    g = MultiPoly(F3, 1, 1, {(1,): 1, (0,): 1})
    h = MultiPoly(F3, 1, 1, {(1,): 1})
    assert (g - h) == MultiPoly(F3, 1, 1, {(0,): 1})
    with pytest.raises(SpecMismatch):
        poly_sub(f, poly_random(F5, 2, 2, 1))


@pytest.mark.parametrize("spec", [F2, F3, F5, F7, F4, field_make(3, 2)], ids=lambda s: f"q{s.q}")
def test_evaluation_homomorphism(spec):
    rng = np.random.default_rng(spec.q)
    for nvars in (1, 2, 3):
        f = poly_random(spec, nvars, 3, rng)
        g = poly_random(spec, nvars, 3, rng)
        pts = rng.integers(0, spec.q, size=(100, nvars))
        for pt in pts.tolist():
            fx, gx = f(pt), g(pt)
            assert (f - g)(pt) == fx - gx
            assert (f + g)(pt) == fx + gx


def test_common_zeros_examples():
    assert len(common_zeros([], F3, nvars=2)) == 9
    f = MultiPoly(F5, 1, 2, {(2,): 1, (0,): 4})  # X^2 - 1
    assert common_zeros([f], F5).points == ((1,), (4,))
    a = MultiPoly(F5, 2, 1, {(1, 0): 1, (0, 1): 1})
    b = MultiPoly(F5, 2, 1, {(1, 0): 1, (0, 1): 4})
    assert common_zeros([a, b], F5).points == ((0, 0),)


def test_common_zeros_budget():
    with pytest.raises(BudgetExceeded):
        common_zeros([], F5, nvars=3, budget=100)


def test_common_zeros_lex_order():
    pts = common_zeros([], F3, nvars=2).points
    assert list(pts) == sorted(pts)
    assert all_points(F3, 2).tolist() == [list(p) for p in pts]


@pytest.mark.parametrize("spec", [F2, F3, F5, F7, F4], ids=lambda s: f"q{s.q}")
def test_univariate_root_bound(spec):
    rng = np.random.default_rng(11)
    for deg in range(1, 5):
        for _ in range(30):
            vec = rng.integers(0, spec.q, size=deg + 1).tolist()
            f = MultiPoly.from_vector(spec, 1, deg, vec)
            if f.is_zero():
                continue
            assert len(common_zeros([f], spec)) <= f.total_degree()


def test_pointset_rejects_duplicates():
    with pytest.raises(DuplicatePoints):
        PointSet.of([(0, 0), (0, 0)], F2)
    with pytest.raises(DuplicatePoints):
        vanish_probability_exact([(1, 1), (1, 1)], F2, 2, 1)


def test_vanish_exact_hand_cases():
    # frozen from tests/oracles.brute_vanishing_count
    assert vanish_probability_exact([(0, 0), (1, 1)], F2, 2, 1) == Fraction(1, 4)
    assert vanish_probability_exact([(0, 0), (0, 1)], F2, 2, 1) == Fraction(1, 4)
    for spec, nvars, d in [(F2, 2, 1), (F3, 2, 2), (F5, 1, 3), (F3, 3, 1)]:
        assert vanish_probability_exact([(0,) * nvars], spec, nvars, d) == Fraction(1, spec.q)


def test_hand_cases_match_brute_force():
    for pts in ([(0, 0), (1, 1)], [(0, 0), (0, 1)]):
        elems = [[F2(x) for x in p] for p in pts]
        assert brute_vanishing_count(2, 2, 1, elems) == (2, 8)


def test_enumerator_visits_whole_space():
    for spec, nvars, d in [(F2, 2, 1), (F3, 2, 2), (F5, 1, 3), (F2, 2, 3)]:
        _, visited = count_vanishing([(0,) * nvars], spec, nvars, d)
        assert visited == spec.q ** monomial_count(nvars, d)


def test_vanish_exact_budget():
    with pytest.raises(BudgetExceeded):
        vanish_probability_exact([(0, 0)], F5, 2, 3, budget=1000)


def _random_pointsets(spec, nvars, m, count, rng):
    out = []
    total = spec.q**nvars
    for _ in range(count):
        idx = rng.choice(total, size=m, replace=False)
        pts = [tuple(int(x) for x in np.unravel_index(i, (spec.q,) * nvars)) for i in idx]
        out.append(pts)
    return out


@pytest.mark.parametrize("q,nvars,d", [(2, 2, 1), (3, 1, 2), (3, 2, 1), (5, 1, 2), (2, 2, 2)])
def test_exact_matches_brute_force_and_kernel(q, nvars, d):
    spec = field_make(q)
    rng = np.random.default_rng(q * 100 + nvars * 10 + d)
    for m in (1, 2, 3):
        if m > q**nvars:
            continue
        for pts in _random_pointsets(spec, nvars, m, 3, rng):
            elems = [[spec(x) for x in p] for p in pts]
            hits, total = brute_vanishing_count(q, nvars, d, elems)
            assert vanish_probability_exact(pts, spec, nvars, d) == Fraction(hits, total)
            assert kernel_vanishing_count(q, nvars, d, elems) == (hits, total)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_exact_in_extension_matches_kernel(p):
    ext = field_make(p, 2)
    spec = field_make(p)
    rng = np.random.default_rng(p)
    for nvars, d, m in [(1, 2, 2), (2, 1, 2), (2, 2, 3)]:
        for pts in _random_pointsets(ext, nvars, m, 3, rng):
            elems = [[ext(x) for x in pt] for pt in pts]
            hits, total = kernel_vanishing_count(p, nvars, d, elems)
            assert vanish_probability_exact(PointSet.of(elems), spec, nvars, d) == Fraction(hits, total)


def test_exact_with_extension_coefficients():
    # F_4 coefficients and F_4 points exercise the full-field combine path.
    rng = np.random.default_rng(9)
    for pts in _random_pointsets(F4, 1, 2, 3, rng):
        elems = [[F4(x) for x in p] for p in pts]
        hits, total = brute_vanishing_count(4, 1, 1, elems)
        assert vanish_probability_exact(pts, F4, 1, 1) == Fraction(hits, total)


def test_vanishing_bound_small_grid():
    rng = np.random.default_rng(0)
    for q in (2, 3, 5):
        spec = field_make(q)
        for nvars in (1, 2):
            for d in (1, 2):
                for m in (1, 2, 3):
                    if q <= comb(m, 2) or d < m - 1 or m > q**nvars:
                        continue
                    for pts in _random_pointsets(spec, nvars, m, 3, rng):
                        assert vanish_probability_exact(pts, spec, nvars, d) <= Fraction(1, q**m)


def test_mc_rejects_zero_trials():
    with pytest.raises(ValueError):
        vanish_probability_mc([(0, 0)], F2, 2, 1, 0, 0)


def test_mc_matches_exact_f2():
    est = vanish_probability_mc([(0, 0), (1, 1)], F2, 2, 1, 10**5, np.random.default_rng(8))
    assert abs(est.estimate - 0.25) <= 5 * sqrt(0.25 * 0.75 / 10**5)
    assert est.trials == 10**5


def test_mc_vanishing_bound_f7():
    spec = field_make(7)
    pts = [(1, 2), (3, 5), (6, 0)]
    trials = 10**6
    est = vanish_probability_mc(pts, spec, 2, 2, trials, np.random.default_rng(77))
    bound = 7.0**-3
    sigma = sqrt(bound * (1 - bound) / trials)
    assert est.estimate <= bound + 5 * sigma


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 5, 7]), st.integers(1, 3), st.integers(0, 3))
def test_sub_is_homomorphism_property(seed, q, nvars, d):
    spec = field_make(q)
    rng = np.random.default_rng(seed)
    f, g = poly_random(spec, nvars, d, rng), poly_random(spec, nvars, d, rng)
    pts = rng.integers(0, q, size=(20, nvars))
    lhs = poly_eval_many(f - g, pts)
    rhs = (poly_eval_many(f, pts) - poly_eval_many(g, pts)) % q
    assert (lhs == rhs).all()
