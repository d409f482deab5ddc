from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest

from zforge.construction import build
from zforge.errors import BudgetExceeded
from zforge.graph import (
    BipartiteGraph,
    density_report,
    kst_double_count,
    kst_free,
    kst_free_reference,
    kst_upper_bound,
    lower_target,
    witness_is_valid,
)


def _from_code(m, n, code):
    mask = (1 << n) - 1
    return BipartiteGraph(m, n, tuple((code >> (i * n)) & mask for i in range(m)))


def _ones(m, n):
    return BipartiteGraph.from_matrix(np.ones((m, n), dtype=int))


# --- representation -------------------------------------------------------

def test_matrix_round_trip():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m, n = rng.integers(1, 12, size=2)
        mat = rng.integers(0, 2, size=(m, n))
        g = BipartiteGraph.from_matrix(mat)
        assert np.array_equal(g.to_matrix(), mat)
        assert g.edges == mat.sum()
        assert g.row_degrees() == mat.sum(axis=1).tolist()
        assert g.col_degrees() == mat.sum(axis=0).tolist()
        assert sum(g.row_degrees()) == sum(g.col_degrees()) == g.edges


def test_row_width_enforced():
    with pytest.raises(ValueError):
        BipartiteGraph(1, 3, (0b1000,))
    with pytest.raises(ValueError):
        BipartiteGraph(2, 3, (1,))


def test_from_neighborhoods_and_edges():
    g = BipartiteGraph.from_neighborhoods(4, [[0, 3], [], [1, 2, 3]])
    assert g.rows == (0b1001, 0, 0b1110)
    assert g.has_edge(0, 3) and not g.has_edge(1, 0)
    assert g.common_neighborhood([0, 2]) == 0b1000


def test_transpose_involution():
    rng = np.random.default_rng(1)
    mat = rng.integers(0, 2, size=(5, 7))
    g = BipartiteGraph.from_matrix(mat)
    assert np.array_equal(g.transpose().to_matrix(), mat.T)
    assert g.transpose().transpose() == g


# --- kst_free ---------------------------------------------------------------

def test_kst_free_examples():
    v = kst_free(_ones(2, 2), 2, 2)
    assert not v.free and v.witness == ((0, 1), (0, 1))
    assert kst_free(BipartiteGraph.from_matrix(np.eye(3, dtype=int)), 2, 2).free
    assert kst_free(BipartiteGraph.from_matrix(np.eye(3, dtype=int)), 2, 1).free
    v = kst_free_reference(_ones(1, 1), 1, 1)
    assert not v.free and v.witness == ((0,), (0,))
    assert kst_free_reference(BipartiteGraph.from_matrix(np.eye(3, dtype=int)), 2, 1).free


def test_kst_free_trivial_when_s_exceeds_m():
    assert kst_free(_ones(2, 5), 3, 2).free


def test_orientation_matters():
    # two rows sharing three columns: a K_{2,3} but no K_{3,2}
    g = BipartiteGraph(2, 3, (0b111, 0b111))
    assert not kst_free(g, 2, 3).free
    assert kst_free(g, 3, 2).free
    assert not kst_free(g.transpose(), 3, 2).free


def test_build_output_is_free():
    c = build(2, 2, 5, seed=7)
    assert kst_free(c.graph, 2, 2).free


def test_reference_budget():
    with pytest.raises(BudgetExceeded):
        kst_free_reference(_ones(20, 20), 3, 3, budget=1000)


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_exhaustive_equivalence(m, n):
    pairs = [(s, t) for s in range(1, 4) for t in range(1, 4)]
    for code in range(1 << (m * n)):
        g = _from_code(m, n, code)
        for s, t in pairs:
            fast = kst_free(g, s, t)
            ref = kst_free_reference(g, s, t)
            assert fast == ref, (m, n, code, s, t)


def test_random_equivalence():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        m, n = (int(x) for x in rng.integers(1, 9, size=2))
        s, t = (int(x) for x in rng.integers(1, 4, size=2))
        density = rng.uniform(0.2, 0.9)
        g = BipartiteGraph.from_matrix(rng.random((m, n)) < density)
        assert kst_free(g, s, t) == kst_free_reference(g, s, t)


def test_witness_soundness():
    rng = np.random.default_rng(5)
    seen = 0
    for _ in range(2000):
        m, n = (int(x) for x in rng.integers(2, 10, size=2))
        s, t = (int(x) for x in rng.integers(1, 4, size=2))
        g = BipartiteGraph.from_matrix(rng.random((m, n)) < 0.6)
        v = kst_free(g, s, t)
        if v.free:
            continue
        seen += 1
        rows, cols = v.witness
        assert len(set(rows)) == s and len(set(cols)) == t
        mat = g.to_matrix()
        assert all(mat[i, j] == 1 for i in rows for j in cols)
        assert witness_is_valid(g, rows, cols)
    assert seen > 100


def test_transpose_duality():
    rng = np.random.default_rng(9)
    for _ in range(2000):
        m, n = (int(x) for x in rng.integers(1, 9, size=2))
        s, t = (int(x) for x in rng.integers(1, 4, size=2))
        g = BipartiteGraph.from_matrix(rng.random((m, n)) < 0.5)
        a, b = kst_free(g, s, t), kst_free(g.transpose(), t, s)
        assert a.free == b.free
        if not a.free:
            # the swapped witness is again all ones in g
            assert witness_is_valid(g, b.cols, b.rows)


# --- double count and upper bound -------------------------------------------

def test_double_count_examples():
    empty = BipartiteGraph(4, 5, (0,) * 4)
    assert kst_double_count(empty, 2, 3) == (0, 2 * comb(4, 2), True)
    assert kst_double_count(_ones(2, 2), 2, 2) == (2, 1, False)
    c = build(2, 2, 5, seed=7)
    dc = kst_double_count(c.graph, 2, 2)
    assert dc.holds and dc.rhs == comb(12, 2)
    # two lines y = ax + b meet exactly once unless their slopes agree
    slopes = [f.coefficient_vector()[1] for f in c.polynomials]
    parallel = sum(slopes.count(a) * (slopes.count(a) - 1) // 2 for a in set(slopes))
    assert dc.lhs == comb(12, 2) - parallel


def test_certificate_soundness():
    rng = np.random.default_rng(11)
    for _ in range(3000):
        m, n = (int(x) for x in rng.integers(1, 10, size=2))
        s, t = (int(x) for x in rng.integers(1, 4, size=2))
        g = BipartiteGraph.from_matrix(rng.random((m, n)) < rng.uniform(0.1, 0.7))
        if kst_free(g, s, t).free:
            assert kst_double_count(g, s, t).holds


def _upper_reference(m, n, s, t):
    # linear scan with the real binomial written out directly
    cap = (t - 1) * comb(m, s)
    best = 0
    for e in range(m * n + 1):
        x = Fraction(e, n)
        val = Fraction(0)
        if x >= s - 1:
            val = Fraction(1)
            for i in range(s):
                val *= x - i
            for i in range(1, s + 1):
                val /= i
        if n * val <= cap:
            best = e
        else:
            break
    return best


def test_upper_bound_examples():
    assert kst_upper_bound(3, 3, 2, 2) == 6
    assert kst_upper_bound(2, 7, 3, 3) == 14
    assert kst_upper_bound(1, 1, 2, 2) == 1


@pytest.mark.parametrize("s,t", [(2, 2), (2, 3), (3, 3), (2, 5), (4, 4)])
def test_upper_bound_matches_scan(s, t):
    for m in range(1, 9):
        for n in range(1, 9):
            assert kst_upper_bound(m, n, s, t) == _upper_reference(m, n, s, t), (m, n)


def test_upper_bound_monotone():
    for m in range(1, 10):
        for n in range(1, 10):
            u = kst_upper_bound(m, n, 2, 2)
            assert u <= kst_upper_bound(m + 1, n, 2, 2)
            assert u <= kst_upper_bound(m, n + 1, 2, 2)
            assert u <= kst_upper_bound(m, n, 2, 3)


def test_upper_bound_dominates_free_graphs():
    rng = np.random.default_rng(13)
    for _ in range(2000):
        m, n = (int(x) for x in rng.integers(2, 9, size=2))
        g = BipartiteGraph.from_matrix(rng.random((m, n)) < 0.5)
        for s, t in [(2, 2), (2, 3), (3, 3)]:
            if kst_free(g, s, t).free:
                assert g.edges <= kst_upper_bound(m, n, s, t)


# --- density report ---------------------------------------------------------

def test_density_report_examples():
    r = density_report(build(2, 2, 5, seed=7).graph, 2, 2)
    assert (r.edges, r.lower_target, r.ratio_lower) == (60, 60.0, 1.0)
    assert r.double_count_lhs <= r.double_count_rhs
    assert r.kst_upper >= r.edges
    r = density_report(build(3, 4, 7, seed=1).graph, 3, 4)
    assert (r.edges, r.lower_target, r.ratio_lower) == (147, 147.0, 1.0)
    r = density_report(BipartiteGraph(3, 8, (0, 0, 0)), 2, 2)
    assert r.ratio_lower == 0


def test_lower_target_exact_on_powers():
    for q in (2, 3, 5, 7, 11, 101):
        for s in (2, 3, 4):
            assert lower_target(7, q**s, s) == 7 * q ** (s - 1)
    assert lower_target(3, 10, 2) == pytest.approx(3 * 10**0.5)


def test_all_pairs_of_build_share_at_most_t_minus_1():
    c = build(2, 3, 5, seed=2)
    rows = c.graph.rows
    for a, b in combinations(range(len(rows)), 2):
        assert (rows[a] & rows[b]).bit_count() <= 2
