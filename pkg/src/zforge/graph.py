"""Bipartite graphs with bit-vector rows and K_{s,t}-freeness checks.

Orientation is fixed throughout: ``U`` indexes rows, ``V`` indexes
columns, and the ``s`` side of K_{s,t} lives in ``U``.  Use
:meth:`BipartiteGraph.transpose` to swap sides explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import BudgetExceeded
from .intmath import iroot


def _popcount(x: int) -> int:
    return x.bit_count()


def _lowest_bits(x: int, k: int) -> tuple[int, ...]:
    out = []
    while x and len(out) < k:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return tuple(out)


@dataclass(frozen=True)
class BipartiteGraph:
    """An ``m x n`` 0/1 incidence matrix; bit ``j`` of ``rows[i]`` is set
    iff ``u_i ~ v_j``."""

    m: int
    n: int
    rows: tuple[int, ...]
    provenance: Mapping[str, Any] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.rows) != self.m:
            raise ValueError(f"expected {self.m} rows, got {len(self.rows)}")
        limit = 1 << self.n
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r:#x} does not fit in width {self.n}")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]] | np.ndarray, provenance=None) -> "BipartiteGraph":
        mat = np.asarray(matrix, dtype=np.uint8)
        if mat.ndim != 2:
            raise ValueError("matrix must be two-dimensional")
        m, n = mat.shape
        rows = tuple(int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little") for row in mat)
        return cls(m, n, rows, provenance)

    @classmethod
    def from_neighborhoods(cls, n: int, neighborhoods: Iterable[Iterable[int]], provenance=None) -> "BipartiteGraph":
        rows = []
        for nbhd in neighborhoods:
            r = 0
            for j in nbhd:
                r |= 1 << j
            rows.append(r)
        return cls(len(rows), n, tuple(rows), provenance)

    def to_matrix(self) -> np.ndarray:
        nbytes = (self.n + 7) // 8
        out = np.zeros((self.m, self.n), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            bits = np.unpackbits(np.frombuffer(r.to_bytes(nbytes, "little"), dtype=np.uint8), bitorder="little")
            out[i] = bits[: self.n]
        return out

    @property
    def edges(self) -> int:
        return sum(_popcount(r) for r in self.rows)

    def row_degrees(self) -> list[int]:
        return [_popcount(r) for r in self.rows]

    def col_degrees(self) -> list[int]:
        if self.m == 0:
            return [0] * self.n
        return self.to_matrix().sum(axis=0, dtype=np.int64).tolist()

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def common_neighborhood(self, indices: Iterable[int]) -> int:
        acc = (1 << self.n) - 1
        for i in indices:
            acc &= self.rows[i]
        return acc

    def transpose(self) -> "BipartiteGraph":
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BipartiteGraph(self.n, self.m, tuple(cols))

    def subgraph(self, row_indices: Sequence[int]) -> "BipartiteGraph":
        return BipartiteGraph(len(row_indices), self.n, tuple(self.rows[i] for i in row_indices), self.provenance)


class KstVerdict(NamedTuple):
    free: bool
    rows: tuple[int, ...] | None = None
    cols: tuple[int, ...] | None = None

    @property
    def witness(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        return None if self.free else (self.rows, self.cols)


FREE = KstVerdict(True)


def kst_free(g: BipartiteGraph, s: int, t: int) -> KstVerdict:
    """Decide whether ``g`` has no K_{s,t} with the ``s`` side in ``U``.

    Subsets of rows are explored in lexicographic order with the common
    neighborhood intersected incrementally; a prefix is abandoned as soon
    as fewer than ``t`` columns survive.  The first violating subset in
    that order is returned, paired with its ``t`` lowest common columns.
    """
    if s < 1 or t < 1:
        raise ValueError(f"need s, t >= 1, got s={s}, t={t}")
    if s > g.m:
        return FREE
    rows = g.rows
    m = g.m

    def search(start: int, chosen: tuple[int, ...], acc: int):
        depth = len(chosen)
        for i in range(start, m - (s - depth) + 1):
            nxt = acc & rows[i]
            if _popcount(nxt) < t:
                continue
            if depth + 1 == s:
                return chosen + (i,), nxt
            found = search(i + 1, chosen + (i,), nxt)
            if found:
                return found
        return None

    found = search(0, (), (1 << g.n) - 1)
    if found is None:
        return FREE
    chosen, common = found
    return KstVerdict(False, chosen, _lowest_bits(common, t))


def kst_free_reference(g: BipartiteGraph, s: int, t: int, budget: int = 10**7) -> KstVerdict:
    """Naive oracle: test every s-subset of rows against every t-subset of
    columns."""
    if s < 1 or t < 1:
        raise ValueError(f"need s, t >= 1, got s={s}, t={t}")
    work = comb(g.m, s) * comb(g.n, t)
    if work > budget:
        raise BudgetExceeded(f"{work} submatrices exceed budget {budget}")
    mat = g.to_matrix()
    for rs in combinations(range(g.m), s):
        for cs in combinations(range(g.n), t):
            if all(mat[i, j] for i in rs for j in cs):
                return KstVerdict(False, rs, cs)
    return FREE


def witness_is_valid(g: BipartiteGraph, rows: Sequence[int], cols: Sequence[int]) -> bool:
    return all(g.has_edge(i, j) for i in rows for j in cols)


class DoubleCount(NamedTuple):
    lhs: int
    rhs: int
    holds: bool


def kst_double_count(g: BipartiteGraph, s: int, t: int) -> DoubleCount:
    """Count s-subsets of ``U`` inside column neighborhoods.

    A K_{s,t}-free graph puts each s-subset of ``U`` in at most ``t - 1``
    column neighborhoods, so ``sum_v C(deg v, s) <= (t - 1) C(m, s)``.
    """
    lhs = sum(comb(deg, s) for deg in g.col_degrees())
    rhs = (t - 1) * comb(g.m, s)
    return DoubleCount(lhs, rhs, lhs <= rhs)


def _falling_binomial(x: Fraction, s: int) -> Fraction:
    # x(x-1)...(x-s+1)/s!, taken as 0 below s-1 so that it stays convex.
    if x < s - 1:
        return Fraction(0)
    return prod((x - i for i in range(s)), start=Fraction(1)) / factorial(s)


def _kst_upper(m: int, n: int, s: int, t: int) -> int:
    budget = (t - 1) * comb(m, s)

    def ok(e: int) -> bool:
        return n * _falling_binomial(Fraction(e, n), s) <= budget

    lo, hi = 0, m * n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def kst_upper_bound(m: int, n: int, s: int, t: int) -> int:
    """Largest edge count compatible with the convex double count.

    By Jensen, a K_{s,t}-free graph with ``e`` edges satisfies
    ``n * B(e/n, s) <= (t - 1) C(m, s)`` where ``B`` is the real binomial,
    so the returned value bounds z(m, n; s, t) from above.
    """
    if m < 1 or n < 1:
        raise ValueError(f"need m, n >= 1, got m={m}, n={n}")
    if s < 1 or t < 1:
        raise ValueError(f"need s, t >= 1, got s={s}, t={t}")
    return _kst_upper(m, n, s, t)


def lower_target(m: int, n: int, s: int) -> float:
    """``m * n**(1 - 1/s)``.  Computed in integers when ``n`` is a perfect
    ``s``-th power, so the value is exact there; otherwise a float power."""
    root = iroot(n, s)
    if root**s == n:
        return float(m * root ** (s - 1))
    return m * n ** (1 - 1 / s)


@dataclass(frozen=True)
class DensityReport:
    m: int
    n: int
    s: int
    t: int
    edges: int
    kst_upper: int
    lower_target: float
    ratio_lower: float
    double_count_lhs: int
    double_count_rhs: int

    def as_dict(self) -> dict[str, Any]:
        return dict(self.__dict__)


def density_report(g: BipartiteGraph, s: int, t: int) -> DensityReport:
    e = g.edges
    target = lower_target(g.m, g.n, s) if g.m and g.n else 0.0
    dc = kst_double_count(g, s, t)
    upper = _kst_upper(g.m, g.n, s, t) if g.m and g.n else 0
    return DensityReport(
        m=g.m,
        n=g.n,
        s=s,
        t=t,
        edges=e,
        kst_upper=upper,
        lower_target=target,
        ratio_lower=e / target if target else 0.0,
        double_count_lhs=dc.lhs,
        double_count_rhs=dc.rhs,
    )
