"""Exact Zarankiewicz numbers z(m, n; s, t) for small instances.

Two independent routes: :func:`z_exact_naive` scans every 0/1 matrix,
and :func:`z_exact` runs a row-by-row branch and bound.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations, product
from math import comb

import numpy as np

from .errors import BudgetExceeded
from .graph import BipartiteGraph

NAIVE_MAX_CELLS = 25
DEFAULT_NODE_BUDGET = 10**8
_CHUNK = 1 << 22


@dataclass(frozen=True)
class OracleResult:
    z: int
    witness: BipartiteGraph
    nodes_explored: int
    exact: bool = True


class OracleBudgetExceeded(BudgetExceeded):
    """Node budget ran out; ``result`` holds the best graph found, whose
    edge count is only a lower bound on z."""

    def __init__(self, result: OracleResult) -> None:
        super().__init__(f"node budget exhausted after {result.nodes_explored} nodes; z >= {result.z}")
        self.result = result


def _check_args(m: int, n: int, s: int, t: int) -> None:
    if m < 1 or n < 1:
        raise ValueError(f"need m, n >= 1, got m={m}, n={n}")
    if s < 1 or t < 1:
        raise ValueError(f"need s, t >= 1, got s={s}, t={t}")


def _all_ones(m: int, n: int) -> BipartiteGraph:
    return BipartiteGraph(m, n, ((1 << n) - 1,) * m)


def _reading_key(g: BipartiteGraph) -> int:
    """Row-major bit string of ``g`` with entry (0, 0) most significant."""
    key = 0
    for r in g.rows:
        for j in range(g.n):
            key = key << 1 | (r >> j & 1)
    return key


def _scan(a: int, b: int, k: int, thr: int) -> tuple[int, np.ndarray]:
    """Max popcount over ``x < 2^(a*b)`` such that no ``k`` of the ``a``
    width-``b`` fields of ``x`` share ``thr`` set bits; also returns every
    maximizing ``x``."""
    cells = a * b
    mask = (1 << b) - 1
    pop = np.array([bin(v).count("1") for v in range(1 << b)], dtype=np.int8)
    subsets = list(combinations(range(a), k))
    best = -1
    winners: list[np.ndarray] = []
    for start in range(0, 1 << cells, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, 1 << cells), dtype=np.uint32)
        fields = [(x >> np.uint32(i * b)) & np.uint32(mask) for i in range(a)]
        ok = np.ones(len(x), dtype=bool)
        for sub in subsets:
            acc = fields[sub[0]]
            for i in sub[1:]:
                acc = acc & fields[i]
            ok &= pop[acc] < thr
        weight = np.where(ok, np.bitwise_count(x).astype(np.int16), -1)
        top = int(weight.max())
        if top > best:
            best, winners = top, [x[weight == top]]
        elif top == best:
            winners.append(x[weight == top])
    return best, np.concatenate(winners)


def z_exact_naive(m: int, n: int, s: int, t: int, max_cells: int = NAIVE_MAX_CELLS) -> OracleResult:
    """z(m, n; s, t) by scanning all ``2^(m*n)`` matrices.

    The forbidden pattern is tested on whichever side has fewer subsets
    (s rows sharing t columns, or equivalently t columns sharing s rows).
    The witness is the maximizer whose row-major bit string is
    lexicographically smallest.
    """
    _check_args(m, n, s, t)
    if m * n > max_cells:
        raise BudgetExceeded(f"{m}x{n} has more than {max_cells} cells")
    if m < s or n < t:
        return OracleResult(m * n, _all_ones(m, n), 0)
    by_rows = comb(m, s) <= comb(n, t)
    a, b, k, thr = (m, n, s, t) if by_rows else (n, m, t, s)
    best, winners = _scan(a, b, k, thr)
    field_mask = (1 << b) - 1
    candidates = []
    for x in winners.tolist():
        g = BipartiteGraph(a, b, tuple((x >> (i * b)) & field_mask for i in range(a)))
        candidates.append(g if by_rows else g.transpose())
    witness = min(candidates, key=_reading_key)
    return OracleResult(best, witness, 1 << (m * n))


def _double_count_room(col_deg: list[int], rows_left: int, s: int, cap: int) -> int:
    """Most edges ``rows_left`` more rows can add without breaking
    ``sum_v C(deg v, s) <= cap``; greedy is optimal as the costs are convex."""
    used = sum(comb(c, s) for c in col_deg)
    room = cap - used
    if room < 0:
        return -1
    heap = [(comb(c, s - 1), c, 0) for c in col_deg]
    heapq.heapify(heap)
    added = 0
    while heap:
        cost, c, a = heapq.heappop(heap)
        if cost > room:
            break
        room -= cost
        added += 1
        a += 1
        if a < rows_left:
            heapq.heappush(heap, (comb(c + a, s - 1), c, a))
    return added


def z_exact(m: int, n: int, s: int, t: int, node_budget: int = DEFAULT_NODE_BUDGET,
            prune: bool = True) -> OracleResult:
    """z(m, n; s, t) by branch and bound over rows.

    Rows are placed in non-increasing weight order.  With ``prune`` on,
    columns that agree on every placed row form a class and a new row
    may only use a prefix of each class, and branches are cut by the
    row-weight bound and by the remaining room in the double count
    ``sum_v C(deg v, s) <= (t - 1) C(m, s)``.  With ``prune`` off only
    the row order and feasibility are used.

    Raises OracleBudgetExceeded, carrying the best graph found, when more
    than ``node_budget`` nodes are needed.
    """
    _check_args(m, n, s, t)
    if m < s or n < t:
        return OracleResult(m * n, _all_ones(m, n), 0)
    full = (1 << n) - 1
    cap = (t - 1) * comb(m, s)
    best = [-1, ()]
    nodes = [0]

    def feasible(rows: list[int], row: int) -> bool:
        need = s - 1
        if need == 0:
            return row.bit_count() < t
        count = len(rows)

        def hit(start: int, depth: int, acc: int) -> bool:
            for i in range(start, count - (need - depth) + 1):
                nxt = acc & rows[i]
                if nxt.bit_count() < t:
                    continue
                if depth + 1 == need or hit(i + 1, depth + 1, nxt):
                    return True
            return False

        return not hit(0, 0, row)

    def candidates(classes: list[list[int]], w_max: int) -> list[int]:
        if not prune:
            out = [r for r in range(full + 1) if r.bit_count() <= w_max]
        else:
            out = []
            for counts in product(*(range(len(c) + 1) for c in classes)):
                if sum(counts) > w_max:
                    continue
                r = 0
                for cls, c in zip(classes, counts):
                    for j in cls[:c]:
                        r |= 1 << j
                out.append(r)
        out.sort(key=lambda r: (-r.bit_count(), r))
        return out

    def refine(classes: list[list[int]], row: int) -> list[list[int]]:
        out = []
        for cls in classes:
            ins = [j for j in cls if row >> j & 1]
            outs = [j for j in cls if not row >> j & 1]
            out.extend(part for part in (ins, outs) if part)
        return out

    def search(rows: list[int], col_deg: list[int], classes, edges: int, w_prev: int) -> None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise _Stop
        r = len(rows)
        if r == m:
            if edges > best[0]:
                best[0], best[1] = edges, tuple(rows)
            return
        left = m - r
        if prune:
            room = _double_count_room(col_deg, left, s, cap)
            if room < 0 or edges + min(left * w_prev, room) <= best[0]:
                return
        for row in candidates(classes, w_prev):
            w = row.bit_count()
            if prune and edges + left * w <= best[0]:
                break
            if not feasible(rows, row):
                continue
            deg = col_deg[:]
            for j in range(n):
                if row >> j & 1:
                    deg[j] += 1
            search(rows + [row], deg, refine(classes, row) if prune else classes, edges + w, w)

    try:
        search([], [0] * n, [list(range(n))], 0, n)
    except _Stop:
        rows = best[1] if best[0] >= 0 else (0,) * m
        partial = OracleResult(max(best[0], 0), BipartiteGraph(m, n, tuple(rows)), nodes[0], exact=False)
        raise OracleBudgetExceeded(partial) from None
    return OracleResult(best[0], BipartiteGraph(m, n, best[1]), nodes[0])


class _Stop(Exception):
    pass
