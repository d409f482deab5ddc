"""Random algebraic construction of K_{s,t}-free bipartite graphs.

``V`` is F_q^s and each ``u_i`` in ``U`` carries a random polynomial
``f_i`` of degree at most ``d``.  In the graph variant ``u_i`` is joined
to the points ``(x, f_i(x))`` for ``x`` in F_q^{s-1}; in the zero-set
variant it is joined to the zeros of an s-variate ``f_i``.  Polynomials
are drawn one index at a time and a candidate is rejected when it
duplicates an earlier one or when some s rows including it would share
``t`` or more columns.

Columns are numbered by reading a point of F_q^s as base-q digits with
the first coordinate most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    ConstructionFailed,
    EllTooSmall,
    IncompatibleField,
    OutOfRange,
    TooSmall,
    VariantMismatch,
)
from .gf import FieldSpec, field_make, field_of_order, next_prime_below
from .graph import BipartiteGraph
from .intmath import iroot, iroot_ceil
from .poly import (
    DEFAULT_MAX_MONOMIALS,
    MultiPoly,
    all_points,
    common_zero_mask,
    monomial_values,
    poly_random,
)

GRAPH = "graph"
ZEROSET = "zeroset"
VARIANTS = (GRAPH, ZEROSET)
DEFAULT_RETRIES = 200


def default_degree(s: int, t: int, variant: str = GRAPH) -> int:
    """``ceil(t^(1/(s-1))) - 1`` for the graph variant.

    The zero-set variant uses ``ceil(t^(1/s)) - 1``, which keeps the
    Bezout count of ``s`` hypersurfaces in F_q^s below ``t``.
    """
    root_of = s - 1 if variant == GRAPH else s
    return iroot_ceil(t, root_of) - 1


@dataclass(frozen=True)
class ConstructionParams:
    s: int
    t: int
    q: int
    d: int
    ell: int
    variant: str = GRAPH

    @property
    def n(self) -> int:
        return self.q**self.s

    @property
    def nvars(self) -> int:
        return self.s - 1 if self.variant == GRAPH else self.s

    @property
    def lower_target_exponent(self) -> Fraction:
        return Fraction(self.d + 1, self.s * (self.s - 1))

    @property
    def union_bound_ok(self) -> bool:
        """Whether ``ell^(s-1) d^(s-1) q^-(d+1) < 1``, in exact integers."""
        return (self.ell * self.d) ** (self.s - 1) < self.q ** (self.d + 1)

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "q": self.q,
            "d": self.d,
            "ell": self.ell,
            "n": self.n,
            "variant": self.variant,
            "lower_target_exponent": str(self.lower_target_exponent),
            "union_bound_ok": self.union_bound_ok,
        }


def params_derive(s: int, t: int, q: int, variant: str = GRAPH, d: int | None = None,
                  ell: int | None = None) -> ConstructionParams:
    """Degree cap and ``ell = floor(floor((q^(d+1))^(1/(s-1))) / (2d))``.

    Because ``2d`` is a positive integer the nested floors agree with
    ``floor(q^((d+1)/(s-1)) / (2d))``.  The zero-set variant reuses the
    same ``ell`` formula with its own default degree; both may be
    overridden.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if not 2 <= s <= t:
        raise ValueError(f"need 2 <= s <= t, got s={s}, t={t}")
    field_of_order(q)
    if d is None:
        d = default_degree(s, t, variant)
    if d < 1:
        raise ValueError(f"degree cap must be >= 1, got {d}")
    bezout_exp = s - 1 if variant == GRAPH else s
    if d**bezout_exp >= t:
        raise ValueError(f"d={d} leaves no Bezout headroom: {d}^{bezout_exp} >= t={t}")
    if ell is None:
        ell = iroot(q ** (d + 1), s - 1) // (2 * d)
    if ell < 1:
        raise EllTooSmall(f"ell={ell} for s={s}, t={t}, q={q}; q is too small")
    return ConstructionParams(s, t, q, d, ell, variant)


@dataclass(frozen=True)
class Construction:
    params: ConstructionParams
    polynomials: tuple[MultiPoly, ...]
    graph: BipartiteGraph
    seed: int
    # Rejected candidates before acceptance, per index.
    retries_used: tuple[int, ...] = field(default=())

    @property
    def retries_total(self) -> int:
        return sum(self.retries_used)


class _RowBuilder:
    """Maps polynomials to bit rows; caches monomial values on the domain."""

    def __init__(self, spec: FieldSpec, params: ConstructionParams):
        self.spec = spec
        self.params = params
        q, s = params.q, params.s
        self.domain = all_points(spec, params.nvars)
        self.mvals = monomial_values(spec, params.nvars, params.d, self.domain)
        if params.variant == GRAPH:
            self.base_cols = np.arange(q ** (s - 1), dtype=np.int64) * q

    def values(self, f: MultiPoly) -> np.ndarray:
        c = np.asarray(f.coefficient_vector(), dtype=np.int64)
        return (self.mvals @ c) % self.params.q

    def columns(self, f: MultiPoly) -> np.ndarray:
        vals = self.values(f)
        if self.params.variant == GRAPH:
            return self.base_cols + vals
        return np.flatnonzero(vals == 0)

    def row(self, f: MultiPoly) -> int:
        bits = np.zeros(self.params.n, dtype=np.uint8)
        bits[self.columns(f)] = 1
        return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def _check_arity(f: MultiPoly, params: ConstructionParams) -> None:
    if f.nvars != params.nvars:
        raise ArityMismatch(f"{params.variant} variant needs {params.nvars} variables, got {f.nvars}")
    if f.spec.q != params.q:
        raise IncompatibleField(f"polynomial over F_{f.spec.q} used with q={params.q}")


def neighborhood_points(f: MultiPoly, params: ConstructionParams) -> set[tuple[int, ...]]:
    """The neighborhood S_i of a polynomial as a set of points of F_q^s."""
    _check_arity(f, params)
    builder = _RowBuilder(f.spec, params)
    q, s = params.q, params.s
    place = q ** np.arange(s - 1, -1, -1, dtype=np.int64)
    cols = builder.columns(f)
    return {tuple(int(x) for x in (c // place) % q) for c in cols}


def point_column(point: Sequence[int], q: int) -> int:
    col = 0
    for x in point:
        col = col * q + int(x)
    return col


def _violates(rows: Sequence[int], new_row: int, s: int, t: int) -> bool:
    """Whether ``new_row`` together with some ``s - 1`` earlier rows has
    ``t`` or more common columns."""
    need = s - 1
    if need == 0:
        return new_row.bit_count() >= t
    count = len(rows)

    def search(start: int, depth: int, acc: int) -> bool:
        for i in range(start, count - (need - depth) + 1):
            nxt = acc & rows[i]
            if nxt.bit_count() < t:
                continue
            if depth + 1 == need or search(i + 1, depth + 1, nxt):
                return True
        return False

    return search(0, 0, new_row)


def build(s: int, t: int, q: int, variant: str = GRAPH, seed: int = 0,
          retry_budget: int = DEFAULT_RETRIES, d: int | None = None, ell: int | None = None,
          max_monomials: int = DEFAULT_MAX_MONOMIALS) -> Construction:
    """Pick ``f_1, ..., f_ell`` in sequence by rejection sampling.

    Index ``k`` draws from its own child of ``SeedSequence(seed)``, so the
    result depends only on the arguments.  Raises ConstructionFailed with
    the zero-based index when ``retry_budget`` candidates in a row are
    rejected.
    """
    if retry_budget < 1:
        raise ValueError("retry_budget must be >= 1")
    params = params_derive(s, t, q, variant, d=d, ell=ell)
    spec = field_make(q)
    builder = _RowBuilder(spec, params)
    streams = np.random.SeedSequence(seed).spawn(params.ell)

    polys: list[MultiPoly] = []
    rows: list[int] = []
    seen: set[MultiPoly] = set()
    retries: list[int] = []
    for k, stream in enumerate(streams):
        rng = np.random.default_rng(stream)
        for attempt in range(retry_budget):
            f = poly_random(spec, params.nvars, params.d, rng, max_monomials)
            if f in seen:
                continue
            row = builder.row(f)
            if _violates(rows, row, s, t):
                continue
            polys.append(f)
            rows.append(row)
            seen.add(f)
            retries.append(attempt)
            break
        else:
            raise ConstructionFailed(k, retry_budget, retries)

    provenance = {"s": s, "t": t, "q": q, "variant": variant, "seed": seed}
    graph = BipartiteGraph(params.ell, params.n, tuple(rows), provenance)
    return Construction(params, tuple(polys), graph, seed, tuple(retries))


def rows_from_polynomials(polys: Sequence[MultiPoly], params: ConstructionParams) -> tuple[int, ...]:
    if not polys:
        return ()
    builder = _RowBuilder(polys[0].spec, params)
    for f in polys:
        _check_arity(f, params)
    return tuple(builder.row(f) for f in polys)


def intersection_size_via_differences(polys: Sequence[MultiPoly], i1: int, params: ConstructionParams) -> int:
    """Size of the common zero set of ``f_{i1} - f_j`` over the other
    listed polynomials, which equals ``|S_{i1} ∩ ... ∩ S_{ij}|`` in the
    graph variant."""
    if params.variant != GRAPH:
        raise VariantMismatch("the difference identity holds only for the graph variant")
    anchor = polys[i1]
    _check_arity(anchor, params)
    diffs = [anchor - g for j, g in enumerate(polys) if j != i1]
    return int(np.count_nonzero(common_zero_mask(diffs, anchor.spec, params.nvars)))


def subsample(c: Construction, m: int, rng) -> BipartiteGraph:
    """Induced subgraph on a uniform ``m``-subset of ``U`` and all of ``V``."""
    ell = c.params.ell
    if not 1 <= m <= ell:
        raise OutOfRange(f"m must lie in [1, {ell}], got {m}")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    picked = np.sort(rng.choice(ell, size=m, replace=False))
    return c.graph.subgraph([int(i) for i in picked])


def field_for_n(n: int, s: int) -> tuple[int, int]:
    """Prime ``q`` with ``q^s <= n`` and ``q^s >= n / 2^s``."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if n < 2**s:
        raise TooSmall(f"n={n} is below 2^{s}")
    q = next_prime_below(iroot(n, s))
    return q, q**s
