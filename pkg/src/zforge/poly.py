"""Multivariate polynomials of bounded total degree over a FieldSpec.

Monomials are exponent tuples.  They are indexed in graded
lexicographic order: by total degree, then by exponent tuple in
descending lexicographic order, so for two variables the basis runs
``1, X1, X2, X1^2, X1*X2, X2^2, ...``.  Random sampling, exhaustive
enumeration and the file format all use this one order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, sqrt
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ArityMismatch, BudgetExceeded, DuplicatePoints, IncompatibleField, SpecMismatch
from .gf import FieldElem, FieldSpec

Monomial = tuple[int, ...]

DEFAULT_MAX_MONOMIALS = 64
DEFAULT_ENUM_BUDGET = 2**24
_CHUNK = 1 << 20
# Below this characteristic a length-64 dot product of residues fits int64.
_MATMUL_SAFE_P = 2**26


def monomial_count(nvars: int, d: int) -> int:
    if nvars < 1 or d < 0:
        raise ValueError(f"need nvars >= 1 and d >= 0, got nvars={nvars}, d={d}")
    return comb(d + nvars, nvars)


def _compositions(total: int, parts: int):
    """Exponent tuples summing to ``total``, descending lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[Monomial, ...]:
    """The monomial basis of P_d in graded lexicographic order."""
    monomial_count(nvars, d)
    return tuple(m for deg in range(d + 1) for m in _compositions(deg, nvars))


def degree_for_count(nvars: int, count: int) -> int:
    """Inverse of :func:`monomial_count` in ``d``."""
    d = 0
    while monomial_count(nvars, d) < count:
        d += 1
    if monomial_count(nvars, d) != count:
        raise ValueError(f"{count} is not a monomial count for {nvars} variables")
    return d


class MultiPoly:
    """A polynomial in ``nvars`` variables of total degree at most ``d``.

    Coefficients are stored sparsely as integer encodings with zeros
    stripped, so two polynomials are equal exactly when their term maps
    are equal.
    """

    __slots__ = ("spec", "nvars", "d", "_terms", "_hash")

    def __init__(self, spec: FieldSpec, nvars: int, d: int, terms: Mapping[Monomial, int | FieldElem] | None = None):
        if nvars < 1 or d < 0:
            raise ValueError(f"need nvars >= 1 and d >= 0, got nvars={nvars}, d={d}")
        self.spec = spec
        self.nvars = nvars
        self.d = d
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(a) for a in mono)
            if len(mono) != nvars:
                raise ArityMismatch(f"monomial {mono} has {len(mono)} exponents, expected {nvars}")
            if any(a < 0 for a in mono) or sum(mono) > d:
                raise ValueError(f"monomial {mono} outside P_{d}")
            if isinstance(c, FieldElem):
                if c.spec != spec:
                    raise SpecMismatch(f"coefficient from {c.spec!r}, expected {spec!r}")
                c = c.value
            c = int(c)
            if not 0 <= c < spec.q:
                raise ValueError(f"coefficient {c} is not an element of F_{spec.q}")
            if c:
                clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def from_vector(cls, spec: FieldSpec, nvars: int, d: int, vector: Sequence[int]) -> "MultiPoly":
        basis = monomials(nvars, d)
        if len(vector) != len(basis):
            raise ValueError(f"expected {len(basis)} coefficients, got {len(vector)}")
        return cls(spec, nvars, d, dict(zip(basis, (int(c) for c in vector))))

    @classmethod
    def zero(cls, spec: FieldSpec, nvars: int, d: int) -> "MultiPoly":
        return cls(spec, nvars, d)

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    @property
    def coeffs(self) -> dict[Monomial, FieldElem]:
        return {m: FieldElem(c, self.spec) for m, c in self._terms.items()}

    def coefficient_vector(self) -> list[int]:
        return [self._terms.get(m, 0) for m in monomials(self.nvars, self.d)]

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def _check_compatible(self, other: "MultiPoly") -> None:
        if (self.spec, self.nvars, self.d) != (other.spec, other.nvars, other.d):
            raise SpecMismatch("polynomials differ in field, arity or degree cap")

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return poly_sub(self, other)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_compatible(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = self.spec.add_int(terms.get(m, 0), c)
        return MultiPoly(self.spec, self.nvars, self.d, terms)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.spec, self.nvars, self.d, {m: self.spec.neg_int(c) for m, c in self._terms.items()})

    def __call__(self, *point) -> FieldElem:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = point[0]
        return poly_eval(self, point)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.spec, self.nvars, self.d, self._terms) == (other.spec, other.nvars, other.d, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.spec, self.nvars, self.d, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in monomials(self.nvars, self.d):
            c = self._terms.get(m)
            if c is None:
                continue
            factors = [f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(m) if a]
            if not factors:
                parts.append(str(c))
            else:
                parts.append(("" if c == 1 else f"{c}*") + "*".join(factors))
        return " + ".join(parts)


@dataclass(frozen=True)
class PointSet:
    """Distinct points sharing one field, possibly an extension of the
    coefficient field."""

    spec: FieldSpec
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise DuplicatePoints("points must be pairwise distinct")
        if self.points and len({len(p) for p in self.points}) != 1:
            raise ArityMismatch("points have differing lengths")

    @classmethod
    def of(cls, points: Iterable[Sequence[FieldElem | int]], spec: FieldSpec | None = None) -> "PointSet":
        """Build from FieldElem or int coordinates; ints are read in
        ``spec`` unless FieldElem coordinates fix the field."""
        points = [tuple(pt) for pt in points]
        elem_specs = {x.spec for pt in points for x in pt if isinstance(x, FieldElem)}
        if len(elem_specs) > 1:
            raise SpecMismatch("points drawn from different fields")
        if elem_specs:
            spec = elem_specs.pop()
        raw = [tuple(x.value if isinstance(x, FieldElem) else int(x) for x in pt) for pt in points]
        if spec is None:
            raise ValueError("cannot infer the field of an integer-only point set")
        for pt in raw:
            if any(not 0 <= x < spec.q for x in pt):
                raise ValueError(f"point {pt} has coordinates outside F_{spec.q}")
        return cls(spec, tuple(raw))

    @property
    def nvars(self) -> int:
        return len(self.points[0]) if self.points else 0

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        for pt in self.points:
            yield tuple(FieldElem(x, self.spec) for x in pt)

    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), -1)


def _check_embedding(coeff: FieldSpec, point: FieldSpec) -> None:
    if coeff == point:
        return
    if coeff.p != point.p:
        raise IncompatibleField(f"characteristic {coeff.p} vs {point.p}")
    if not coeff.is_prime_field:
        raise IncompatibleField("evaluation in an extension needs a prime coefficient field")


def monomial_values(point_spec: FieldSpec, nvars: int, d: int, pts: np.ndarray) -> np.ndarray:
    """Encodings of every basis monomial at every point, shape ``(npts, N)``."""
    pts = np.asarray(pts, dtype=np.int64).reshape(-1, nvars)
    npts = pts.shape[0]
    # powers[v][e] = x_v ** e
    powers = []
    for v in range(nvars):
        col = [np.ones(npts, dtype=np.int64)]
        for _ in range(d):
            col.append(point_spec.mul_arr(col[-1], pts[:, v]))
        powers.append(col)
    basis = monomials(nvars, d)
    out = np.empty((npts, len(basis)), dtype=np.int64)
    for j, mono in enumerate(basis):
        acc = np.ones(npts, dtype=np.int64)
        for v, a in enumerate(mono):
            if a:
                acc = point_spec.mul_arr(acc, powers[v][a])
        out[:, j] = acc
    return out


def _combine(coeff_spec: FieldSpec, point_spec: FieldSpec, coeffs: np.ndarray, mvals: np.ndarray) -> np.ndarray:
    """Evaluate many coefficient vectors against monomial values.

    ``coeffs`` has shape ``(B, N)``, ``mvals`` shape ``(P, N)``; the result
    ``(B, P)`` holds point-field encodings of ``sum_j c_j * m_j``.
    """
    if point_spec.is_prime_field:
        p = point_spec.p
        if p < _MATMUL_SAFE_P:
            return (coeffs @ mvals.T) % p
        acc = np.zeros((coeffs.shape[0], mvals.shape[0]), dtype=np.int64)
        for j in range(mvals.shape[1]):
            acc = (acc + coeffs[:, j : j + 1] * mvals[None, :, j] % p) % p
        return acc
    if coeff_spec.is_prime_field:
        # Prime-subfield scalars act digit-wise on the polynomial basis.
        p, k = point_spec.p, point_spec.k
        digits = point_spec.digit_matrix(mvals)  # (P, N, k)
        flat = digits.transpose(1, 0, 2).reshape(mvals.shape[1], -1)
        res = ((coeffs @ flat) % p).reshape(coeffs.shape[0], mvals.shape[0], k)
        return (res * p ** np.arange(k, dtype=np.int64)).sum(axis=2)
    acc = np.zeros((coeffs.shape[0], mvals.shape[0]), dtype=np.int64)
    for j in range(mvals.shape[1]):
        acc = point_spec.add_arr(acc, point_spec.mul_arr(coeffs[:, j : j + 1], mvals[None, :, j]))
    return acc


def _point_array(point, spec: FieldSpec) -> tuple[FieldSpec, list[int]]:
    pspec = None
    raw = []
    for x in point:
        if isinstance(x, FieldElem):
            if pspec is None:
                pspec = x.spec
            elif x.spec != pspec:
                raise SpecMismatch("point coordinates from different fields")
            raw.append(x.value)
        else:
            raw.append(int(x))
    pspec = pspec or spec
    return pspec, raw


def poly_eval(f: MultiPoly, point: Sequence[FieldElem | int]) -> FieldElem:
    """Value of ``f`` at ``point``.

    The point may live in an extension of the coefficient field, provided
    the coefficient field is prime; plain ints are read in the
    coefficient field.
    """
    if len(point) != f.nvars:
        raise ArityMismatch(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    pspec, raw = _point_array(point, f.spec)
    _check_embedding(f.spec, pspec)
    total = 0
    for mono, c in f._terms.items():
        term = c
        for x, a in zip(raw, mono):
            if a:
                term = pspec.mul_int(term, pspec.pow_int(x, a))
        total = pspec.add_int(total, term)
    return FieldElem(total, pspec)


def poly_eval_many(f: MultiPoly, pts: np.ndarray, point_spec: FieldSpec | None = None) -> np.ndarray:
    """Vectorised evaluation at the rows of an integer array of points."""
    point_spec = point_spec or f.spec
    _check_embedding(f.spec, point_spec)
    pts = np.asarray(pts, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != f.nvars:
        raise ArityMismatch(f"expected points of length {f.nvars}")
    mvals = monomial_values(point_spec, f.nvars, f.d, pts)
    coeffs = np.array([f.coefficient_vector()], dtype=np.int64)
    return _combine(f.spec, point_spec, coeffs, mvals)[0]


def poly_sub(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    f._check_compatible(g)
    spec = f.spec
    terms = dict(f._terms)
    for m, c in g._terms.items():
        terms[m] = spec.sub_int(terms.get(m, 0), c)
    return MultiPoly(spec, f.nvars, f.d, terms)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def poly_random(spec: FieldSpec, nvars: int, d: int, rng, max_monomials: int = DEFAULT_MAX_MONOMIALS) -> MultiPoly:
    """Uniform draw from P_d: independent uniform coefficients."""
    n = monomial_count(nvars, d)
    if n > max_monomials:
        raise BudgetExceeded(f"P_{d} in {nvars} variables has {n} monomials, cap is {max_monomials}")
    vec = _as_rng(rng).integers(0, spec.q, size=n)
    return MultiPoly.from_vector(spec, nvars, d, vec)


def all_points(spec: FieldSpec, nvars: int) -> np.ndarray:
    """F_q^nvars as an integer array in lexicographic order."""
    q = spec.q
    idx = np.arange(q**nvars, dtype=np.int64)
    place = q ** np.arange(nvars - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // place) % q


def common_zero_mask(polys: Sequence[MultiPoly], spec: FieldSpec, nvars: int,
                     budget: int = DEFAULT_ENUM_BUDGET) -> np.ndarray:
    """Boolean mask over :func:`all_points` marking common zeros."""
    if spec.q**nvars > budget:
        raise BudgetExceeded(f"{spec.q}^{nvars} points exceed budget {budget}")
    for f in polys:
        if f.spec != spec:
            raise SpecMismatch("polynomial over a different field")
        if f.nvars != nvars:
            raise ArityMismatch(f"polynomial has {f.nvars} variables, expected {nvars}")
    pts = all_points(spec, nvars)
    mask = np.ones(len(pts), dtype=bool)
    by_degree: dict[int, np.ndarray] = {}
    for f in polys:
        if f.d not in by_degree:
            by_degree[f.d] = monomial_values(spec, nvars, f.d, pts)
        coeffs = np.array([f.coefficient_vector()], dtype=np.int64)
        mask &= _combine(spec, spec, coeffs, by_degree[f.d])[0] == 0
    return mask


def common_zeros(polys: Sequence[MultiPoly], spec: FieldSpec, nvars: int | None = None,
                 budget: int = DEFAULT_ENUM_BUDGET) -> PointSet:
    """All points of F_q^nvars where every polynomial vanishes, in
    lexicographic order.  ``nvars`` is needed only when ``polys`` is empty."""
    if nvars is None:
        if not polys:
            raise ValueError("nvars is required for an empty polynomial list")
        nvars = polys[0].nvars
    mask = common_zero_mask(polys, spec, nvars, budget)
    pts = all_points(spec, nvars)[mask]
    return PointSet(spec, tuple(tuple(int(x) for x in row) for row in pts))


def _prepare_points(points, coeff_spec: FieldSpec, nvars: int) -> tuple[FieldSpec, np.ndarray]:
    if not isinstance(points, PointSet):
        points = PointSet.of(points, coeff_spec)
    if len(points) and points.nvars != nvars:
        raise ArityMismatch(f"points have {points.nvars} coordinates, expected {nvars}")
    _check_embedding(coeff_spec, points.spec)
    return points.spec, points.array()


def count_vanishing(points, spec: FieldSpec, nvars: int, d: int,
                    budget: int = DEFAULT_ENUM_BUDGET) -> tuple[int, int]:
    """Enumerate every polynomial of P_d and count those vanishing at all
    ``points``.  Returns ``(count, visited)``.

    The value vectors of all polynomials in the low monomials are built
    once, layer by layer; each assignment of the high coefficients then
    shifts that block by a fixed vector, and a polynomial vanishes exactly
    when its low part equals the negated shift.
    """
    n = monomial_count(nvars, d)
    q = spec.q
    total = q**n
    if total > budget:
        raise BudgetExceeded(f"|P_{d}| = {q}^{n} exceeds budget {budget}")
    pspec, pts = _prepare_points(points, spec, nvars)
    mvals = monomial_values(pspec, nvars, d, pts)
    # term[k][c] is the value vector of c * (monomial k)
    scalars = np.arange(q, dtype=np.int64)[:, None]
    term = [pspec.mul_arr(scalars, mvals[:, k][None, :]) for k in range(n)]
    n_low = 0
    while n_low < n and q ** (n_low + 1) <= _CHUNK:
        n_low += 1
    low = np.zeros((1, len(pts)), dtype=np.int64)
    for k in range(n_low):
        low = pspec.add_arr(term[k][:, None, :], low[None, :, :]).reshape(-1, len(pts))
    count = visited = 0
    for high in product(range(q), repeat=n - n_low):
        shift = np.zeros(len(pts), dtype=np.int64)
        for k, c in zip(range(n_low, n), high):
            shift = pspec.add_arr(shift, term[k][c])
        count += int(np.count_nonzero((low == pspec.neg_arr(shift)).all(axis=1)))
        visited += len(low)
    return count, visited


def vanish_probability_exact(points, spec: FieldSpec, nvars: int, d: int,
                             budget: int = DEFAULT_ENUM_BUDGET) -> Fraction:
    """Exact probability that a uniform member of P_d vanishes at every point."""
    count, visited = count_vanishing(points, spec, nvars, d, budget)
    return Fraction(count, visited)


class MCEstimate(NamedTuple):
    estimate: float
    stderr: float
    hits: int
    trials: int


def vanish_probability_mc(points, spec: FieldSpec, nvars: int, d: int, trials: int, rng,
                          chunk: int = 1 << 18) -> MCEstimate:
    """Monte-Carlo estimate of the vanishing probability with its binomial
    standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = _as_rng(rng)
    n = monomial_count(nvars, d)
    pspec, pts = _prepare_points(points, spec, nvars)
    mvals = monomial_values(pspec, nvars, d, pts)
    hits = 0
    remaining = trials
    while remaining:
        b = min(chunk, remaining)
        coeffs = rng.integers(0, spec.q, size=(b, n))
        vals = _combine(spec, pspec, coeffs, mvals)
        hits += int(np.count_nonzero(~vals.any(axis=1)))
        remaining -= b
    est = hits / trials
    return MCEstimate(est, sqrt(est * (1 - est) / trials), hits, trials)
