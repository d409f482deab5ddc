"""Finite fields F_p and F_{p^k} with a dense integer encoding.

An element of F_{p^k} is stored as an integer in ``[0, q)`` whose base-p
digits are the coefficients of a polynomial in ``x`` (digit ``i`` is the
coefficient of ``x^i``), reduced modulo a fixed monic irreducible of
degree ``k``.  Equality of elements is integer equality.  The elements
with value ``< p`` are the constants and form the prime subfield.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator

import numpy as np

from .errors import DivisionByZero, NoIrreducibleFound, NotPrime, SpecMismatch

MAX_ORDER = 2**31
# Above this order the extension-field lookup tables are not built.
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime_below(x: int) -> int:
    """Largest prime ``<= x``; by Bertrand's postulate it exceeds ``x/2``."""
    if x < 2:
        raise ValueError(f"next_prime_below needs x >= 2, got {x}")
    while not is_prime(x):
        x -= 1
    return x


# --- polynomial helpers over F_p, coefficient lists low degree first -------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * inv_lead % p
        quot[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _trim(a)
    return _trim(quot), a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            _, rem = _poly_divmod(poly, list(low) + [1], p)
            if not rem:
                return False
    return True


def _find_modulus(p: int, k: int) -> tuple[int, ...]:
    # Monic degree-k polynomials in ascending integer encoding: p^k + low part.
    for low in range(p**k):
        coeffs = [(low // p**i) % p for i in range(k)] + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise NoIrreducibleFound(f"no monic irreducible of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldSpec:
    """The finite field of order ``q = p**k``.

    ``modulus`` lists the ``k + 1`` coefficients (constant term first) of
    the monic irreducible defining the extension; it is empty for prime
    fields.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] = field(default=())

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})" if self.k == 1 else f"FieldSpec(q={self.p}^{self.k})"

    # -- element constructors -------------------------------------------

    def __call__(self, value: int) -> "FieldElem":
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element encoding of F_{self.q}")
        return FieldElem(value, self)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(0, self)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(1, self)

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(v, self) for v in range(self.q)]

    def from_digits(self, digits: list[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.k):
            v, d = divmod(v, self.p)
            out.append(d)
        return out

    # -- scalar arithmetic on integer encodings -------------------------

    def add_int(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.q <= _TABLE_LIMIT:
            return int(self._add_table[a, b])
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def neg_int(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        return self.from_digits([-x % self.p for x in self.digits(a)])

    def sub_int(self, a: int, b: int) -> int:
        return self.add_int(a, self.neg_int(b))

    def mul_int(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self.q <= _TABLE_LIMIT:
            return int(self._mul_table[a, b])
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        prod_ = _poly_mul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        _, rem = _poly_divmod(prod_, list(self.modulus), self.p)
        return self.from_digits(rem)

    def pow_int(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent; use inv")
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_int(result, base)
            base = self.mul_int(base, base)
            e >>= 1
        return result

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        if self.k == 1:
            return self.pow_int(a, self.q - 2)
        return self._inv_euclid(a)

    def _inv_euclid(self, a: int) -> int:
        """Extended Euclid on ``(modulus, a)`` over F_p."""
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.digits(a))
        s0, s1 = [], [1]
        while r1:
            quot, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1, p), p)
        # r0 is a nonzero constant since the modulus is irreducible.
        c = pow(r0[0], p - 2, p)
        return self.from_digits([x * c % p for x in s0])

    def _inv_pow(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        return self.pow_int(a, self.q - 2)

    # -- vectorised arithmetic on numpy arrays of encodings -------------

    @cached_property
    def _add_table(self) -> np.ndarray:
        q, p = self.q, self.p
        dig = np.array([self.digits(v) for v in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.k, dtype=np.int64)
        summed = (dig[:, None, :] + dig[None, :, :]) % p
        return (summed * weights).sum(axis=2)

    @cached_property
    def _mul_table(self) -> np.ndarray:
        q = self.q
        table = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                table[a, b] = table[b, a] = self._mul_poly(a, b)
        return table

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return np.array([self.neg_int(v) for v in range(self.q)], dtype=np.int64)

    def add_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a + b) % self.p
        if self.q <= _TABLE_LIMIT:
            return self._add_table[a, b]
        return np.vectorize(self.add_int, otypes=[np.int64])(a, b)

    def neg_arr(self, a: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return -a % self.p
        if self.q <= _TABLE_LIMIT:
            return self._neg_table[a]
        return np.vectorize(self.neg_int, otypes=[np.int64])(a)

    def sub_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a * b) % self.p
        if self.q <= _TABLE_LIMIT:
            return self._mul_table[a, b]
        return np.vectorize(self.mul_int, otypes=[np.int64])(a, b)

    def digit_matrix(self, values) -> np.ndarray:
        """Base-p digit expansion of each encoding, shape ``(..., k)``."""
        v = np.asarray(values, dtype=np.int64)
        return (v[..., None] // self.p ** np.arange(self.k, dtype=np.int64)) % self.p


@dataclass(frozen=True)
class FieldElem:
    value: int
    spec: FieldSpec

    def _check(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem):
            raise TypeError(f"expected FieldElem, got {type(other).__name__}")
        if other.spec != self.spec:
            raise SpecMismatch(f"{self.spec!r} vs {other.spec!r}")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec.add_int(self.value, other.value), self.spec)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec.sub_int(self.value, other.value), self.spec)

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        self._check(other)
        return FieldElem(self.spec.mul_int(self.value, other.value), self.spec)

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.spec.neg_int(self.value), self.spec)

    def __pow__(self, e: int) -> "FieldElem":
        return FieldElem(self.spec.pow_int(self.value, e), self.spec)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return self * other.inverse()

    def inverse(self) -> "FieldElem":
        return FieldElem(self.spec.inv_int(self.value), self.spec)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod F_{self.spec.q})"


@lru_cache(maxsize=256)
def field_make(p: int, k: int = 1) -> FieldSpec:
    """Build F_{p^k}; for ``k > 1`` the modulus is the lowest-encoded
    monic irreducible of degree ``k``, so the result is reproducible."""
    if p < 2 or not is_prime(p):
        raise NotPrime(p)
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p**k > MAX_ORDER:
        raise ValueError(f"field order {p}^{k} exceeds {MAX_ORDER}")
    if k == 1:
        return FieldSpec(p, 1, ())
    return FieldSpec(p, k, _find_modulus(p, k))


def field_of_order(q: int) -> FieldSpec:
    """Field of prime-power order ``q``; raises NotPrime otherwise."""
    if q < 2:
        raise NotPrime(q)
    p = next((f for f in range(2, math.isqrt(q) + 1) if q % f == 0), q)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrime(q)
    return field_make(p, k)


def enumerate_elements(spec: FieldSpec) -> list[FieldElem]:
    return spec.elements()


def iter_points(spec: FieldSpec, nvars: int) -> Iterator[tuple[FieldElem, ...]]:
    """All points of F_q^nvars in lexicographic order."""
    elems = spec.elements()
    return product(elems, repeat=nvars)


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def sub(a: FieldElem, b: FieldElem) -> FieldElem:
    return a - b


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def neg(a: FieldElem) -> FieldElem:
    return -a


def inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def power(a: FieldElem, e: int) -> FieldElem:
    return a**e
