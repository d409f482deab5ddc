"""Exact integer helpers."""

from __future__ import annotations


def iroot(x: int, k: int) -> int:
    """Floor of the real ``k``-th root of ``x >= 0``."""
    if x < 0 or k < 1:
        raise ValueError(f"iroot needs x >= 0 and k >= 1, got x={x}, k={k}")
    if x < 2 or k == 1:
        return x
    # Newton iteration from an upper bound; decreases monotonically to the floor.
    r = 1 << -(-x.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            return r
        r = nxt


def iroot_ceil(x: int, k: int) -> int:
    r = iroot(x, k)
    return r if r**k == x else r + 1
