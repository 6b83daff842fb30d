"""Exact combinatorial primitives.

Everything here returns a plain Python ``int``, which is already an
arbitrary-precision integer, so no value is ever narrowed or rounded.
"""

from __future__ import annotations

import math
from functools import lru_cache

__all__ = [
    "binomial",
    "hilbert_lower_bound",
    "grassmannian_dim",
    "form_space_dim",
]


def binomial(n: int, k: int) -> int:
    """C(n, k) for n >= 0, with C(n, k) = 0 whenever k is outside [0, n]."""
    if n < 0:
        raise ValueError(f"binomial: need n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def hilbert_lower_bound(r: int, a: int, d: int) -> int:
    """Lower bound on the Hilbert function in degree ``d`` of a nondegenerate
    integral ``a``-dimensional subscheme of P^r:

        (r - a) * C(d + a - 1, d - 1) + C(d + a, d)

    ``a = 0`` is accepted (the value is then ``r + 1``).
    """
    if r < 1:
        raise ValueError(f"hilbert_lower_bound: need r >= 1, got r={r}")
    if a < 0 or a > r:
        raise ValueError(f"hilbert_lower_bound: need 0 <= a <= r, got a={a}, r={r}")
    if d < 1:
        raise ValueError(f"hilbert_lower_bound: need d >= 1, got d={d}")
    return (r - a) * binomial(d + a - 1, d - 1) + binomial(d + a, d)


def grassmannian_dim(b: int, r: int) -> int:
    """Dimension (b+1)(r-b) of the Grassmannian of b-planes in P^r."""
    if b < 0 or b > r:
        raise ValueError(f"grassmannian_dim: need 0 <= b <= r, got b={b}, r={r}")
    return (b + 1) * (r - b)


def form_space_dim(r: int, d: int) -> int:
    """Number of degree-d monomials in r+1 variables, C(r+d, d)."""
    if r < 1:
        raise ValueError(f"form_space_dim: need r >= 1, got r={r}")
    if d < 0:
        raise ValueError(f"form_space_dim: need d >= 0, got d={d}")
    return binomial(r + d, d)
