"""Finite fields F_{p^m} with a deterministic defining polynomial.

Elements are encoded as integers in ``[0, p^m)``: the residue
``c_0 + c_1 x + ... + c_{m-1} x^{m-1}`` is stored as ``sum c_i p^i``.
Scalar arithmetic goes through log/exp tables; numpy lookup tables are
built on demand for vectorized work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "field_make",
    "field_from_q",
    "extension",
    "embedding",
    "is_prime",
]

MAX_P = 13
TABLE_LIMIT = 1 << 12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % f for f in range(2, int(n**0.5) + 1))


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _polymod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by a monic ``mod`` (coefficient lists, low to high)."""
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _trim([x % p for x in a[:dm]])


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    m = len(poly) - 1
    if m == 1:
        return True
    if poly[0] == 0:
        return False
    for deg in range(1, m // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _polymod(list(poly), list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field F_p[x]/(modulus).  ``modulus`` is monic, low to high."""

    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.m

    def __repr__(self) -> str:
        return f"FieldSpec(F_{self.q}, p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    # -- encoding ---------------------------------------------------------

    def digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def from_digits(self, digits) -> int:
        x = 0
        for d in reversed(list(digits)):
            x = x * self.p + (d % self.p)
        return x

    def element(self, value: int) -> int:
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of F_{self.q}")
        return value

    # -- scalar arithmetic -----------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.m == 1:
            return (x + y) % self.p
        return self.from_digits(a + b for a, b in zip(self.digits(x), self.digits(y)))

    def neg(self, x: int) -> int:
        if self.m == 1:
            return (-x) % self.p
        return self.from_digits(-a for a in self.digits(x))

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self.m == 1:
            return (x * y) % self.p
        exp, log = self._exp_log
        return exp[(log[x] + log[y]) % (self.q - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1:
            return pow(x, self.p - 2, self.p)
        exp, log = self._exp_log
        return exp[(-log[x]) % (self.q - 1)]

    def pow(self, x: int, n: int) -> int:
        if n == 0:
            return 1
        if n < 0:
            x, n = self.inv(x), -n
        if x == 0:
            return 0
        if self.m == 1:
            return pow(x, n, self.p)
        exp, log = self._exp_log
        return exp[(log[x] * n) % (self.q - 1)]

    def _mul_slow(self, x: int, y: int) -> int:
        a, b = self.digits(x), self.digits(y)
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self.from_digits(_polymod(prod, list(self.modulus), self.p) or [0])

    @cached_property
    def _exp_log(self) -> tuple[list[int], list[int]]:
        n = self.q - 1
        for g in range(2, self.q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_slow(x, g)
            if len(exp) == n:
                log = [0] * self.q
                for i, v in enumerate(exp):
                    log[v] = i
                return exp, log
        if self.q == 2:
            return [1], [0, 0]
        raise AssertionError(f"no primitive element found in F_{self.q}")

    @cached_property
    def primitive_element(self) -> int:
        exp, _ = self._exp_log
        return exp[1] if len(exp) > 1 else 1

    # -- vectorized tables -----------------------------------------------

    def _check_table_size(self) -> None:
        if self.q > TABLE_LIMIT:
            raise ValueError(f"F_{self.q} is too large for lookup tables")

    @cached_property
    def digit_table(self) -> np.ndarray:
        """``(q, m)`` array: digits of every element."""
        x = np.arange(self.q)
        return np.stack([(x // self.p**i) % self.p for i in range(self.m)], axis=1)

    @cached_property
    def add_table(self) -> np.ndarray:
        self._check_table_size()
        d = self.digit_table
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return (s * (self.p ** np.arange(self.m))).sum(axis=2).astype(np.int16)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._check_table_size()
        if self.m == 1:
            x = np.arange(self.q)
            return ((x[:, None] * x[None, :]) % self.p).astype(np.int16)
        exp, log = self._exp_log
        exp_a = np.array(exp * 2, dtype=np.int16)
        log_a = np.array(log)
        t = exp_a[log_a[:, None] + log_a[None, :]]
        t[0, :] = 0
        t[:, 0] = 0
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(x) for x in range(self.q)], dtype=np.int16)

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field_make(p: int, m: int = 1) -> FieldSpec:
    """F_{p^m} defined by the lexicographically first monic irreducible of
    degree ``m``, comparing coefficient tuples ``(c_0, ..., c_{m-1})``."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if p > MAX_P:
        raise ValueError(f"p={p} exceeds the supported characteristic bound {MAX_P}")
    if m < 1:
        raise ValueError(f"extension degree must be >= 1, got m={m}")
    for low in itertools.product(range(p), repeat=m):
        poly = tuple(low) + (1,)
        if _is_irreducible(poly, p):
            return FieldSpec(p, m, poly)
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")


def field_from_q(q: int) -> FieldSpec:
    """Field of order ``q`` (a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            m, rest = 0, q
            while rest % p == 0:
                rest //= p
                m += 1
            if rest != 1 or not is_prime(p):
                break
            return field_make(p, m)
    raise ValueError(f"q={q} is not a prime power")


@lru_cache(maxsize=None)
def embedding(base: FieldSpec, ext: FieldSpec) -> tuple[int, ...]:
    """Codes in ``ext`` of every element of ``base`` under the embedding that
    sends x to the first root (in code order) of ``base.modulus``."""
    if base.p != ext.p or ext.m % base.m:
        raise ValueError(f"F_{base.q} does not embed in F_{ext.q}")
    if base == ext:
        return tuple(range(base.q))

    def lift(coeffs, theta: int) -> int:
        acc, power = 0, 1
        for c in coeffs:
            if c:
                acc = ext.add(acc, ext.mul(c, power))
            power = ext.mul(power, theta)
        return acc

    for theta in range(ext.q):
        if lift(base.modulus, theta) == 0:
            return tuple(lift(base.digits(x), theta) for x in range(base.q))
    raise AssertionError(f"{base.modulus} has no root in F_{ext.q}")


@lru_cache(maxsize=None)
def extension(base: FieldSpec, t: int) -> FieldSpec:
    """The degree-``t`` extension F_{q^t} of ``base``, as F_{p^{m t}}."""
    return field_make(base.p, base.m * t)
