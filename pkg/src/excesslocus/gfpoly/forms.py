"""Homogeneous forms over finite fields, projective points and rational
linear subspaces.

Coefficients are stored densely in graded-lex order with
``x_0 > x_1 > ... > x_r``: for degree 2 in three variables the order is
``x0^2, x0x1, x0x2, x1^2, x1x2, x2^2``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ..exactmath import binomial, form_space_dim
from .field import FieldSpec, embedding, field_make

__all__ = [
    "monomials",
    "monomial_rank",
    "Form",
    "TupleInstance",
    "evaluate",
    "projective_points",
    "count_projective_points",
    "rational_subspaces",
    "restriction_matrix",
    "LinearDigitMap",
]

Point = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``d`` in ``nvars`` variables, graded-lex."""
    if nvars == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials(nvars - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomial_rank(exps: Sequence[int]) -> int:
    """Position of ``exps`` in :func:`monomials` (combinatorial ranking)."""
    rank, remaining = 0, sum(exps)
    n = len(exps)
    for i, e in enumerate(exps[:-1]):
        # monomials whose i-th exponent exceeds e come first
        tail_vars = n - i - 1
        for bigger in range(e + 1, remaining + 1):
            rank += binomial(remaining - bigger + tail_vars - 1, tail_vars - 1)
        remaining -= e
    return rank


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(nvars, d))}


@dataclass(frozen=True)
class Form:
    """A degree-``d`` form in ``r + 1`` variables over ``field``."""

    field: FieldSpec
    r: int
    d: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        n = form_space_dim(self.r, self.d)
        if len(self.coeffs) != n:
            raise ValueError(
                f"degree {self.d} form in {self.r + 1} variables needs {n} "
                f"coefficients, got {len(self.coeffs)}"
            )
        for c in self.coeffs:
            self.field.element(c)

    @classmethod
    def zero(cls, field: FieldSpec, r: int, d: int) -> "Form":
        return cls(field, r, d, (0,) * form_space_dim(r, d))

    @classmethod
    def from_terms(cls, field: FieldSpec, r: int, d: int, terms: dict) -> "Form":
        """Build from ``{exponent tuple: coefficient}``."""
        coeffs = [0] * form_space_dim(r, d)
        index = monomial_index(r + 1, d)
        for exps, c in terms.items():
            if len(exps) != r + 1 or sum(exps) != d:
                raise ValueError(f"monomial {exps} is not of degree {d} in {r + 1} variables")
            i = index[tuple(exps)]
            coeffs[i] = field.add(coeffs[i], c % field.q if field.m == 1 else c)
        return cls(field, r, d, tuple(coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def terms(self) -> dict[tuple[int, ...], int]:
        return {
            m: c for m, c in zip(monomials(self.r + 1, self.d), self.coeffs) if c
        }

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exps, c in self.terms().items():
            mono = "*".join(
                f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            else:
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def _power_table(field: FieldSpec, x: int, n: int) -> list[int]:
    out = [1]
    for _ in range(n):
        out.append(field.mul(out[-1], x))
    return out


def evaluate(form: Form, point: Sequence[int], field: FieldSpec | None = None) -> int:
    """Value of ``form`` at a representative ``point``.

    ``field`` is the field the point lives in; it defaults to the form's
    field and may be any extension of it.
    """
    if len(point) != form.r + 1:
        raise ValueError(
            f"point has {len(point)} coordinates, form lives in P^{form.r}"
        )
    ext = field or form.field
    lift = embedding(form.field, ext)
    powers = [_power_table(ext, x, form.d) for x in point]
    acc = 0
    for exps, c in zip(monomials(form.r + 1, form.d), form.coeffs):
        if not c:
            continue
        term = lift[c]
        for i, e in enumerate(exps):
            if e:
                term = ext.mul(term, powers[i][e])
        acc = ext.add(acc, term)
    return acc


def count_projective_points(r: int, q: int) -> int:
    return (q ** (r + 1) - 1) // (q - 1)


def projective_points(r: int, field: FieldSpec) -> Iterator[Point]:
    """Normalized points of P^r(field): the first nonzero coordinate is 1.
    Ordered by the position of that 1, then by the trailing codes."""
    for lead in range(r + 1):
        for tail in itertools.product(range(field.q), repeat=r - lead):
            yield (0,) * lead + (1,) + tail


@lru_cache(maxsize=None)
def rational_subspaces(r: int, t: int, field: FieldSpec) -> tuple[tuple[Point, ...], ...]:
    """Every ``t``-dimensional linear subspace of P^r defined over ``field``,
    given by the rows of its reduced row echelon basis."""
    if not 0 <= t <= r:
        raise ValueError(f"need 0 <= t <= r, got t={t}, r={r}")
    q = field.q
    out = []
    for pivots in itertools.combinations(range(r + 1), t + 1):
        free = [
            [c for c in range(pivots[i] + 1, r + 1) if c not in pivots]
            for i in range(t + 1)
        ]
        slots = [(i, c) for i in range(t + 1) for c in free[i]]
        for values in itertools.product(range(q), repeat=len(slots)):
            rows = [[0] * (r + 1) for _ in range(t + 1)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            out.append(tuple(tuple(row) for row in rows))
    return tuple(out)


def _poly_mul(field: FieldSpec, a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = field.add(out.get(e, 0), field.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def restriction_matrix(
    r: int, d: int, basis: tuple[Point, ...], field: FieldSpec
) -> tuple[tuple[dict, ...], int]:
    """Images of the degree-``d`` monomials of P^r under the substitution
    ``x = sum_i s_i * basis[i]``: one ``{exponent: coeff}`` polynomial in the
    ``len(basis)`` parameters per monomial."""
    t1 = len(basis)
    coords = []
    for c in range(r + 1):
        lin = {}
        for i, row in enumerate(basis):
            if row[c]:
                e = tuple(1 if j == i else 0 for j in range(t1))
                lin[e] = row[c]
        coords.append(lin)
    one = {(0,) * t1: 1}
    images = []
    for exps in monomials(r + 1, d):
        poly = one
        for c, e in enumerate(exps):
            for _ in range(e):
                poly = _poly_mul(field, poly, coords[c])
        images.append(poly)
    return tuple(images), t1


class LinearDigitMap:
    """An F_q-linear map from coefficient vectors over ``base`` to vectors
    over an extension ``ext``, realised as an F_p matrix acting on base-p
    digits so that whole batches go through a single matmul.

    ``images[i]`` lists the image of the i-th basis coefficient vector as
    elements of ``ext``.
    """

    def __init__(self, base: FieldSpec, ext: FieldSpec, images: Sequence[Sequence[int]]):
        self.base, self.ext = base, ext
        self.p = base.p
        self.n_in = len(images)
        self.n_out = len(images[0]) if images else 0
        lift = embedding(base, ext)
        rows = []
        for img in images:
            for j in range(base.m):
                scale = lift[base.p**j]  # the element x^j of base
                row = []
                for y in img:
                    row.extend(ext.digits(ext.mul(scale, y)))
                rows.append(row)
        self.matrix = np.array(rows, dtype=np.float32).reshape(
            self.n_in * base.m, self.n_out * ext.m
        )
        if self.n_in * base.m * (self.p - 1) ** 2 >= 1 << 24:
            raise ValueError("digit matmul would lose exactness in float32")

    def base_digits(self, coeffs: np.ndarray) -> np.ndarray:
        """(B, n_in) element codes -> (B, n_in * m) float32 digits."""
        d = self.base.digit_table[coeffs]
        return d.reshape(coeffs.shape[0], -1).astype(np.float32)

    def zero_mask(self, coeffs: np.ndarray, group: int = 1) -> np.ndarray:
        """Boolean (B, n_out // group): True where the image vanishes on a
        whole block of ``group`` consecutive output coordinates."""
        out = self.base_digits(coeffs) @ self.matrix
        np.fmod(out, self.p, out=out)
        nz = out.reshape(coeffs.shape[0], self.n_out // group, group * self.ext.m).any(axis=2)
        return ~nz

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        """Image codes, shape (B, n_out)."""
        out = self.base_digits(coeffs) @ self.matrix
        np.fmod(out, self.p, out=out)
        weights = (self.p ** np.arange(self.ext.m)).astype(np.float32)
        codes = out.reshape(coeffs.shape[0], self.n_out, self.ext.m) @ weights
        return codes.astype(np.int16)


@dataclass(frozen=True)
class TupleInstance:
    forms: tuple[Form, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "forms", tuple(self.forms))
        if not self.forms:
            raise ValueError("a tuple needs at least one form")
        f0 = self.forms[0]
        for f in self.forms:
            if f.r != f0.r or f.field != f0.field:
                raise ValueError("forms must share r and the field")
        if list(self.degrees) != sorted(self.degrees):
            raise ValueError(f"degrees must be non-decreasing, got {self.degrees}")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.d for f in self.forms)

    @property
    def r(self) -> int:
        return self.forms[0].r

    @property
    def field(self) -> FieldSpec:
        return self.forms[0].field

    def to_dict(self) -> dict:
        return {
            **self.field.to_dict(),
            "r": self.r,
            "degrees": list(self.degrees),
            "forms": [list(f.coeffs) for f in self.forms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TupleInstance":
        field = field_make(int(data["p"]), int(data["m"]))
        if list(field.modulus) != [int(c) for c in data["modulus"]]:
            raise ValueError(
                f"modulus {data['modulus']} differs from the canonical {list(field.modulus)}"
            )
        r = int(data["r"])
        degrees = [int(d) for d in data["degrees"]]
        if len(degrees) != len(data["forms"]):
            raise ValueError("degrees and forms differ in length")
        return cls(tuple(Form(field, r, d, tuple(c)) for d, c in zip(degrees, data["forms"])))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "TupleInstance":
        return cls.from_dict(json.loads(Path(path).read_text()))
