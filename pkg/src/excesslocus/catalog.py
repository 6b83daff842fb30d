"""Codimensions of common-divisor components.

For forms ``F_1, ..., F_k`` of degrees ``d_i`` in ``r + 1`` variables, the
tuples that are all divisible by one degree-``e`` form are counted with the
incidence correspondence over the projective space of degree-``e`` forms:
the base has dimension ``C(r+e, e) - 1`` and each ``F_i`` must lie in the
``C(r+d_i-e, d_i-e)``-dimensional space of multiples.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import PreconditionError
from .exactmath import form_space_dim

__all__ = [
    "ComponentDescriptor",
    "common_divisor_codim",
    "QuadricPairRow",
    "quadric_pair_table",
]


def _multiples_dim(r: int, d: int, e: int) -> int:
    # degree d multiples of a fixed degree-e form; only 0 when d < e
    return form_space_dim(r, d - e) if d >= e else 0


def _check(r: int, degrees: tuple[int, ...], e: int) -> None:
    if r < 1:
        raise PreconditionError(f"violated r >= 1 (r={r})")
    if e < 1:
        raise PreconditionError(f"violated e >= 1 (e={e})")
    if not degrees or any(d < 1 for d in degrees):
        raise PreconditionError(f"violated positive degrees (degrees={degrees})")
    if list(degrees) != sorted(degrees):
        raise PreconditionError(f"violated non-decreasing degrees (degrees={degrees})")


def common_divisor_codim(r: int, degrees, e: int) -> int:
    degrees = tuple(int(d) for d in degrees)
    _check(r, degrees, e)
    base = form_space_dim(r, e) - 1
    conditions = sum(
        form_space_dim(r, d) - _multiples_dim(r, d, e) for d in degrees
    )
    return conditions - base


@dataclass(frozen=True)
class ComponentDescriptor:
    r: int
    degrees: tuple[int, ...]
    e: int
    codim: int

    @classmethod
    def build(cls, r: int, degrees, e: int) -> "ComponentDescriptor":
        degrees = tuple(int(d) for d in degrees)
        return cls(r, degrees, e, common_divisor_codim(r, degrees, e))


@dataclass(frozen=True)
class QuadricPairRow:
    """Codimensions of the two components for a pair of quadrics in P^r."""

    r: int
    codim_hyperplane: int
    codim_quadric: int

    @property
    def dominant(self) -> str:
        """Which component is larger (has smaller codimension)."""
        if self.codim_hyperplane < self.codim_quadric:
            return "hyperplane"
        if self.codim_hyperplane > self.codim_quadric:
            return "quadric"
        return "tie"

    def to_record(self) -> dict:
        return {
            "r": self.r,
            "codim_hyperplane": self.codim_hyperplane,
            "codim_quadric": self.codim_quadric,
            "dominant": self.dominant,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "QuadricPairRow":
        return cls(int(rec["r"]), int(rec["codim_hyperplane"]), int(rec["codim_quadric"]))


def quadric_pair_table(r_max: int) -> list[QuadricPairRow]:
    if r_max < 2:
        raise PreconditionError(f"violated r_max >= 2 (r_max={r_max})")
    return [
        QuadricPairRow(
            r,
            common_divisor_codim(r, (2, 2), 1),
            common_divisor_codim(r, (2, 2), 2),
        )
        for r in range(2, r_max + 1)
    ]
