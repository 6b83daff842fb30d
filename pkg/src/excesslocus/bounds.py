"""Codimension bounds for loci of form tuples with excess vanishing locus.

A :class:`ProblemInstance` fixes the ambient dimension ``r``, the excess
``a`` and a sorted degree sequence ``d_1 <= ... <= d_k``.  For a span
dimension ``b`` the lower bound on the codimension of the "span exactly b"
stratum is

    -(b+1)(r-b) + min_{i_1 < ... < i_s} sum_j h_{b, b - i_j + j}(d_{i_j}),
    s = r - b + a,

with the minimum taken over sequences ending at ``k`` (``Variant.EQ``) or
merely bounded by ``k`` (``Variant.LE``).  Tuples vanishing on a common
line have codimension ``-2(r-1) + sum (d_i + 1)``, and for ``b >= 2`` the
chain bound ``-2(r-1) + a(b-1) + sum (d_i + 1)`` sits between the two.
"""

from __future__ import annotations

import enum
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .exactmath import form_space_dim, grassmannian_dim, hilbert_lower_bound

__all__ = [
    "PreconditionError",
    "Variant",
    "ProblemInstance",
    "BoundReport",
    "MarginRow",
    "MarginReport",
    "GridSummary",
    "admissible_sequences",
    "span_locus_codim_lower",
    "line_locus_codim",
    "plane_locus_codim",
    "chain_lower_bound",
    "theorem_margin_check",
    "margin_grid",
    "check_grid",
]

IndexSequence = tuple[int, ...]


class PreconditionError(ValueError):
    """An operation was called outside its domain; the message names the
    violated inequality."""


class Variant(str, enum.Enum):
    EQ = "eq"  # last index equals k
    LE = "le"  # last index at most k

    @property
    def label(self) -> str:
        return "last-equals-k" if self is Variant.EQ else "last-at-most-k"


def _require(cond: bool, what: str, **values: int) -> None:
    if not cond:
        shown = ", ".join(f"{k}={v}" for k, v in values.items())
        raise PreconditionError(f"violated {what} ({shown})")


@dataclass(frozen=True)
class ProblemInstance:
    r: int
    a: int
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        _require(self.r >= 1, "1 <= r", r=self.r)
        _require(self.a >= 1, "1 <= a", a=self.a)
        _require(len(self.degrees) >= 1, "1 <= k", k=len(self.degrees))
        _require(
            self.k <= self.r + self.a - 1,
            "k <= r + a - 1",
            k=self.k,
            r=self.r,
            a=self.a,
        )
        for i, d in enumerate(self.degrees, start=1):
            _require(d >= 1, "d_i >= 1", i=i, d_i=d)
        for i in range(1, self.k):
            _require(
                self.degrees[i - 1] <= self.degrees[i],
                "d_i <= d_{i+1} (degrees must be non-decreasing)",
                i=i,
                d_i=self.degrees[i - 1],
                d_next=self.degrees[i],
            )

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def is_full(self) -> bool:
        """True when there are exactly r + a - 1 forms."""
        return self.k == self.r + self.a - 1

    def degrees_str(self) -> str:
        return ",".join(str(d) for d in self.degrees)


@dataclass(frozen=True)
class BoundReport:
    instance: ProblemInstance
    b: int
    lower_bound: int
    argmin: IndexSequence
    variant: Variant

    def to_record(self) -> dict:
        return {
            "r": self.instance.r,
            "a": self.instance.a,
            "degrees": self.instance.degrees_str(),
            "k": self.instance.k,
            "b": self.b,
            "variant": self.variant.value,
            "bound": self.lower_bound,
            "argmin": ",".join(str(i) for i in self.argmin),
        }

    @classmethod
    def from_record(cls, rec: dict) -> "BoundReport":
        inst = ProblemInstance(
            int(rec["r"]), int(rec["a"]), _parse_ints(rec["degrees"])
        )
        return cls(
            instance=inst,
            b=int(rec["b"]),
            lower_bound=int(rec["bound"]),
            argmin=_parse_ints(rec["argmin"]),
            variant=Variant(rec["variant"]),
        )


def _parse_ints(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    text = str(text).strip()
    return tuple(int(x) for x in text.split(",")) if text else ()


def _sequence_length(instance: ProblemInstance, b: int) -> int:
    _require(1 <= b <= instance.r, "1 <= b <= r", b=b, r=instance.r)
    s = instance.r - b + instance.a
    _require(1 <= s <= instance.k, "1 <= r - b + a <= k", s=s, k=instance.k)
    return s


def admissible_sequences(k: int, s: int, variant: Variant) -> Iterator[IndexSequence]:
    """Strictly increasing sequences of length ``s`` in [1, k], in
    lexicographic order; with ``Variant.EQ`` the last entry is ``k``."""
    if variant is Variant.EQ:
        for head in itertools.combinations(range(1, k), s - 1):
            yield head + (k,)
    else:
        yield from itertools.combinations(range(1, k + 1), s)


def _term(instance: ProblemInstance, b: int, i: int, j: int) -> int:
    # subscript b - i + j lies in [1, b] because k <= r + a - 1
    return hilbert_lower_bound(b, b - i + j, instance.degrees[i - 1])


def _minimize_exhaustive(
    instance: ProblemInstance, b: int, s: int, variant: Variant
) -> tuple[int, IndexSequence]:
    best: int | None = None
    best_seq: IndexSequence = ()
    for seq in admissible_sequences(instance.k, s, variant):
        total = sum(_term(instance, b, i, j) for j, i in enumerate(seq, start=1))
        if best is None or total < best:
            best, best_seq = total, seq
    assert best is not None
    return best, best_seq


def _minimize_dp(
    instance: ProblemInstance, b: int, s: int, variant: Variant
) -> tuple[int, IndexSequence]:
    k = instance.k
    # best[i] = (value, seq) of the cheapest length-j prefix ending at index i
    best: dict[int, tuple[int, IndexSequence]] = {
        i: (_term(instance, b, i, 1), (i,)) for i in range(1, k - s + 2)
    }
    for j in range(2, s + 1):
        nxt: dict[int, tuple[int, IndexSequence]] = {}
        running: tuple[int, IndexSequence] | None = None
        for i in range(j, k - s + j + 1):
            prev = best.get(i - 1)
            if prev is not None and (running is None or prev[0] < running[0]):
                running = prev
            assert running is not None
            nxt[i] = (running[0] + _term(instance, b, i, j), running[1] + (i,))
        best = nxt
    if variant is Variant.EQ:
        return best[k]
    return min(best.values(), key=lambda t: t[0])


def span_locus_codim_lower(
    instance: ProblemInstance,
    b: int,
    variant: Variant | str = Variant.EQ,
    method: str = "exhaustive",
) -> BoundReport:
    """Lower bound for the codimension of the locus whose excess component
    spans exactly a ``b``-plane.  ``method`` is ``"exhaustive"`` (default)
    or ``"dp"``; both return the same value."""
    variant = Variant(variant)
    s = _sequence_length(instance, b)
    if method == "exhaustive":
        value, seq = _minimize_exhaustive(instance, b, s, variant)
    elif method == "dp":
        value, seq = _minimize_dp(instance, b, s, variant)
    else:
        raise ValueError(f"unknown minimization method {method!r}")
    return BoundReport(
        instance=instance,
        b=b,
        lower_bound=value - grassmannian_dim(b, instance.r),
        argmin=seq,
        variant=variant,
    )


def line_locus_codim(instance: ProblemInstance) -> int:
    """Codimension of the tuples whose common zero locus contains a line."""
    _require(
        instance.is_full,
        "k = r + a - 1",
        k=instance.k,
        r=instance.r,
        a=instance.a,
    )
    return -grassmannian_dim(1, instance.r) + sum(d + 1 for d in instance.degrees)


def plane_locus_codim(instance: ProblemInstance, b: int) -> int:
    """Naive incidence count for tuples vanishing on a common b-plane.

    This is containment in a b-plane, not the "span exactly b" stratum; it
    agrees with :func:`line_locus_codim` at ``b = 1``.
    """
    _require(1 <= b <= instance.r, "1 <= b <= r", b=b, r=instance.r)
    return -grassmannian_dim(b, instance.r) + sum(
        form_space_dim(b, d) for d in instance.degrees
    )


def chain_lower_bound(instance: ProblemInstance, b: int) -> int:
    _require(b >= 2, "b >= 2", b=b)
    _require(b <= instance.r, "b <= r", b=b, r=instance.r)
    _require(
        instance.is_full,
        "k = r + a - 1",
        k=instance.k,
        r=instance.r,
        a=instance.a,
    )
    r, a = instance.r, instance.a
    return -2 * (r - 1) + a * (b - 1) + sum(d + 1 for d in instance.degrees)


@dataclass(frozen=True)
class MarginRow:
    b: int
    bound: int
    chain: int
    line: int

    @property
    def bound_ge_chain(self) -> bool:
        return self.bound >= self.chain

    @property
    def chain_gt_line(self) -> bool:
        return self.chain > self.line

    @property
    def ok(self) -> bool:
        return self.bound_ge_chain and self.chain_gt_line


@dataclass(frozen=True)
class MarginReport:
    instance: ProblemInstance
    rows: tuple[MarginRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.ok for row in self.rows)

    @property
    def witnesses(self) -> tuple[int, ...]:
        """Values of b at which an inequality failed."""
        return tuple(row.b for row in self.rows if not row.ok)

    def to_records(self) -> list[dict]:
        inst = self.instance
        return [
            {
                "r": inst.r,
                "a": inst.a,
                "degrees": inst.degrees_str(),
                "b": row.b,
                "bound": row.bound,
                "chain": row.chain,
                "line": row.line,
                "pass": row.ok,
            }
            for row in self.rows
        ]


def theorem_margin_check(
    instance: ProblemInstance, method: str = "exhaustive"
) -> MarginReport:
    """For every b in [2, r] compare the span bound, the chain bound and the
    line-locus codimension; ``bound >= chain > line`` must hold."""
    line = line_locus_codim(instance)
    rows = []
    for b in range(2, instance.r + 1):
        bound = span_locus_codim_lower(instance, b, Variant.EQ, method).lower_bound
        rows.append(MarginRow(b, bound, chain_lower_bound(instance, b), line))
    return MarginReport(instance, tuple(rows))


def margin_grid(
    r_values: Iterable[int], a_values: Iterable[int], d_values: Sequence[int]
) -> Iterator[ProblemInstance]:
    """All full instances (k = r + a - 1) with non-decreasing degrees drawn
    from ``d_values``, in a fixed order."""
    d_sorted = sorted(set(d_values))
    a_list = list(a_values)
    for r in r_values:
        for a in a_list:
            k = r + a - 1
            for degs in itertools.combinations_with_replacement(d_sorted, k):
                yield ProblemInstance(r, a, degs)


@dataclass
class GridSummary:
    instances: int = 0
    checks: int = 0
    failures: list[MarginReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def merge(self, other: "GridSummary") -> None:
        self.instances += other.instances
        self.checks += other.checks
        self.failures.extend(other.failures)


def _check_chunk(chunk: list[ProblemInstance], method: str) -> GridSummary:
    out = GridSummary()
    for inst in chunk:
        rep = theorem_margin_check(inst, method)
        out.instances += 1
        out.checks += len(rep.rows)
        if not rep.passed:
            out.failures.append(rep)
    return out


def _chunked(items: Iterable, size: int) -> Iterator[list]:
    it = iter(items)
    while chunk := list(itertools.islice(it, size)):
        yield chunk


def check_grid(
    instances: Iterable[ProblemInstance],
    workers: int = 1,
    method: str = "exhaustive",
    chunk_size: int = 2000,
) -> GridSummary:
    """Run :func:`theorem_margin_check` over many instances.

    Chunks are reduced in submission order, so the summary (including the
    order of failures) does not depend on ``workers``.
    """
    summary = GridSummary()
    chunks = _chunked(instances, chunk_size)
    if workers <= 1:
        for chunk in chunks:
            summary.merge(_check_chunk(chunk, method))
        return summary
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_check_chunk, chunks, itertools.repeat(method)):
            summary.merge(part)
    return summary
