"""Exhaustive and sampled enumeration of form tuples over F_q.

The tuple space ``prod_i W_{r,d_i}(F_q)`` has ``q^N`` points.  Tuples are
numbered by reading the concatenated coefficient vector as a base-``q``
integer (first coefficient least significant) and the index range is cut
into fixed-size chunks.  Chunks are independent, so any number of worker
processes produces the same totals.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ..bounds import ProblemInstance, line_locus_codim
from ..catalog import common_divisor_codim
from ..exactmath import form_space_dim
from .field import FieldSpec, field_from_q, field_make
from .forms import LinearDigitMap, monomial_index, rational_subspaces, restriction_matrix
from .oracles import (
    UnsupportedOracle,
    common_component_batch,
    default_m_max,
    positive_dim_batch,
)

__all__ = [
    "SizeGuardExceeded",
    "LabConfig",
    "CountReport",
    "enumerate_locus",
    "estimate_codim_sweep",
    "predicted_codim",
    "reports_to_csv",
    "reports_from_csv",
    "CSV_COLUMNS",
]

CHUNK = 1 << 15
DEFAULT_SIZE_GUARD = 1 << 24
MAX_Q = 13

CSV_COLUMNS = (
    "p",
    "m",
    "r",
    "degrees",
    "N",
    "count_total",
    "count_excess",
    "count_line",
    "est_codim",
    "line_fraction",
    "predicted_codim",
)


class SizeGuardExceeded(ValueError):
    def __init__(self, q: int, n: int, guard: int):
        self.size = q**n
        super().__init__(
            f"exhaustive enumeration needs q^N = {q}^{n} = {self.size} tuples, "
            f"above the size guard {guard}"
        )


@dataclass(frozen=True)
class LabConfig:
    r: int
    degrees: tuple[int, ...]
    a: int
    p: int
    m: int
    mode: str = "exhaustive"  # or "sampled"
    seed: int | None = None
    n_samples: int | None = None
    m_max: int | None = None

    @property
    def field(self) -> FieldSpec:
        return field_make(self.p, self.m)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(form_space_dim(self.r, d) for d in self.degrees)

    @property
    def N(self) -> int:
        return sum(self.sizes)

    @property
    def target_dim(self) -> int:
        return self.r - self.k + self.a

    @property
    def oracle(self) -> str:
        if self.k == 2 and self.target_dim == self.r - 1:
            return "resultant"
        if self.target_dim == 1:
            return "count"
        raise UnsupportedOracle(
            f"no decision procedure for dim >= {self.target_dim} "
            f"with k={self.k} forms in P^{self.r}"
        )

    def total(self) -> int:
        return self.q**self.N if self.mode == "exhaustive" else int(self.n_samples)


@dataclass(frozen=True)
class CountReport:
    p: int
    m: int
    modulus: tuple[int, ...]
    r: int
    a: int
    degrees: tuple[int, ...]
    N: int
    mode: str
    seed: int | None
    count_total: int
    count_excess: int
    count_line: int
    est_codim: float | None
    line_fraction: float | None
    predicted_codim: int | None

    @property
    def q(self) -> int:
        return self.p**self.m

    def to_dict(self) -> dict:
        d = asdict(self)
        d["modulus"] = list(self.modulus)
        d["degrees"] = list(self.degrees)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CountReport":
        d = dict(d)
        d.pop("generated_at", None)
        d["modulus"] = tuple(d["modulus"])
        d["degrees"] = tuple(d["degrees"])
        return cls(**d)

    def csv_row(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "r": self.r,
            "degrees": ",".join(map(str, self.degrees)),
            "N": self.N,
            "count_total": self.count_total,
            "count_excess": self.count_excess,
            "count_line": self.count_line,
            "est_codim": "" if self.est_codim is None else repr(self.est_codim),
            "line_fraction": "" if self.line_fraction is None else repr(self.line_fraction),
            "predicted_codim": "" if self.predicted_codim is None else self.predicted_codim,
        }


def reports_to_csv(reports: Iterable[CountReport], timestamp: str | None = None) -> str:
    buf = io.StringIO()
    cols = list(CSV_COLUMNS) + (["generated_at"] if timestamp else [])
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        row = rep.csv_row()
        if timestamp:
            row["generated_at"] = timestamp
        writer.writerow(row)
    return buf.getvalue()


def reports_from_csv(text: str) -> list[dict]:
    """Parse CSV rows back into typed dicts (the CSV omits modulus, a, mode
    and seed, so full reports round-trip through JSON instead)."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            {
                "p": int(row["p"]),
                "m": int(row["m"]),
                "r": int(row["r"]),
                "degrees": tuple(int(x) for x in row["degrees"].split(",")),
                "N": int(row["N"]),
                "count_total": int(row["count_total"]),
                "count_excess": int(row["count_excess"]),
                "count_line": int(row["count_line"]),
                "est_codim": float(row["est_codim"]) if row["est_codim"] else None,
                "line_fraction": float(row["line_fraction"]) if row["line_fraction"] else None,
                "predicted_codim": int(row["predicted_codim"]) if row["predicted_codim"] else None,
            }
        )
    return out


def predicted_codim(r: int, degrees: Sequence[int], a: int) -> int | None:
    """Codimension of the expected largest component: the line locus when
    there are r + a - 1 forms, otherwise (pairs, a = 1) the smallest
    common-divisor codimension."""
    k = len(degrees)
    if k == r + a - 1:
        return line_locus_codim(ProblemInstance(r, a, tuple(degrees)))
    if k == 2 and a == 1:
        return min(common_divisor_codim(r, degrees, e) for e in range(1, degrees[0] + 1))
    return None


# -- per-chunk work ----------------------------------------------------------


@lru_cache(maxsize=16)
def _plane_maps(r: int, t: int, degrees: tuple[int, ...], field: FieldSpec):
    """For each degree, the map restricting forms to every rational t-plane,
    and the number of output coefficients per plane."""
    planes = rational_subspaces(r, t, field)
    maps = {}
    for d in set(degrees):
        target = monomial_index(t + 1, d)
        per_plane = len(target)
        images = [[] for _ in range(form_space_dim(r, d))]
        for basis in planes:
            polys, _ = restriction_matrix(r, d, basis, field)
            for i, poly in enumerate(polys):
                row = [0] * per_plane
                for e, c in poly.items():
                    row[target[e]] = c
                images[i].extend(row)
        maps[d] = (LinearDigitMap(field, field, images), per_plane)
    return maps


def _chunk_tuples(cfg: LabConfig, index: int) -> np.ndarray:
    q, N = cfg.q, cfg.N
    start = index * CHUNK
    stop = min(start + CHUNK, cfg.total())
    if cfg.mode == "exhaustive":
        ids = np.arange(start, stop, dtype=np.int64)
        powers = q ** np.arange(N, dtype=np.int64)
        return ((ids[:, None] // powers[None, :]) % q).astype(np.int16)
    # counter-based stream: block `index` of the Philox sequence keyed by
    # (seed, instance), so each chunk is reproducible in isolation
    key = np.random.SeedSequence(
        [cfg.seed, cfg.p, cfg.m, cfg.r, cfg.a, *cfg.degrees]
    ).generate_state(2, np.uint64)
    bitgen = np.random.Philox(key=key, counter=[0, index, 0, 0])
    return np.random.Generator(bitgen).integers(0, q, size=(stop - start, N), dtype=np.int16)


def _count_chunk(cfg: LabConfig, index: int) -> tuple[int, int, int]:
    tuples = _chunk_tuples(cfg, index)
    field = cfg.field
    bounds = np.cumsum((0,) + cfg.sizes)
    forms = [tuples[:, bounds[i] : bounds[i + 1]] for i in range(cfg.k)]
    if cfg.oracle == "resultant":
        d1, d2 = cfg.degrees
        excess = common_component_batch(forms[0], forms[1], field, cfg.r, d1, d2)
    else:
        excess, _, _ = positive_dim_batch(forms, cfg.r, cfg.degrees, field, cfg.m_max)
    maps = _plane_maps(cfg.r, cfg.target_dim, cfg.degrees, field)
    on_plane = None
    for f, d in zip(forms, cfg.degrees):
        lin, per_plane = maps[d]
        z = lin.zero_mask(f, group=per_plane)
        on_plane = z if on_plane is None else (on_plane & z)
    line = on_plane.any(axis=1)
    return len(tuples), int(excess.sum()), int(line.sum())


def _count_chunk_args(args) -> tuple[int, int, int]:
    return _count_chunk(*args)


def enumerate_locus(
    r: int,
    degrees: Sequence[int],
    a: int,
    field: FieldSpec,
    mode: str = "exhaustive",
    seed: int | None = None,
    n: int | None = None,
    m_max: int | None = None,
    size_guard: int = DEFAULT_SIZE_GUARD,
    workers: int = 1,
) -> CountReport:
    """Count tuples whose common zero locus has dimension at least
    ``r - k + a`` and, among them, those vanishing on an F_q-rational linear
    space of that dimension (a line when ``k = r + a - 1``)."""
    degrees = tuple(int(d) for d in degrees)
    if list(degrees) != sorted(degrees) or any(d < 1 for d in degrees):
        raise ValueError(f"degrees must be positive and non-decreasing, got {degrees}")
    if field.q > MAX_Q:
        raise ValueError(f"q={field.q} is above the supported field size {MAX_Q}")
    cfg = LabConfig(r, degrees, a, field.p, field.m, mode, seed, n, m_max)
    cfg.oracle  # reject unsupported combinations before any work
    if mode == "exhaustive":
        if field.q**cfg.N > size_guard:
            raise SizeGuardExceeded(field.q, cfg.N, size_guard)
    elif mode == "sampled":
        if seed is None or n is None or n < 1:
            raise ValueError("sampled mode needs a seed and a positive sample size")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if cfg.oracle == "count" and m_max is None:
        cfg = LabConfig(
            r, degrees, a, field.p, field.m, mode, seed, n,
            default_m_max(field.q, math.prod(degrees)),
        )

    chunks = [(cfg, i) for i in range(-(-cfg.total() // CHUNK))]
    if workers <= 1:
        parts = [_count_chunk(*c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_count_chunk_args, chunks))
    total = sum(x[0] for x in parts)
    excess = sum(x[1] for x in parts)
    line = sum(x[2] for x in parts)

    est = None
    if excess:
        if mode == "exhaustive":
            est = cfg.N - math.log(excess, field.q)
        else:
            est = -math.log(excess / total, field.q)
    return CountReport(
        p=field.p,
        m=field.m,
        modulus=tuple(field.modulus),
        r=r,
        a=a,
        degrees=degrees,
        N=cfg.N,
        mode=mode,
        seed=seed,
        count_total=total,
        count_excess=excess,
        count_line=line,
        est_codim=est,
        line_fraction=(line / excess) if excess else None,
        predicted_codim=predicted_codim(r, degrees, a),
    )


def estimate_codim_sweep(
    r: int,
    degrees: Sequence[int],
    a: int,
    fields: Iterable[FieldSpec | int],
    **kwargs,
) -> list[CountReport]:
    """One :func:`enumerate_locus` report per field (fields may be given as
    :class:`FieldSpec` or by their order q)."""
    out = []
    for f in fields:
        field = f if isinstance(f, FieldSpec) else field_from_q(int(f))
        out.append(enumerate_locus(r, degrees, a, field, **kwargs))
    return out


def reports_to_json(reports: Sequence[CountReport], timestamp: str | None = None) -> str:
    payload: dict = {"reports": [rep.to_dict() for rep in reports]}
    if timestamp:
        payload["generated_at"] = timestamp
    return json.dumps(payload, indent=2) + "\n"


def reports_from_json(text: str) -> list[CountReport]:
    return [CountReport.from_dict(d) for d in json.loads(text)["reports"]]
