"""Decision procedures for excess vanishing loci.

Two independent routes:

* point counting: a zero-dimensional complete intersection of forms of
  degrees ``d_i`` has at most ``B = prod d_i`` points over any field, so
  more than ``B`` common zeros over some F_{q^m} certifies a positive
  dimensional locus;
* resultants: after a coordinate change that gives both forms a pure
  power of the last variable, ``Res_{x_r}(F, G)`` vanishes identically iff
  ``F`` and ``G`` share a nonconstant factor.

Both have batched numpy versions that work on ``(B, n_coeffs)`` arrays of
element codes; the single-tuple functions are thin wrappers over them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from ..exactmath import form_space_dim
from .field import FieldSpec, embedding, extension
from .forms import (
    Form,
    LinearDigitMap,
    TupleInstance,
    count_projective_points,
    monomial_index,
    monomials,
    projective_points,
)

__all__ = [
    "UnsupportedOracle",
    "DimCertificate",
    "default_m_max",
    "coordinate_changes",
    "common_zero_counts",
    "positive_dim_batch",
    "positive_dim_test",
    "common_component_batch",
    "common_component_test",
    "resultant_batch",
]

POINT_BUDGET = 2_000_000


class UnsupportedOracle(ValueError):
    """No decision procedure covers the requested (r, k, target) case."""


@dataclass(frozen=True)
class DimCertificate:
    positive: bool
    method: str  # "count" or "resultant"
    m: int | None = None  # extension degree of the witnessing count
    count: int | None = None
    bound: int | None = None

    def __bool__(self) -> bool:
        return self.positive


def default_m_max(q: int, bezout: int) -> int:
    """Least ``m`` with ``q^m >= 4 B^2``."""
    m, size = 1, q
    while size < 4 * bezout * bezout:
        m += 1
        size *= q
    return m


# -- point counting -------------------------------------------------------


def _frobenius_orbits(r: int, ext: FieldSpec, q: int) -> tuple[list, list[int]]:
    """Representatives and sizes of the orbits of x -> x^q on P^r(ext)."""
    seen: set = set()
    reps, sizes = [], []
    for pt in projective_points(r, ext):
        if pt in seen:
            continue
        orbit = {pt}
        cur = pt
        while True:
            cur = tuple(ext.pow(x, q) for x in cur)
            if cur == pt:
                break
            orbit.add(cur)
        seen |= orbit
        reps.append(pt)
        sizes.append(len(orbit))
    return reps, sizes


class _PointEvaluator:
    """Zero tests of batched forms at the points of P^r(F_{q^m}).

    Forms have coefficients in F_q, so their zero sets are unions of
    Frobenius orbits: one representative per orbit is evaluated and the
    count is weighted by orbit size.
    """

    def __init__(self, r: int, degrees: tuple[int, ...], base: FieldSpec, m: int):
        ext = extension(base, m)
        self.p, self.mext = base.p, ext.m
        reps, sizes = _frobenius_orbits(r, ext, base.q)
        self.weights = np.array(sizes, dtype=np.int64)
        self.maps = {d: self._map(r, d, base, ext, reps) for d in set(degrees)}
        self.code_weights = (base.p ** np.arange(ext.m)).astype(np.float32)

    @staticmethod
    def _map(r, d, base, ext, points) -> LinearDigitMap:
        pow_cache: dict[int, list[int]] = {}

        def powers(x: int) -> list[int]:
            if x not in pow_cache:
                row = [1]
                for _ in range(d):
                    row.append(ext.mul(row[-1], x))
                pow_cache[x] = row
            return pow_cache[x]

        images = []
        for exps in monomials(r + 1, d):
            values = []
            for pt in points:
                v = 1
                for x, e in zip(pt, exps):
                    if e:
                        v = ext.mul(v, powers(x)[e])
                        if not v:
                            break
                values.append(v)
            images.append(values)
        return LinearDigitMap(base, ext, images)

    def counts(self, coeffs: Sequence[np.ndarray], degrees: Sequence[int]) -> np.ndarray:
        """Number of common zeros for each tuple in the batch."""
        first = self.maps[degrees[0]]
        vals = first.base_digits(coeffs[0]) @ first.matrix
        np.fmod(vals, self.p, out=vals)
        codes = vals.reshape(vals.shape[0], -1, self.mext) @ self.code_weights
        rows, cols = np.nonzero(codes == 0)
        for c, d in zip(coeffs[1:], degrees[1:]):
            lin = self.maps[d]
            dig = lin.base_digits(c)[rows]  # (K, n_in)
            blocks = lin.matrix.reshape(lin.matrix.shape[0], -1, self.mext)
            v = np.einsum("ki,kij->kj", dig, blocks[:, cols, :].transpose(1, 0, 2))
            zero = ~np.fmod(v, self.p).any(axis=1)
            rows, cols = rows[zero], cols[zero]
        return np.bincount(rows, weights=self.weights[cols], minlength=coeffs[0].shape[0]).astype(np.int64)


@lru_cache(maxsize=32)
def _point_evaluator(r: int, degrees: tuple[int, ...], base: FieldSpec, m: int) -> _PointEvaluator:
    return _PointEvaluator(r, degrees, base, m)


def common_zero_counts(
    coeffs: Sequence[np.ndarray], r: int, degrees: Sequence[int], base: FieldSpec, m: int
) -> np.ndarray:
    """Number of common zeros in P^r(F_{q^m}) for each tuple in the batch."""
    return _point_evaluator(r, tuple(degrees), base, m).counts(coeffs, degrees)


def positive_dim_batch(
    coeffs: Sequence[np.ndarray],
    r: int,
    degrees: Sequence[int],
    base: FieldSpec,
    m_max: int | None = None,
    chunk: int = 1024,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Decide ``dim >= 1`` for ``k`` forms by counting common zeros.

    Returns ``(positive, m, count)``: for positive rows the first extension
    degree whose count exceeds the Bezout number and that count; for the
    others ``m = 0`` and the count at ``m_max``.
    """
    bound = math.prod(degrees)
    if m_max is None:
        m_max = default_m_max(base.q, bound)
    total_points = sum(count_projective_points(r, base.q**m) for m in range(1, m_max + 1))
    if total_points > POINT_BUDGET:
        raise UnsupportedOracle(
            f"counting over P^{r}(F_{base.q}^m), m <= {m_max}, needs {total_points} points"
        )
    n = coeffs[0].shape[0]
    positive = np.zeros(n, dtype=bool)
    witness = np.zeros(n, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    for m in range(1, m_max + 1):
        pending = np.flatnonzero(~positive)
        if not pending.size:
            break
        # big evaluation maps: keep the float32 intermediate bounded
        npts = count_projective_points(r, base.q**m) // m + 1
        step = max(1, min(chunk, (1 << 24) // max(1, npts * base.m * m)))
        for s in range(0, pending.size, step):
            idx = pending[s : s + step]
            cnt = common_zero_counts([c[idx] for c in coeffs], r, degrees, base, m)
            counts[idx] = cnt
            hit = cnt > bound
            positive[idx[hit]] = True
            witness[idx[hit]] = m
    return positive, witness, counts


def _target_dim(r: int, k: int, target_excess: int) -> int:
    if target_excess < 1:
        raise UnsupportedOracle(f"target excess must be >= 1, got {target_excess}")
    return r - k + target_excess


def positive_dim_test(
    t: TupleInstance, target_excess: int = 1, m_max: int | None = None
) -> DimCertificate:
    """Decide whether ``{F_1 = ... = F_k = 0}`` has dimension at least
    ``r - k + target_excess``.

    Target dimension 1 is decided by counting common zeros over
    F_{q^m}, ``m <= m_max``; a pair of forms with target dimension
    ``r - 1 > 1`` goes to :func:`common_component_test`.
    """
    r, k = t.r, len(t.forms)
    target = _target_dim(r, k, target_excess)
    if target == 1:
        coeffs = [np.array([f.coeffs], dtype=np.int16) for f in t.forms]
        bound = math.prod(t.degrees)
        pos, m, cnt = positive_dim_batch(coeffs, r, t.degrees, t.field, m_max)
        return DimCertificate(bool(pos[0]), "count", int(m[0]) or None, int(cnt[0]), bound)
    if k == 2 and target == r - 1:
        f, g = t.forms
        if f.is_zero or g.is_zero:
            return DimCertificate(True, "resultant")
        return DimCertificate(common_component_test(f, g), "resultant")
    raise UnsupportedOracle(
        f"no decision procedure for dim >= {target} with k={k} forms in P^{r}"
    )


# -- resultants ------------------------------------------------------------


def coordinate_changes(r: int, field: FieldSpec) -> Iterator[tuple[int, ...]]:
    """Shift vectors ``lam`` for the substitution ``x_j -> x_j + lam_j x_r``,
    tried in a fixed order: identity, elementary shears ``lam = e_j``,
    scaled shears ``c e_j``, then every remaining vector in code order."""
    seen = set()

    def emit(v):
        if v not in seen:
            seen.add(v)
            return True
        return False

    zero = (0,) * r
    if emit(zero):
        yield zero
    for c in range(1, field.q):
        for j in range(r):
            v = tuple(c if i == j else 0 for i in range(r))
            if emit(v):
                yield v
    for v in np.ndindex(*(field.q,) * r):
        v = tuple(int(x) for x in v)
        if emit(v):
            yield v


class _Tables:
    """numpy table arithmetic on element codes of one field."""

    def __init__(self, field: FieldSpec):
        self.field = field
        self.add = field.add_table
        self.mul = field.mul_table
        self.neg = field.neg_table


def _bf_mul(T: _Tables, nv: int, a, b):
    """Product of batched forms ``(deg, array)`` in ``nv`` variables."""
    (da, A), (db, B) = a, b
    ma, mb = monomials(nv, da), monomials(nv, db)
    target = monomial_index(nv, da + db)
    out = np.zeros((A.shape[0], len(target)), dtype=np.int16)
    for i, ea in enumerate(ma):
        col_a = A[:, i]
        if not col_a.any():
            continue
        for j, eb in enumerate(mb):
            t = target[tuple(x + y for x, y in zip(ea, eb))]
            out[:, t] = T.add[out[:, t], T.mul[col_a, B[:, j]]]
    return da + db, out


def _bf_add(T: _Tables, a, b):
    if a is None:
        return b
    if b is None:
        return a
    assert a[0] == b[0]
    return a[0], T.add[a[1], b[1]]


@lru_cache(maxsize=256)
def _shear_images(r: int, d: int, field: FieldSpec, lam: tuple[int, ...]) -> tuple:
    """Coefficient vectors of ``m(x_0 + lam_0 x_r, ..., x_r)`` for each
    degree-``d`` monomial ``m``."""
    index = monomial_index(r + 1, d)
    coords = []
    for j in range(r + 1):
        lin = {tuple(1 if i == j else 0 for i in range(r + 1)): 1}
        if j < r and lam[j]:
            e = tuple(1 if i == r else 0 for i in range(r + 1))
            lin[e] = lam[j]
        coords.append(lin)
    images = []
    for exps in monomials(r + 1, d):
        poly = {(0,) * (r + 1): 1}
        for j, e in enumerate(exps):
            for _ in range(e):
                nxt: dict = {}
                for ea, ca in poly.items():
                    for eb, cb in coords[j].items():
                        key = tuple(x + y for x, y in zip(ea, eb))
                        nxt[key] = field.add(nxt.get(key, 0), field.mul(ca, cb))
                poly = {k: v for k, v in nxt.items() if v}
        row = [0] * len(index)
        for e, c in poly.items():
            row[index[e]] = c
        images.append(tuple(row))
    return tuple(images)


def _leading_values(T: _Tables, coeffs: np.ndarray, r: int, d: int, lams) -> np.ndarray:
    """``F(lam, 1)`` for each shift vector: the x_r^d coefficient after the
    substitution.  Shape (B, len(lams))."""
    field = T.field
    mons = monomials(r + 1, d)
    out = np.zeros((coeffs.shape[0], len(lams)), dtype=np.int16)
    for li, lam in enumerate(lams):
        point = tuple(lam) + (1,)
        acc = np.zeros(coeffs.shape[0], dtype=np.int16)
        for i, exps in enumerate(mons):
            v = 1
            for x, e in zip(point, exps):
                v = field.mul(v, field.pow(x, e)) if e else v
            if v:
                acc = T.add[acc, T.mul[coeffs[:, i], v]]
        out[:, li] = acc
    return out


def resultant_batch(
    T: _Tables, F: np.ndarray, G: np.ndarray, r: int, d1: int, d2: int
):
    """Sylvester resultant in ``x_r`` of batched forms whose ``x_r^{d}``
    coefficients are nonzero, as a batched form of degree ``d1 * d2`` in
    ``x_0, ..., x_{r-1}``.  The determinant is expanded along columns with
    memoized minors, so only ring operations are used."""
    nv = r  # variables left after eliminating x_r
    idx_f, idx_g = monomial_index(r + 1, d1), monomial_index(r + 1, d2)

    def split(C, d, index):
        # part[i] = coefficient of x_r^i, a form of degree d - i
        parts = []
        for i in range(d + 1):
            sub = monomials(nv, d - i)
            cols = [index[e + (i,)] for e in sub]
            parts.append((d - i, C[:, cols]))
        return parts

    A = split(F, d1, idx_f)
    Bp = split(G, d2, idx_g)
    n = d1 + d2

    def entry(row: int, col: int):
        if row < d2:
            off = col - row
            return A[d1 - off] if 0 <= off <= d1 else None
        off = col - (row - d2)
        return Bp[d2 - off] if 0 <= off <= d2 else None

    batch = F.shape[0]
    memo: dict[frozenset, tuple | None] = {
        frozenset(): (0, np.ones((batch, 1), dtype=np.int16))
    }

    def minor(rows: frozenset):
        if rows in memo:
            return memo[rows]
        col = n - len(rows)
        acc = None
        for pos, row in enumerate(sorted(rows)):
            e = entry(row, col)
            if e is None:
                continue
            sub = minor(rows - {row})
            if sub is None:
                continue
            term = _bf_mul(T, nv, e, sub)
            if pos % 2:
                term = (term[0], T.neg[term[1]])
            acc = _bf_add(T, acc, term)
        memo[rows] = acc
        return acc

    res = minor(frozenset(range(n)))
    if res is None:
        return d1 * d2, np.zeros((batch, len(monomials(nv, d1 * d2))), dtype=np.int16)
    return res


def common_component_batch(
    F: np.ndarray, G: np.ndarray, field: FieldSpec, r: int, d1: int, d2: int
) -> np.ndarray:
    """Batched :func:`common_component_test`.  Rows where either form is
    zero are reported True (the common locus is then a whole hypersurface
    or all of P^r)."""
    F = np.asarray(F, dtype=np.int16)
    G = np.asarray(G, dtype=np.int16)
    result = ~(F.any(axis=1) & G.any(axis=1))
    pending = np.flatnonzero(~result)
    t = 1
    while pending.size:
        ext = extension(field, t)
        T = _Tables(ext)
        lift = np.array(embedding(field, ext), dtype=np.int16)
        Fe, Ge = lift[F[pending]], lift[G[pending]]
        lams = list(coordinate_changes(r, ext))
        ok = (_leading_values(T, Fe, r, d1, lams) != 0) & (
            _leading_values(T, Ge, r, d2, lams) != 0
        )
        has = ok.any(axis=1)
        choice = ok.argmax(axis=1)
        for li in np.unique(choice[has]):
            rows = np.flatnonzero(has & (choice == li))
            lam = lams[li]
            Fs = LinearDigitMap(ext, ext, _shear_images(r, d1, ext, lam)).apply(Fe[rows])
            Gs = LinearDigitMap(ext, ext, _shear_images(r, d2, ext, lam)).apply(Ge[rows])
            _, res = resultant_batch(T, Fs, Gs, r, d1, d2)
            result[pending[rows]] = ~res.any(axis=1)
        pending = pending[~has]
        t += 1
        if ext.q > (d1 + d2) and pending.size:
            raise AssertionError("coordinate change search failed past the degree bound")
    return result


def common_component_test(F: Form, G: Form) -> bool:
    """True iff the nonzero forms ``F`` and ``G`` share a nonconstant common
    factor over the algebraic closure."""
    if F.is_zero or G.is_zero:
        raise ValueError("common_component_test needs nonzero forms")
    if F.r != G.r or F.field != G.field:
        raise ValueError("forms must share r and the field")
    out = common_component_batch(
        np.array([F.coeffs], dtype=np.int16),
        np.array([G.coeffs], dtype=np.int16),
        F.field,
        F.r,
        F.d,
        G.d,
    )
    return bool(out[0])
