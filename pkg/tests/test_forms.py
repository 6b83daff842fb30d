import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from excesslocus.exactmath import form_space_dim
from excesslocus.gfpoly.field import embedding, extension, field_make
from excesslocus.gfpoly.forms import (
    Form,
    LinearDigitMap,
    TupleInstance,
    count_projective_points,
    evaluate,
    monomial_rank,
    monomials,
    projective_points,
    rational_subspaces,
    restriction_matrix,
)

from reference import count_monomials

F2, F3, F4 = field_make(2), field_make(3), field_make(2, 2)


def gaussian_binomial(n, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def test_monomial_order():
    assert monomials(3, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))
    assert monomials(2, 3) == ((3, 0), (2, 1), (1, 2), (0, 3))


def test_monomial_counts_and_ranks():
    for nvars in range(1, 6):
        for d in range(0, 6):
            mons = monomials(nvars, d)
            assert len(mons) == count_monomials(nvars, d)
            assert list(mons) == sorted(mons, reverse=True)
            for i, e in enumerate(mons):
                assert monomial_rank(e) == i


def test_form_validates_length():
    with pytest.raises(ValueError):
        Form(F2, 2, 2, (0,) * 5)
    with pytest.raises(ValueError):
        Form(F2, 2, 1, (0, 2, 0))


def test_from_terms_and_str():
    f = Form.from_terms(F2, 2, 2, {(2, 0, 0): 1, (0, 1, 1): 1})
    assert f.coeffs == (1, 0, 0, 0, 1, 0)
    assert str(f) == "x0^2 + x1*x2"
    assert str(Form.zero(F2, 2, 2)) == "0"
    with pytest.raises(ValueError):
        Form.from_terms(F2, 2, 2, {(1, 0, 0): 1})


def test_evaluate_examples():
    assert evaluate(Form.from_terms(F2, 2, 1, {(1, 0, 0): 1}), (0, 1, 0)) == 0
    assert evaluate(Form.from_terms(F2, 2, 2, {(2, 0, 0): 1, (0, 1, 1): 1}), (1, 1, 1)) == 0
    zero = Form.zero(F3, 2, 3)
    assert all(evaluate(zero, pt) == 0 for pt in projective_points(2, F3))


def test_evaluate_dimension_mismatch():
    with pytest.raises(ValueError, match="coordinates"):
        evaluate(Form.zero(F2, 2, 1), (1, 0))


def random_form(field, r, d, seed):
    rng = np.random.default_rng(seed)
    return Form(field, r, d, tuple(rng.integers(0, field.q, form_space_dim(r, d)).tolist()))


@settings(max_examples=60)
@given(
    st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1)]),
    st.integers(1, 3),
    st.integers(1, 4),
    st.integers(0, 10**6),
    st.integers(1, 3),
)
def test_homogeneity(pm, r, d, seed, t):
    base = field_make(*pm)
    ext = extension(base, t)
    form = random_form(base, r, d, seed)
    rng = np.random.default_rng(seed + 1)
    point = tuple(rng.integers(0, ext.q, r + 1).tolist())
    lam = int(rng.integers(1, ext.q))
    scaled = tuple(ext.mul(lam, x) for x in point)
    assert evaluate(form, scaled, ext) == ext.mul(ext.pow(lam, d), evaluate(form, point, ext))


@pytest.mark.parametrize("r,q", [(1, 2), (2, 3), (3, 2), (2, 4), (1, 5)])
def test_projective_points(r, q):
    field = field_make(2, 2) if q == 4 else field_make(q)
    pts = list(projective_points(r, field))
    assert len(pts) == count_projective_points(r, q) == (q ** (r + 1) - 1) // (q - 1)
    assert len(set(pts)) == len(pts)
    for pt in pts:
        lead = next(x for x in pt if x)
        assert lead == 1
    assert pts == list(projective_points(r, field))


def test_projective_point_counts_examples():
    assert len(list(projective_points(1, F2))) == 3
    assert len(list(projective_points(2, F3))) == 13
    assert len(list(projective_points(3, F2))) == 15


@pytest.mark.parametrize("r,t,field", [(2, 1, F2), (2, 1, F3), (3, 1, F2), (3, 2, F2), (2, 1, F4), (3, 0, F3)])
def test_rational_subspaces_count(r, t, field):
    planes = rational_subspaces(r, t, field)
    assert len(planes) == gaussian_binomial(r + 1, t + 1, field.q)
    # distinct as point sets
    def points_of(basis):
        pts = set()
        for coeffs in itertools.product(range(field.q), repeat=len(basis)):
            v = [0] * (r + 1)
            for c, row in zip(coeffs, basis):
                for i, x in enumerate(row):
                    v[i] = field.add(v[i], field.mul(c, x))
            if any(v):
                lead = next(x for x in v if x)
                inv = field.inv(lead)
                pts.add(tuple(field.mul(inv, x) for x in v))
        return frozenset(pts)

    sets = {points_of(b) for b in planes}
    assert len(sets) == len(planes)


def test_restriction_vanishes_iff_zero_on_line_points():
    # F restricted to a line is zero iff F vanishes at every point of the
    # line over F_{q^3}, where a nonzero binary cubic cannot vanish entirely
    base = F2
    ext = extension(base, 3)
    lift = embedding(base, ext)
    rng = np.random.default_rng(3)
    lines = rational_subspaces(2, 1, base)
    for trial in range(40):
        u, v = lines[trial % len(lines)]
        form = random_form(base, 2, 2, trial)
        if trial % 3 == 0:
            # force vanishing: multiply a random linear form by the line's equation
            eq = np.cross(u, v) % 2
            lin = rng.integers(0, 2, 3)
            prod = np.zeros(6, dtype=int)
            idx = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 1): 3, (1, 2): 4, (2, 2): 5}
            for i in range(3):
                for j in range(3):
                    prod[idx[(min(i, j), max(i, j))]] += eq[i] * lin[j]
            form = Form(base, 2, 2, tuple((prod % 2).tolist()))
        polys, _ = restriction_matrix(2, 2, (u, v), base)
        restricted = {}
        for c, poly in zip(form.coeffs, polys):
            for e, x in poly.items():
                restricted[e] = base.add(restricted.get(e, 0), base.mul(c, x))
        zero_restriction = not any(restricted.values())
        on_line = all(
            evaluate(form, tuple(ext.add(ext.mul(s, lift[a]), ext.mul(t, lift[b])) for a, b in zip(u, v)), ext) == 0
            for s in range(ext.q)
            for t in range(ext.q)
        )
        assert zero_restriction == on_line


def test_linear_digit_map_matches_scalar_evaluation():
    base, ext = F4, extension(F4, 2)
    pts = list(projective_points(2, ext))[:50]
    images = []
    for exps in monomials(3, 2):
        mono = Form.from_terms(base, 2, 2, {exps: 1})
        images.append([evaluate(mono, pt, ext) for pt in pts])
    lin = LinearDigitMap(base, ext, images)
    forms = [random_form(base, 2, 2, s) for s in range(20)]
    coeffs = np.array([f.coeffs for f in forms], dtype=np.int16)
    got = lin.apply(coeffs)
    for f, row in zip(forms, got):
        assert row.tolist() == [evaluate(f, pt, ext) for pt in pts]
    assert (lin.zero_mask(coeffs) == (got == 0)).all()


def test_tuple_json_roundtrip(tmp_path):
    f = Form.from_terms(F4, 2, 1, {(1, 0, 0): 2, (0, 0, 1): 3})
    g = Form.from_terms(F4, 2, 2, {(0, 1, 1): 1})
    tup = TupleInstance((f, g))
    path = tmp_path / "t.json"
    tup.dump(path)
    data = json.loads(path.read_text())
    assert data == {
        "p": 2,
        "m": 2,
        "modulus": [1, 1, 1],
        "r": 2,
        "degrees": [1, 2],
        "forms": [[2, 0, 3], [0, 0, 0, 0, 1, 0]],
    }
    assert TupleInstance.load(path) == tup


def test_tuple_rejects():
    f1 = Form.zero(F2, 2, 1)
    f2 = Form.zero(F2, 2, 2)
    with pytest.raises(ValueError):
        TupleInstance((f2, f1))
    with pytest.raises(ValueError):
        TupleInstance((f1, Form.zero(F3, 2, 1)))
    bad = TupleInstance((f1, f2)).to_dict()
    bad["modulus"] = [1, 1]
    with pytest.raises(ValueError, match="modulus"):
        TupleInstance.from_dict(bad)
