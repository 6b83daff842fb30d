"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the code under test except the field arithmetic,
which is checked on its own in test_field.py.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def pascal_row(n: int) -> list[int]:
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def count_monomials(nvars: int, d: int) -> int:
    return sum(1 for e in itertools.product(range(d + 1), repeat=nvars) if sum(e) == d)


def rank_rational(rows: list[list[int]]) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def rational_normal_curve_hilbert(r: int, d: int) -> int:
    """Rank of restriction of degree-d forms on P^r to the curve
    (s^r : s^{r-1} t : ... : t^r), computed over Q."""
    exps = [e for e in itertools.product(range(d + 1), repeat=r + 1) if sum(e) == d]
    cols = r * d + 1
    rows = []
    for e in exps:
        # x_i -> s^{r-i} t^i ; record the t-exponent of the image monomial
        t_deg = sum(i * ei for i, ei in enumerate(e))
        row = [0] * cols
        row[t_deg] = 1
        rows.append(row)
    # transpose keeps elimination short (rank is the same)
    return rank_rational([list(c) for c in zip(*rows)])


def rank_fq(rows, field) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        m[rank] = [field.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def count_low_rank(nrows: int, ncols: int, max_rank: int, field) -> int:
    """Brute-force count of nrows x ncols matrices over ``field`` of rank
    at most ``max_rank``."""
    q = field.q
    total = 0
    for entries in itertools.product(range(q), repeat=nrows * ncols):
        rows = [entries[i * ncols : (i + 1) * ncols] for i in range(nrows)]
        if rank_fq(rows, field) <= max_rank:
            total += 1
    return total


def rank_le1_closed_form(nrows: int, ncols: int, q: int) -> int:
    """Zero matrix plus (nonzero column vector) x (nonzero row vector)
    modulo scalars."""
    return 1 + (q**nrows - 1) * (q**ncols - 1) // (q - 1)


def linear_times_linear(field, lin, other):
    """Coefficients (graded-lex, ternary quadrics) of lin * other for two
    linear forms given by (c0, c1, c2)."""
    # monomial order x0^2, x0x1, x0x2, x1^2, x1x2, x2^2
    index = {(0, 0): 0, (0, 1): 1, (0, 2): 2, (1, 1): 3, (1, 2): 4, (2, 2): 5}
    out = [0] * 6
    for i in range(3):
        for j in range(3):
            key = (min(i, j), max(i, j))
            out[index[key]] = field.add(out[index[key]], field.mul(lin[i], other[j]))
    return tuple(out)


def count_line_conic_divisible(field) -> int:
    """Pairs (L, C) of a linear form and a ternary quadric over F_q with
    L = 0 or L dividing C, by listing all multiples of each L."""
    q = field.q
    total = 0
    for lin in itertools.product(range(q), repeat=3):
        if not any(lin):
            total += q**6
            continue
        multiples = {linear_times_linear(field, lin, m) for m in itertools.product(range(q), repeat=3)}
        total += len(multiples)
    return total


def _nonzero_lines(q: int):
    """One representative per projective class of nonzero ternary linear
    forms, first nonzero coefficient 1."""
    for lin in itertools.product(range(q), repeat=3):
        if any(lin) and next(c for c in lin if c) == 1:
            yield lin


def conic_pairs_with_common_component(field) -> tuple[set, set]:
    """Ordered pairs of ternary quadrics over F_q sharing a component over
    the algebraic closure, and the subset sharing an F_q-rational line.

    A shared non-rational line forces its Galois conjugates to be shared
    too, which for conics means the two are proportional; so the excess
    pairs are: a zero form, proportional pairs, or a common rational
    linear factor.
    """
    q = field.q
    quads = list(itertools.product(range(q), repeat=6))
    zero = (0,) * 6
    on_line = set()
    for lin in _nonzero_lines(q):
        mult = {linear_times_linear(field, lin, m) for m in itertools.product(range(q), repeat=3)}
        on_line.update(itertools.product(mult, mult))
    excess = set(on_line)
    for f in quads:
        excess.add((f, zero))
        excess.add((zero, f))
        if f != zero:
            for c in range(1, q):
                excess.add((f, tuple(field.mul(c, x) for x in f)))
    return excess, on_line
