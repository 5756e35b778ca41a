import itertools
from fractions import Fraction

import pytest
import sympy


def sympy_rank(rows):
    """Rank over QQ by sympy, independent of our eliminator."""
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                         for r in rows]).rank()


def naive_rank_mod_p(rows, p):
    """Textbook dense elimination mod p."""
    m = [[int(x) % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def words_of_length(a, L):
    return [tuple(w) for w in itertools.product(range(1, a + 1), repeat=L)]


def quotient_dims_by_linear_algebra(presentation, top):
    """Per-degree dims of a homogeneous quotient of the free algebra, from the
    span of all u*r*v of each degree (sympy rank), no rewriting involved."""
    a = presentation.a
    out = []
    for L in range(top + 1):
        words = words_of_length(a, L)
        index = {w: i for i, w in enumerate(words)}
        rows = []
        for r in presentation.relations:
            deg = r.degree
            if deg > L:
                continue
            for k in range(L - deg + 1):
                for u in words_of_length(a, k):
                    for v in words_of_length(a, L - deg - k):
                        row = [0] * len(words)
                        for w, c in r.terms.items():
                            row[index[u + w + v]] += c
                        rows.append(row)
        out.append(len(words) - (sympy_rank(rows) if rows else 0))
    return out


@pytest.fixture
def x2_yx():
    from quiverloc.freealg import parse_presentation
    return parse_presentation("k<x, y | x*x, y*x>")


@pytest.fixture
def weyl():
    from quiverloc.freealg import parse_presentation
    return parse_presentation("k<x, y | x*y - y*x - 1>")
