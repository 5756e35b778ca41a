from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverloc.exactlin import GF, FieldMismatch, Mod
from quiverloc.freealg import (EmptyRelation, NcPoly, Presentation, PresentationSyntaxError,
                               UnknownGenerator, construction_size, group_algebra_presentation,
                               nc_arith, parse_presentation, word_key)

words = st.lists(st.integers(1, 3), max_size=3).map(tuple)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(NcPoly)

X = sympy.symbols("x1:4", commutative=False)


def to_sympy(p: NcPoly):
    out = sympy.Integer(0)
    for w, c in p.terms.items():
        mono = sympy.Integer(1)
        for i in w:
            mono = mono * X[i - 1]
        out += sympy.Rational(c.numerator, c.denominator) * mono
    return sympy.expand(out)


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_product_matches_sympy_noncommutative(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == NcPoly.zero()
    assert nc_arith(p, q, "mul") == p * q


def test_degree_and_leading():
    p = parse_presentation("k<x, y | x*y - y*x - 1>").relations[0]
    assert p.degree == 2
    # earlier generators are larger, so x*y leads
    assert p.leading() == ((1, 2), 1)
    assert NcPoly.zero().degree == -1


def test_word_order_degree_first():
    assert word_key((2,)) < word_key((1, 1))
    assert word_key((2, 1)) < word_key((1, 2))


@pytest.mark.parametrize("text", [
    "k<x, y | x*x, y*x>",
    "k<x, y | x*y - y*x - 1>",
    "k<x | >",
    "k<a, b, c | 2*a*b + 1/3*c, -a>",
])
def test_round_trip(text):
    p = parse_presentation(text)
    assert parse_presentation(p.format()) == p


def test_parse_implicit_products_and_comments():
    p = parse_presentation("# comment\nk<x, y | 3 x y - y x>")
    assert p.relations[0] == NcPoly({(1, 2): 3, (2, 1): -1})


def test_parse_errors_carry_position():
    with pytest.raises(PresentationSyntaxError) as e:
        parse_presentation("k<x | x +>")
    assert e.value.line == 1 and e.value.column == 10
    with pytest.raises(UnknownGenerator):
        parse_presentation("k<x | z>")
    with pytest.raises(EmptyRelation):
        parse_presentation("k<x | x - x>")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("k<x, x | x>")


def test_presentation_over_gf():
    p = parse_presentation("k<x | 7*x + 1>", GF(7))
    assert p.relations[0] == NcPoly({(): 1}, GF(7))
    with pytest.raises(FieldMismatch):
        Presentation(("x",), (NcPoly({(1,): 1}),), GF(5))


def test_construction_size():
    assert construction_size(parse_presentation("k<x, y | x*x, y*x>")) == 3
    assert construction_size(parse_presentation("k<x | >")) == 2
    assert construction_size(parse_presentation("k<x | x + 1>")) == 2
    assert construction_size(parse_presentation("k<x | x*x*x*x>")) == 5


def test_group_algebra_z2():
    p = group_algebra_presentation(1, [[1, 1]])
    assert p.generator_names == ("x", "xbar")
    assert [r.format(p.generator_names) for r in p.relations] == [
        "x*xbar - 1", "xbar*x - 1", "x*x - 1"]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3).flatmap(lambda c: st.tuples(
    st.just(c),
    st.lists(st.lists(st.sampled_from([i for i in range(-c, c + 1) if i]), min_size=1, max_size=4),
             max_size=3))))
def test_group_algebra_counts(data):
    c, relators = data
    relators = [r for r in relators if all(u != -v for u, v in zip(r, r[1:]))]
    p = group_algebra_presentation(c, relators)
    assert p.a == 2 * c
    assert p.b == 2 * c + len(relators)


def test_group_algebra_rejects_unreduced():
    with pytest.raises(ValueError):
        group_algebra_presentation(1, [[1, -1]])
    with pytest.raises(IndexError):
        group_algebra_presentation(1, [[2]])


def test_mod_coefficients_format():
    p = NcPoly({(1,): Mod(3, 5)}, GF(5))
    assert p.format(["x"]) == "3*x"
    assert NcPoly({(): Fraction(-1, 2), (1,): 1}).format(["x"]) == "x - 1/2"
