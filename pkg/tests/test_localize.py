import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import quotient_dims_by_linear_algebra
from quiverloc.freealg import NcPoly, Presentation, parse_presentation
from quiverloc.localize import (MatrixOverS, build_construction, generation_check,
                                image_algebra_dims, builtin_fixture, phi_image, phi_kernel,
                                sigma_invertibility_check,
                                verify_construction, verify_fixture)
from quiverloc.quiver import global_dimension, simple_resolution
from quiverloc.rewrite import DegreeOutOfRange, complete_truncated


def check_invariants(c):
    p = c.presentation
    assert len(c.relations_T) == (c.n - 2) * p.a
    assert len(c.relations_Yprime) == p.b
    for r in c.relations:
        assert (r.tail, r.head) == (1, c.n)
    assert c.sigma == tuple(f"e{m}" for m in range(1, c.n))
    assert len(c.quiver.arrows) == (c.n - 1) * (p.a + 1)


def test_build_x2_yx(x2_yx):
    c = build_construction(x2_yx)
    check_invariants(c)
    assert c.n == 3 and len(c.quiver.arrows) == 6
    assert len(c.relations_T) == 2 and len(c.relations_Yprime) == 2
    # x^2 becomes a_{11} a_{21}; e_{3,3} is the empty path
    assert c.relations_Yprime[0].format(c.quiver) == "a1_1*a2_1"
    assert c.relations_Yprime[1].format(c.quiver) == "a1_2*a2_1"
    assert c.relations_T[0].format(c.quiver) == "-e1*a2_1 + a1_1*e2"


def test_build_free():
    for a in (1, 2, 3):
        names = ", ".join("xyz"[:a])
        c = build_construction(parse_presentation(f"k<{names} | >"))
        check_invariants(c)
        assert c.n == 2
        assert len(c.quiver.arrows) == a + 1
        assert c.relations == ()


def test_build_weyl_constant_term(weyl):
    c = build_construction(weyl)
    check_invariants(c)
    assert c.n == 3 and len(c.relations_T) == 2 and len(c.relations_Yprime) == 1
    y = c.relations_Yprime[0]
    assert c.e_path(1, 3) in y.terms  # the constant 1 contributes e_{1,3}
    assert y.terms[c.e_path(1, 3)] == -1


def test_phi_examples(x2_yx):
    c = build_construction(x2_yx)
    rs = c.rewrite_system()
    for t in c.relations_T:
        assert phi_image(c, t, rs).is_zero()
    for y in c.relations_Yprime:
        assert phi_image(c, y, rs).is_zero()
    assert phi_image(c, c.e_path(1, 3), rs) == MatrixOverS.unit(3, 1, 3, rs)
    assert phi_image(c, "a1_2", rs) == MatrixOverS.unit(3, 1, 2, rs, NcPoly.monomial((2,)))


@pytest.mark.parametrize("text", ["k<x, y | x*x, y*x>", "k<x, y | x*y - y*x - 1>",
                                  "k<x | x*x>", "k<x, y | >", "k<x | x*x*x>"])
def test_phi_is_a_unital_homomorphism(text):
    c = build_construction(parse_presentation(text))
    rs = c.rewrite_system()
    A = c.algebra
    elems = [A.element(p) for _, p in A.basis_elements()]
    assert phi_image(c, A.one(), rs) == MatrixOverS.identity(c.n, rs)
    for v in c.quiver.vertices:
        assert phi_image(c, A.idempotent(v), rs) == MatrixOverS.unit(c.n, v, v, rs)
    for u, v in itertools.product(elems, repeat=2):
        assert phi_image(c, u * v, rs) == phi_image(c, u, rs) * phi_image(c, v, rs)


@pytest.mark.parametrize("text, total, dim_a", [
    ("k<x, y | x*x, y*x>", 14, 14),  # 3*1 + 2*3 + 1*5
    ("k<x | >", 4, 4),  # 2*1 + 1*2
    ("k<x | x*x>", 9, 9),  # 3*1 + 2*2 + 1*2
])
def test_image_algebra_dims(text, total, dim_a):
    c = build_construction(parse_presentation(text))
    dims = image_algebra_dims(c)
    assert dims.formula_total == total
    assert dims.rank_total == total
    assert dims.algebra_dim == dim_a
    assert dims.kernel_dim == 0
    assert dims.certified


def test_filtration_oracle_for_image_dims(x2_yx):
    per_degree = quotient_dims_by_linear_algebra(x2_yx, 2)
    cumulative = list(itertools.accumulate(per_degree))
    assert cumulative == [1, 3, 5]
    assert sum((3 - i) * cumulative[i] for i in range(3)) == 14


@pytest.mark.parametrize("text", ["k<x, y | x*x, y>", "k<x, y | x*x*x, y*x>", "k<x, y | y*y*y, x + y>"])
def test_short_relation_gives_kernel(text):
    # a relation shorter than n - 1 leaves nonzero elements of A with image 0
    c = build_construction(parse_presentation(text))
    p = c.presentation
    assert min(r.degree for r in p.relations) < c.n - 1
    rs = c.rewrite_system()
    dims = image_algebra_dims(c, rs)
    ker = phi_kernel(c, rs)
    assert len(ker) == dims.kernel_dim > 0
    assert dims.rank_total + dims.kernel_dim == c.algebra.dimension
    for k in ker:
        assert k and phi_image(c, k, rs).is_zero()


def test_sigma_invertibility(x2_yx):
    c = build_construction(x2_yx)
    chk = sigma_invertibility_check(c)
    assert chk.passed
    assert len(chk.details["arrows"]) == 2
    assert chk.details["inverse_of_e_1n_is_unit_n1"]
    free = build_construction(parse_presentation("k<x | >"))
    assert len(sigma_invertibility_check(free).details["arrows"]) == 1


def test_generation_x2():
    c = build_construction(parse_presentation("k<x | x*x>"))
    chk = generation_check(c)
    assert chk.passed and chk.certified
    assert [d["value"] for d in chk.details["copies"]] == ["x", "x"]


def test_generation_free_fills_entries():
    c = build_construction(parse_presentation("k<x, y | >"))
    chk = generation_check(c, c.rewrite_system(3))
    assert chk.passed
    # degree <= 3 slab of k<x, y> has 1 + 2 + 4 + 8 = 15 words
    assert set(chk.details["entry_span_dims"].values()) == {15}


def test_generation_weyl(weyl):
    c = build_construction(weyl)
    chk = generation_check(c)
    assert chk.passed
    assert chk.details["relations_at_corner"] == [{"relation": 1, "verdict": "Zero(certified)"}]


def test_verify_construction_all_pass(x2_yx):
    checks = verify_construction(build_construction(x2_yx))
    assert all(ch.passed and ch.certified for ch in checks)


def test_degree_out_of_range_is_raised():
    c = build_construction(parse_presentation("k<x | x*x*x>"))
    rs = complete_truncated(c.presentation, 3)
    with pytest.raises(DegreeOutOfRange):
        MatrixOverS.unit(c.n, 1, 1, rs, NcPoly.monomial((1,) * 4))


def test_weyl4_fixture():
    fx = builtin_fixture("weyl4")
    checks = verify_fixture(fx, 6)
    assert all(ch.passed and ch.certified for ch in checks)
    kill = [ch for ch in checks if ch.name.startswith("relation_kill")]
    assert [ch.details["image_before_reduction"] for ch in kill] == ["0", "x*y - y*x - 1"]
    assert [ch.details["entry"] for ch in kill] == [[1, 4], [1, 4]]


def test_subtree4_fixture():
    fx = builtin_fixture("subtree4")
    checks = verify_fixture(fx)
    assert all(ch.passed and ch.certified for ch in checks)
    kill = {ch.details["relation"]: ch.details for ch in checks if ch.name.startswith("relation_kill")}
    assert kill["y2*x3"]["entry"] == [2, 4]
    assert kill["y2*x3"]["image_before_reduction"] == "y*x"


def test_unknown_fixture():
    with pytest.raises(KeyError):
        builtin_fixture("nope")


# -- global dimension at most two -------------------------------------------


def random_presentation(rng, max_a=3, max_b=3, max_deg=4):
    a = rng.randint(1, max_a)
    rels = []
    for _ in range(rng.randint(0, max_b)):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            L = rng.randint(0, max_deg)
            terms[tuple(rng.randint(1, a) for _ in range(L))] = rng.choice([-2, -1, 1, 3])
        p = NcPoly(terms)
        if p:
            rels.append(p)
    return Presentation(tuple("xyz"[:a]), tuple(rels))


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10**6))
def test_global_dimension_at_most_two(seed):
    rng = random.Random(seed)
    c = build_construction(random_presentation(rng, 2, 2, 3))
    A = c.algebra
    assert global_dimension(A) <= 2
    assert simple_resolution(A, c.n)[1] == 0
    for m in range(2, c.n):
        assert simple_resolution(A, m)[1] == 1
