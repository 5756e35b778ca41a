import json
import random

import pytest

from quiverloc.freealg import NcPoly, group_algebra_presentation, parse_presentation
from quiverloc.localize import build_construction, phi_image
from quiverloc.malcolmson import (HomBlock, NotInSigmaClosure, Triple, add, check_sigma_ut,
                                  corner_triple, embed, eq, generator_triple, mul, neg,
                                  random_triple, triple_from_json, triple_to_json, value,
                                  word_triple, zero_triple)
from quiverloc.rewrite import DegreeOutOfRange, normal_form

PRESENTATIONS = {
    "free": "k<x, y | >",
    "x2_yx": "k<x, y | x*x, y*x>",
    "weyl": "k<x, y | x*y - y*x - 1>",
}


def setup(name, degree=8):
    c = build_construction(parse_presentation(PRESENTATIONS[name]))
    return c, c.rewrite_system(degree)


def fmt(c, p):
    return p.format(c.presentation.generator_names)


def test_embed_identity_value():
    c, rs = setup("x2_yx")
    r = c.algebra.idempotent(1).scale(5)
    t = embed(c, r)
    assert value(t, c, rs) == NcPoly.constant(5)
    assert value(t, c, rs) == phi_image(c, r, rs).entry(1, 1)
    with pytest.raises(ValueError):
        embed(c, c.algebra.idempotent(2))


@pytest.mark.parametrize("name", list(PRESENTATIONS))
def test_generator_copies_agree(name):
    c, rs = setup(name)
    for i in range(1, c.presentation.a + 1):
        vals = {fmt(c, value(generator_triple(c, m, i), c, rs)) for m in range(1, c.n)}
        assert vals == {c.presentation.generator_names[i - 1]}
    if c.n > 2:
        v = eq(generator_triple(c, 1, 1), generator_triple(c, 2, 1), c, rs)
        assert str(v) == "Equal(certified)"


def test_x_vs_y_free():
    c, rs = setup("free")
    assert str(eq(generator_triple(c, 1, 1), generator_triple(c, 1, 2), c, rs)) == "NotEqual(certified)"


def test_products():
    c, rs = setup("x2_yx")
    x = generator_triple(c, 1, 1)
    assert value(mul(x, x), c, rs).is_zero()
    c, rs = setup("weyl")
    x, y = generator_triple(c, 1, 1), generator_triple(c, 2, 2)
    assert fmt(c, value(mul(x, y), c, rs)) == "y*x + 1"
    assert fmt(c, value(mul(y, x), c, rs)) == "y*x"


def test_sums():
    c, rs = setup("x2_yx")
    t = generator_triple(c, 1, 2)
    assert value(add(t, zero_triple(c)), c, rs) == value(t, c, rs)
    two = add(generator_triple(c, 1, 1), generator_triple(c, 2, 1))
    assert fmt(c, value(two, c, rs)) == "2*x"
    assert value(add(t, neg(t)), c, rs).is_zero()
    A = c.algebra
    r1, r2 = A.idempotent(1).scale(2), A.idempotent(1).scale(-7)
    assert value(add(embed(c, r1), embed(c, r2)), c, rs) == phi_image(c, r1 + r2, rs).entry(1, 1)
    assert value(mul(embed(c, r1), embed(c, r2)), c, rs) == phi_image(c, r1 * r2, rs).entry(1, 1)


def test_group_word_z2():
    p = group_algebra_presentation(1, [[1, 1]])
    c = build_construction(p)
    rs = c.rewrite_system()
    assert rs.certified
    assert value(word_triple(c, [1, 1]), c, rs) == NcPoly.constant(1)
    # x * xbar = 1 as well, via different copies
    assert value(word_triple(c, [1, 2], [2, 1]), c, rs) == NcPoly.constant(1)


def test_corner_triple_matches_phi():
    c, rs = setup("weyl")
    A = c.algebra
    for t in c.quiver.vertices:
        for key, path in A.basis_elements():
            if key[0] == 1 and key[1] == t:
                r = A.element(path)
                assert value(corner_triple(c, r, t), c, rs) == phi_image(c, r, rs).entry(1, t)


def is_sigma_ut(c, s):
    try:
        check_sigma_ut(c, s)
        return True
    except NotInSigmaClosure:
        return False


def test_not_in_sigma_closure():
    c, rs = setup("x2_yx")
    A = c.algebra
    x = generator_triple(c, 1, 1)
    bad = HomBlock.build(x.s.domain, x.s.codomain, {(0, 0): A.path_element(["a2_1"])})
    with pytest.raises(NotInSigmaClosure):
        value(Triple(x.a, bad, x.b), c, rs)
    lower = HomBlock.build((2, 2), (2, 2), {(0, 0): A.idempotent(2), (1, 1): A.idempotent(2),
                                            (1, 0): A.idempotent(2)})
    assert not is_sigma_ut(c, lower)


def test_block_shape_checks():
    c, _ = setup("x2_yx")
    A = c.algebra
    with pytest.raises(ValueError):
        HomBlock.build((2,), (1,), {(0, 0): A.path_element(["e1", "e2"])})


@pytest.mark.parametrize("name", list(PRESENTATIONS))
def test_homomorphism_on_random_triples(name):
    c, rs = setup(name, degree=10)
    rng = random.Random(hash(name) % 1000)
    done = 0
    attempts = 0
    while done < 100:
        attempts += 1
        assert attempts < 400
        t1, t2 = random_triple(c, rng, 1), random_triple(c, rng, 1)
        try:
            v1, v2 = value(t1, c, rs), value(t2, c, rs)
            s, p = add(t1, t2), mul(t1, t2)
            vs, vp = value(s, c, rs), value(p, c, rs)
        except DegreeOutOfRange:
            continue
        assert vs == normal_form(rs, v1 + v2)
        assert vp == normal_form(rs, v1 * v2)
        assert is_sigma_ut(c, s.s) and is_sigma_ut(c, p.s)
        done += 1


def test_eq_equivalence_relation():
    c, rs = setup("x2_yx")
    rng = random.Random(3)
    ts = [random_triple(c, rng, 1) for _ in range(8)]
    ts += [generator_triple(c, 1, 1), generator_triple(c, 2, 1)]
    V = {}
    for i, a in enumerate(ts):
        assert bool(eq(a, a, c, rs))
        for j, b in enumerate(ts):
            V[i, j] = bool(eq(a, b, c, rs))
            assert V[i, j] == bool(eq(b, a, c, rs))
    for i in range(len(ts)):
        for j in range(len(ts)):
            for k in range(len(ts)):
                if V[i, j] and V[j, k]:
                    assert V[i, k]


def test_json_round_trip():
    c, rs = setup("weyl")
    t = mul(generator_triple(c, 1, 1), generator_triple(c, 2, 2))
    data = json.loads(json.dumps(triple_to_json(c, t)))
    t2 = triple_from_json(c, data)
    assert value(t2, c, rs) == value(t, c, rs)
    assert triple_to_json(c, t2) == triple_to_json(c, t)
