"""Fractions ``a s^-1 b`` over a quiver algebra with inverted arrows.

Maps between sums of indecomposable projectives ``P_v = f_v A`` are left
multiplications, so a block entry from ``P_t`` to ``P_s`` is an element of
``f_s A f_t``.  A triple consists of

    a : P_1 -> Q,   s : P -> Q (upper triangular, σ or identity diagonal),
    b : P -> P_1

and denotes the composite ``b ∘ s^-1 ∘ a`` of right-module maps, an
endomorphism of ``P_1``.  Its value in ``S`` is the (1, 1) corner of the
matrix product ``φ(b) φ(s)^-1 φ(a)`` in ``M_n(S)``.

Whether two triples are equal is undecidable in general, so equality is
decided semantically through the rewrite system, with its certificate.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .freealg import NcPoly
from .localize import Construction
from .quiver import AlgElement, path_poly_from_json
from .rewrite import RewriteSystem, Verdict, normal_form


class NotInSigmaClosure(ValueError):
    pass


ProjSum = tuple  # vertex indices, P_{i_1} ⊕ ... ⊕ P_{i_r}


@dataclass(frozen=True, eq=False)
class HomBlock:
    domain: ProjSum
    codomain: ProjSum
    entries: tuple  # rows indexed by codomain, columns by domain; AlgElement or None

    def __post_init__(self):
        if len(self.entries) != len(self.codomain) or any(len(r) != len(self.domain) for r in self.entries):
            raise ValueError("entry grid does not match domain/codomain")
        for u, row in enumerate(self.entries):
            for v, x in enumerate(row):
                if x is not None and not x.lies_in(self.codomain[u], self.domain[v]):
                    raise ValueError(
                        f"entry ({u}, {v}) is not a map P_{self.domain[v]} -> P_{self.codomain[u]}")

    @classmethod
    def build(cls, domain, codomain, entries: Mapping) -> HomBlock:
        grid = [[entries.get((u, v)) or None for v in range(len(domain))]
                for u in range(len(codomain))]
        return cls(tuple(domain), tuple(codomain), tuple(tuple(r) for r in grid))

    def entry(self, u, v):
        return self.entries[u][v]

    def nonzero(self):
        for u, row in enumerate(self.entries):
            for v, x in enumerate(row):
                if x:
                    yield u, v, x

    def __matmul__(self, other: HomBlock) -> HomBlock:
        """``self ∘ other``."""
        if other.codomain != self.domain:
            raise ValueError("blocks do not compose")
        out: dict = {}
        for u, w, x in self.nonzero():
            for w2, v, y in other.nonzero():
                if w2 == w:
                    z = x * y
                    out[u, v] = out[u, v] + z if (u, v) in out else z
        return HomBlock.build(other.domain, self.codomain, out)


def direct_sum(blocks: Sequence[HomBlock]) -> HomBlock:
    """Block-diagonal sum."""
    dom, cod, out = (), (), {}
    for b in blocks:
        for u, v, x in b.nonzero():
            out[len(cod) + u, len(dom) + v] = x
        dom += b.domain
        cod += b.codomain
    return HomBlock.build(dom, cod, out)


def _sigma_names(c: Construction) -> set:
    return {c.quiver.arrow_index(nm) for nm in c.sigma}


def check_sigma_ut(c: Construction, s: HomBlock) -> None:
    """Raise :class:`NotInSigmaClosure` unless ``s`` is square upper triangular
    with every diagonal entry an arrow of σ or an identity."""
    if len(s.domain) != len(s.codomain):
        raise NotInSigmaClosure("s is not square")
    sig = _sigma_names(c)
    A = c.algebra
    for u, v, x in s.nonzero():
        if u > v:
            raise NotInSigmaClosure(f"nonzero entry below the diagonal at ({u}, {v})")
    for u in range(len(s.domain)):
        x = s.entry(u, u)
        ok = False
        if x is not None and len(x.coeffs) == 1:
            (key, coeff), = x.coeffs.items()
            path = A.basis[key[0], key[1]][key[2]]
            # the basis element must be the path itself, not a residue
            if coeff == 1 and A.reduce_path(path) == {key[2]: 1}:
                ok = (not path.arrows) or (len(path.arrows) == 1 and path.arrows[0] in sig)
        if not ok:
            raise NotInSigmaClosure(f"diagonal entry {u} is neither in σ nor an identity")


@dataclass(frozen=True, eq=False)
class Triple:
    a: HomBlock
    s: HomBlock
    b: HomBlock

    def __post_init__(self):
        if self.a.domain != (1,) or self.b.codomain != (1,):
            raise ValueError("a must start at P_1 and b must end at P_1")
        if self.a.codomain != self.s.codomain or self.b.domain != self.s.domain:
            raise ValueError("a, s, b do not compose")


# ---------------------------------------------------------------------------
# evaluation


def _phi_grid(c, blk: HomBlock, rs: RewriteSystem):
    model = c.model(rs)
    grid = [[None] * len(blk.domain) for _ in blk.codomain]
    A = c.algebra
    for u, v, x in blk.nonzero():
        acc = NcPoly.zero(rs.field)
        for (p, q, i), coeff in x.coeffs.items():
            img = model.path(A.basis[p, q][i])
            acc = acc + img.entry(p, q).scale(coeff)
        grid[u][v] = acc
    return grid


def _nf_mul(rs, p, q):
    return normal_form(rs, p * q)


def value(t: Triple, c: Construction, rs: RewriteSystem) -> NcPoly:
    """Corner value of ``φ(b) φ(s)^-1 φ(a)`` in S, in normal form."""
    check_sigma_ut(c, t.s)
    F = rs.field
    zero = NcPoly.zero(F)
    S = _phi_grid(c, t.s, rs)
    a = [row[0] or zero for row in _phi_grid(c, t.a, rs)]
    b = [x or zero for x in _phi_grid(c, t.b, rs)[0]]
    r = len(S)
    # φ(s) is unipotent upper triangular: solve φ(s) z = φ(a) from the bottom
    z = [zero] * r
    for u in range(r - 1, -1, -1):
        acc = a[u]
        for v in range(u + 1, r):
            if S[u][v] and z[v]:
                acc = acc - _nf_mul(rs, S[u][v], z[v])
        z[u] = normal_form(rs, acc)
    out = zero
    for v in range(r):
        if b[v] and z[v]:
            out = out + _nf_mul(rs, b[v], z[v])
    return normal_form(rs, out)


def eq(t1: Triple, t2: Triple, c: Construction, rs: RewriteSystem) -> Verdict:
    diff = value(t1, c, rs) - value(t2, c, rs)
    return Verdict("Equal" if normal_form(rs, diff).is_zero() else "NotEqual", rs.certified)


# ---------------------------------------------------------------------------
# calculus


def add(t1: Triple, t2: Triple) -> Triple:
    s = direct_sum([t1.s, t2.s])
    a = HomBlock.build((1,), s.codomain,
                       {**{(u, 0): x for u, _, x in t1.a.nonzero()},
                        **{(len(t1.a.codomain) + u, 0): x for u, _, x in t2.a.nonzero()}})
    b = HomBlock.build(s.domain, (1,),
                       {**{(0, v): x for _, v, x in t1.b.nonzero()},
                        **{(0, len(t1.b.domain) + v): x for _, v, x in t2.b.nonzero()}})
    return Triple(a, s, b)


def mul(t1: Triple, t2: Triple) -> Triple:
    """``s = [[s1, -a1 b2], [0, s2]]``, ``a = [0; a2]``, ``b = [b1, 0]``.

    Then ``b s^-1 a = b1 s1^-1 (a1 b2) s2^-1 a2``.
    """
    link = t1.a @ t2.b  # P2 -> Q1
    s = direct_sum([t1.s, t2.s])
    entries = {(u, v): x for u, v, x in s.nonzero()}
    off = len(t1.s.domain)
    for u, v, x in link.nonzero():
        entries[u, off + v] = -x
    s = HomBlock.build(s.domain, s.codomain, entries)
    a = HomBlock.build((1,), s.codomain,
                       {(len(t1.a.codomain) + u, 0): x for u, _, x in t2.a.nonzero()})
    b = HomBlock.build(s.domain, (1,), {(0, v): x for _, v, x in t1.b.nonzero()})
    return Triple(a, s, b)


def scale(t: Triple, k) -> Triple:
    b = HomBlock.build(t.b.domain, (1,), {(0, v): x.scale(k) for _, v, x in t.b.nonzero()})
    return Triple(t.a, t.s, b)


def neg(t: Triple) -> Triple:
    return scale(t, -1)


# ---------------------------------------------------------------------------
# constructors


def embed(c: Construction, r: AlgElement) -> Triple:
    """``r ∈ f_1 A f_1`` as the triple ``(r, id, f_1)``."""
    if not r.lies_in(1, 1):
        raise ValueError("embed needs an element of f_1 A f_1")
    A = c.algebra
    one = (1,)
    return Triple(HomBlock.build(one, one, {(0, 0): r}),
                  HomBlock.build(one, one, {(0, 0): A.idempotent(1)}),
                  HomBlock.build(one, one, {(0, 0): A.idempotent(1)}))


def corner_triple(c: Construction, r: AlgElement, t: int) -> Triple:
    """``r · e_{1,t}^-1`` for ``r ∈ f_1 A f_t``.

    ``e_{1,t}`` is not in σ itself, so it is replaced by the bidiagonal map
    ``P_t ⊕ .. ⊕ P_2 -> P_{t-1} ⊕ .. ⊕ P_1`` with the arrows ``e_m`` on the
    diagonal and ``-f`` above it; its inverse carries ``e_{1,t}^-1`` in the
    top right corner.
    """
    if not r.lies_in(1, t):
        raise ValueError(f"element is not in f_1 A f_{t}")
    A = c.algebra
    if t == 1:
        return embed(c, r)
    dom = tuple(range(t, 1, -1))
    cod = tuple(range(t - 1, 0, -1))
    entries = {}
    for u in range(t - 1):
        entries[u, u] = A.path_element([f"e{t - u - 1}"])
        if u + 1 < t - 1:
            entries[u, u + 1] = -A.idempotent(t - u - 1)
    s = HomBlock.build(dom, cod, entries)
    a = HomBlock.build((1,), cod, {(t - 2, 0): A.idempotent(1)})
    b = HomBlock.build(dom, (1,), {(0, 0): r})
    return Triple(a, s, b)


def generator_triple(c: Construction, m: int, i: int) -> Triple:
    """``x_{m,i} = e_{1,m} a_{m,i} e_{m+1,n} e_{n,1}``."""
    path = (c.e_path(1, m) * c.a_arrow(m, i)) * c.e_path(m + 1, c.n)
    return corner_triple(c, c.algebra.element(path), c.n)


def word_triple(c: Construction, word: Sequence[int], copies: Sequence[int] | None = None) -> Triple:
    """Product of generator triples; ``copies[j]`` picks which ``m`` to use."""
    copies = copies or [1] * len(word)
    if not word:
        return embed(c, c.algebra.idempotent(1))
    t = generator_triple(c, copies[0], word[0])
    for m, i in zip(copies[1:], word[1:]):
        t = mul(t, generator_triple(c, m, i))
    return t


def zero_triple(c: Construction) -> Triple:
    one = (1,)
    A = c.algebra
    return Triple(HomBlock.build(one, one, {(0, 0): A.idempotent(1)}),
                  HomBlock.build(one, one, {(0, 0): A.idempotent(1)}),
                  HomBlock.build(one, one, {}))


def random_triple(c: Construction, rng: random.Random, depth: int = 2, coeff_range: int = 2) -> Triple:
    """A random expression built from corner triples with ``add`` and ``mul``."""
    if depth == 0 or rng.random() < 0.3:
        A = c.algebra
        t = rng.randint(1, c.n)
        size = A.dim_pair(1, t)
        coeffs = {(1, t, i): rng.randint(-coeff_range, coeff_range) for i in range(size)}
        return corner_triple(c, AlgElement(A, coeffs), t)
    left = random_triple(c, rng, depth - 1, coeff_range)
    right = random_triple(c, rng, depth - 1, coeff_range)
    return add(left, right) if rng.random() < 0.5 else mul(left, right)


# ---------------------------------------------------------------------------
# JSON


def _elem_to_json(c: Construction, x: AlgElement):
    A = c.algebra
    out = []
    for (v, w, i), coeff in sorted(x.coeffs.items()):
        p = A.basis[v, w][i]
        d = {"coeff": str(coeff), "path": c.quiver.path_names(p)}
        if not p.arrows:
            d["vertex"] = p.start
        out.append(d)
    return out


def block_to_json(c: Construction, blk: HomBlock) -> dict:
    return {
        "domain": list(blk.domain),
        "codomain": list(blk.codomain),
        "entries": [[_elem_to_json(c, x) if x else [] for x in row] for row in blk.entries],
    }


def block_from_json(c: Construction, d: Mapping) -> HomBlock:
    dom, cod = tuple(d["domain"]), tuple(d["codomain"])
    rows = d["entries"]
    entries = {}
    for u, row in enumerate(rows):
        for v, terms in enumerate(row):
            if terms:
                poly = path_poly_from_json(c.quiver, terms, c.field)
                entries[u, v] = c.algebra.element(poly)
    if len(rows) != len(cod) or any(len(r) != len(dom) for r in rows):
        raise ValueError("entry grid does not match domain/codomain")
    return HomBlock.build(dom, cod, entries)


def triple_to_json(c: Construction, t: Triple) -> dict:
    return {k: block_to_json(c, getattr(t, k)) for k in ("a", "s", "b")}


def triple_from_json(c: Construction, d: Mapping) -> Triple:
    return Triple(*(block_from_json(c, d[k]) for k in ("a", "s", "b")))
