"""Quivers, path algebras with relations, projective modules and resolutions.

Conventions: vertices are 1..n, arrows are indexed 0..N-1 in the order
given.  A representation assigns a space to each vertex and, to an arrow
``t -> h``, a matrix of shape ``dim(h) x dim(t)``.  The projective ``P_m``
is the representation ``w -> (m, w)`` (residues of paths from ``m``), with
arrows acting by right concatenation; a path from ``s`` to ``t`` induces a
map ``P_t -> P_s`` by left concatenation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactlin import (QQ, DenseMatrix, Echelon, Field, ShapeError,
                       homology_dim, nullspace, rank)


class NotAcyclic(ValueError):
    pass


class RelationNotHomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: int
    head: int


@dataclass(frozen=True)
class QPath:
    """A path: start vertex, end vertex and arrow indices (empty = idempotent)."""

    start: int
    end: int
    arrows: tuple = ()

    def __len__(self):
        return len(self.arrows)

    def __mul__(self, other: QPath) -> QPath | None:
        """Concatenation ``self`` then ``other``; None when they do not compose."""
        if self.end != other.start:
            return None
        return QPath(self.start, other.end, self.arrows + other.arrows)


def path_key(p: QPath):
    # same shape as the word order: degree first, earlier arrows are larger
    return (len(p.arrows), tuple(-i for i in p.arrows))


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple

    def __post_init__(self):
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        names = [a.name for a in arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be distinct")
        for a in arrows:
            if not (1 <= a.tail <= self.vertex_count and 1 <= a.head <= self.vertex_count):
                raise ValueError(f"arrow {a.name} has an endpoint outside 1..{self.vertex_count}")

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(f"no arrow named {name!r}")

    def out_arrows(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.tail == v]

    def in_arrows(self, v: int) -> list[int]:
        return [i for i, a in enumerate(self.arrows) if a.head == v]

    def idempotent(self, v: int) -> QPath:
        return QPath(v, v, ())

    def path(self, names: Sequence[str], start: int | None = None) -> QPath:
        """Path through the named arrows (``start`` needed for the empty path)."""
        if not names:
            if start is None:
                raise ValueError("an empty path needs its vertex")
            return QPath(start, start, ())
        idx = [self.arrow_index(nm) for nm in names]
        for i, j in zip(idx, idx[1:]):
            if self.arrows[i].head != self.arrows[j].tail:
                raise ValueError(f"arrows {self.arrows[i].name}, {self.arrows[j].name} do not compose")
        if start is not None and start != self.arrows[idx[0]].tail:
            raise ValueError("start vertex does not match the first arrow")
        return QPath(self.arrows[idx[0]].tail, self.arrows[idx[-1]].head, tuple(idx))

    def path_names(self, p: QPath) -> list[str]:
        return [self.arrows[i].name for i in p.arrows]

    @cached_property
    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.head] += 1
        ready = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for i in self.out_arrows(v):
                h = self.arrows[i].head
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        return seen == self.vertex_count


def enumerate_paths(q: Quiver, v: int, w: int, max_len: int | None = None) -> list[QPath]:
    """All paths from ``v`` to ``w`` of length <= max_len, in ascending path order."""
    if max_len is None and not q.is_acyclic:
        raise NotAcyclic("unbounded path enumeration on a quiver with cycles")
    out = []
    frontier = [QPath(v, v, ())]
    length = 0
    while frontier:
        out.extend(p for p in frontier if p.end == w)
        if max_len is not None and length >= max_len:
            break
        frontier = [QPath(p.start, q.arrows[i].head, p.arrows + (i,))
                    for p in frontier for i in q.out_arrows(p.end)]
        length += 1
    return sorted(out, key=path_key)


class PathPoly:
    """A linear combination of paths sharing one tail and one head."""

    __slots__ = ("terms", "field")

    def __init__(self, terms: Mapping[QPath, object] | None = None, field: Field = QQ):
        self.field = field
        clean: dict = {}
        for p, c in (terms or {}).items():
            c = field(c)
            v = clean.get(p, field.zero) + c
            if v:
                clean[p] = v
            else:
                clean.pop(p, None)
        self.terms = clean

    @classmethod
    def of(cls, path: QPath, coeff=1, field: Field = QQ) -> PathPoly:
        return cls({path: coeff}, field)

    def __bool__(self):
        return bool(self.terms)

    @property
    def tail(self) -> int:
        ends = {p.start for p in self.terms}
        if len(ends) != 1:
            raise RelationNotHomogeneous(f"tails {sorted(ends)}")
        return ends.pop()

    @property
    def head(self) -> int:
        ends = {p.end for p in self.terms}
        if len(ends) != 1:
            raise RelationNotHomogeneous(f"heads {sorted(ends)}")
        return ends.pop()

    def __add__(self, other: PathPoly) -> PathPoly:
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = terms.get(p, self.field.zero) + c
        return PathPoly(terms, self.field)

    def __neg__(self):
        return PathPoly({p: -c for p, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return PathPoly({p: v * c for p, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, PathPoly):
            return self.scale(other)
        out: dict = {}
        for p1, c1 in self.terms.items():
            for p2, c2 in other.terms.items():
                p = p1 * p2
                if p is not None:
                    out[p] = out.get(p, self.field.zero) + c1 * c2
        return PathPoly(out, self.field)

    def __eq__(self, other):
        return isinstance(other, PathPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, q: Quiver) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p in sorted(self.terms, key=path_key, reverse=True):
            c = self.terms[p]
            neg = self.field.characteristic == 0 and c < 0
            if neg:
                c = -c
            mono = "*".join(q.path_names(p)) or f"f{p.start}"
            body = mono if c == 1 else f"{c}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)


# ---------------------------------------------------------------------------


class AlgElement:
    """An element of a :class:`PathAlgebra`, keyed by ``(v, w, basis index)``."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: PathAlgebra, coeffs: Mapping | None = None):
        self.algebra = algebra
        self.coeffs = {k: c for k, c in (coeffs or {}).items() if c}

    def __add__(self, other: AlgElement) -> AlgElement:
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return AlgElement(self.algebra, out)

    def __neg__(self):
        return AlgElement(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> AlgElement:
        c = self.algebra.field(c)
        return AlgElement(self.algebra, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return self.algebra.mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, AlgElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def pairs(self) -> set:
        return {(v, w) for v, w, _ in self.coeffs}

    def lies_in(self, v: int, w: int) -> bool:
        """True when ``f_v * self * f_w == self``."""
        return all(k[0] == v and k[1] == w for k in self.coeffs)

    def __repr__(self):
        A = self.algebra
        parts = [f"{c}*{'*'.join(A.quiver.path_names(A.basis[v, w][i])) or f'f{v}'}"
                 for (v, w, i), c in sorted(self.coeffs.items())]
        return "AlgElement(" + (" + ".join(parts) or "0") + ")"


class PathAlgebra:
    """The finite-dimensional quotient ``Λ(Q) / <R>`` of an acyclic quiver."""

    def __init__(self, quiver: Quiver, relations: Sequence[PathPoly], field: Field = QQ):
        if not quiver.is_acyclic:
            raise NotAcyclic("path algebras are only materialised for acyclic quivers")
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        for r in self.relations:
            if not r:
                raise ValueError("zero relation")
            r.tail, r.head  # raises RelationNotHomogeneous
        self.paths: dict = {}
        self.basis: dict = {}
        self._reduce: dict = {}
        self._mul_cache: dict = {}
        for v in quiver.vertices:
            for w in quiver.vertices:
                self._build_pair(v, w)

    def _build_pair(self, v, w):
        q, F = self.quiver, self.field
        paths = enumerate_paths(q, v, w)
        self.paths[v, w] = paths
        # columns ordered largest path first so pivots are leading paths
        order = list(reversed(paths))
        col = {p: j for j, p in enumerate(order)}
        ech = Echelon(F, len(order))
        for r in self.relations:
            t, h = r.tail, r.head
            for pre in enumerate_paths(q, v, t):
                for post in enumerate_paths(q, h, w):
                    row: dict = {}
                    for p, c in r.terms.items():
                        j = col[(pre * p) * post]
                        row[j] = row.get(j, F.zero) + c
                    row = {j: F.raw(c) for j, c in row.items() if c}
                    if row:
                        ech.add(row)
        rr = ech.rref_rows()
        basis = [p for p in paths if col[p] not in rr]
        pos = {p: i for i, p in enumerate(basis)}
        reduce = {}
        for p in paths:
            j = col[p]
            if j in rr:
                vec = {}
                for k, c in rr[j].items():
                    if k != j:
                        vec[pos[order[k]]] = F.wrap((-c) % F.characteristic) if F.characteristic else -c
                reduce[p] = vec
            else:
                reduce[p] = {pos[p]: F.one}
        self.basis[v, w] = basis
        self._reduce[v, w] = reduce

    # -- dimensions ---------------------------------------------------------

    def dim_pair(self, v: int, w: int) -> int:
        return len(self.basis[v, w])

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.basis.values())

    def pair_dims(self) -> dict:
        return {k: len(b) for k, b in self.basis.items() if b}

    def basis_elements(self):
        for (v, w), b in sorted(self.basis.items()):
            for i, p in enumerate(b):
                yield (v, w, i), p

    # -- elements -----------------------------------------------------------

    def reduce_path(self, p: QPath) -> dict:
        """Coordinates of the residue of ``p`` in the basis of ``(p.start, p.end)``."""
        return self._reduce[p.start, p.end][p]

    def element(self, poly: PathPoly | QPath) -> AlgElement:
        if isinstance(poly, QPath):
            poly = PathPoly.of(poly, 1, self.field)
        out: dict = {}
        for p, c in poly.terms.items():
            for i, v in self.reduce_path(p).items():
                k = (p.start, p.end, i)
                out[k] = out.get(k, self.field.zero) + c * v
        return AlgElement(self, out)

    def path_element(self, names: Sequence[str], start: int | None = None) -> AlgElement:
        return self.element(self.quiver.path(names, start))

    def idempotent(self, v: int) -> AlgElement:
        return self.element(self.quiver.idempotent(v))

    def one(self) -> AlgElement:
        out = AlgElement(self)
        for v in self.quiver.vertices:
            out = out + self.idempotent(v)
        return out

    def basis_product(self, k1, k2) -> dict:
        (u, v, i), (v2, w, j) = k1, k2
        if v != v2:
            return {}
        key = (k1, k2)
        hit = self._mul_cache.get(key)
        if hit is None:
            p = self.basis[u, v][i] * self.basis[v, w][j]
            hit = self.reduce_path(p)
            self._mul_cache[key] = hit
        return hit

    def mul(self, x: AlgElement, y: AlgElement) -> AlgElement:
        out: dict = {}
        for k1, c1 in x.coeffs.items():
            for k2, c2 in y.coeffs.items():
                if k1[1] != k2[0]:
                    continue
                for i, c in self.basis_product(k1, k2).items():
                    key = (k1[0], k2[1], i)
                    out[key] = out.get(key, self.field.zero) + c1 * c2 * c
        return AlgElement(self, out)


def quotient_algebra(q: Quiver, relations: Iterable[PathPoly], field: Field = QQ) -> PathAlgebra:
    return PathAlgebra(q, list(relations), field)


def algebra_mul(A: PathAlgebra, u: AlgElement, v: AlgElement) -> AlgElement:
    if u.algebra is not A or v.algebra is not A:
        raise ShapeError("elements belong to a different algebra")
    return A.mul(u, v)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class AlgModuleRep:
    algebra: PathAlgebra
    dims: tuple  # dims[v - 1]
    maps: tuple  # one DenseMatrix per arrow, dims[head] x dims[tail]

    def __post_init__(self):
        q = self.algebra.quiver
        for a, m in zip(q.arrows, self.maps):
            if (m.rows, m.cols) != (self.dims[a.head - 1], self.dims[a.tail - 1]):
                raise ShapeError(f"arrow {a.name}: {m.rows}x{m.cols} map between "
                                 f"dimensions {self.dims[a.tail - 1]} -> {self.dims[a.head - 1]}")

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    def dim(self, v: int) -> int:
        return self.dims[v - 1]

    def apply_path(self, p: QPath, vec: Sequence) -> tuple:
        for i in p.arrows:
            vec = _apply(self.maps[i], vec)
        return tuple(vec)

    def path_matrix(self, p: QPath) -> DenseMatrix:
        F = self.algebra.field
        m = DenseMatrix.identity(self.dim(p.start), F)
        for i in p.arrows:
            m = self.maps[i] @ m
        return m

    def satisfies_relations(self) -> bool:
        F = self.algebra.field
        for r in self.algebra.relations:
            items: dict = {}
            for p, c in r.terms.items():
                for ij, v in self.path_matrix(p).nonzero_items():
                    items[ij] = items.get(ij, F.zero) + c * v
            if any(items.values()):
                return False
        return True


def _apply(m: DenseMatrix, vec: Sequence) -> tuple:
    F = m.field
    zero = F.zero
    out = [zero] * m.rows
    nz = [(j, x) for j, x in enumerate(vec) if x]
    if not nz:
        return tuple(out)
    for i in range(m.rows):
        row = m.entries[i * m.cols:(i + 1) * m.cols]
        acc = zero
        for j, x in nz:
            e = row[j]
            if e:
                acc = acc + e * x
        out[i] = acc
    return tuple(out)


def projective_module(A: PathAlgebra, m: int) -> AlgModuleRep:
    """``P_m``: the residues of paths starting at ``m``."""
    q, F = A.quiver, A.field
    if m not in q.vertices:
        raise ValueError(f"vertex {m} not in 1..{q.vertex_count}")
    dims = tuple(A.dim_pair(m, w) for w in q.vertices)
    maps = []
    for idx, a in enumerate(q.arrows):
        arrow = QPath(a.tail, a.head, (idx,))
        items = {}
        for j, p in enumerate(A.basis[m, a.tail]):
            for i, c in A.reduce_path(p * arrow).items():
                items[i, j] = c
        maps.append(DenseMatrix.from_sparse(dims[a.head - 1], dims[a.tail - 1], items, F))
    return AlgModuleRep(A, dims, tuple(maps))


def simple_module(A: PathAlgebra, m: int) -> AlgModuleRep:
    q, F = A.quiver, A.field
    dims = tuple(1 if v == m else 0 for v in q.vertices)
    maps = tuple(DenseMatrix.zero(dims[a.head - 1], dims[a.tail - 1], F) for a in q.arrows)
    return AlgModuleRep(A, dims, maps)


def direct_sum_of_projectives(A: PathAlgebra, vertices: Sequence[int]) -> AlgModuleRep:
    q, F = A.quiver, A.field
    parts = [projective_module(A, v) for v in vertices]
    dims = tuple(sum(P.dims[i] for P in parts) for i in range(q.vertex_count))
    maps = []
    for idx, a in enumerate(q.arrows):
        items = {}
        ro = co = 0
        for P in parts:
            for (i, j), c in P.maps[idx].nonzero_items():
                items[ro + i, co + j] = c
            ro += P.dims[a.head - 1]
            co += P.dims[a.tail - 1]
        maps.append(DenseMatrix.from_sparse(dims[a.head - 1], dims[a.tail - 1], items, F))
    return AlgModuleRep(A, dims, tuple(maps))


def radical_generators(M: AlgModuleRep, redundant: bool = False) -> list[tuple[int, tuple]]:
    """Elements ``(vertex, vector)`` whose classes form a basis of the top of ``M``.

    With ``redundant=True`` one superfluous generator is added (an element of
    the radical when there is one, otherwise a repeat), which yields a
    non-minimal projective cover.
    """
    A = M.algebra
    q, F = A.quiver, A.field
    gens = []
    extra = None
    for v in q.vertices:
        d = M.dim(v)
        if d == 0:
            continue
        ech = Echelon(F, d)
        rad = []
        for i in q.in_arrows(v):
            m = M.maps[i]
            for j in range(m.cols):
                col = {r: F.raw(x) for r, x in enumerate(m.column(j)) if x}
                if col and ech.add(col):
                    rad.append(m.column(j))
        if rad and extra is None:
            extra = (v, tuple(rad[0]))
        for i in range(d):
            if ech.add({i: F.raw(F.one)}):
                vec = [F.zero] * d
                vec[i] = F.one
                gens.append((v, tuple(vec)))
    if redundant and gens:
        gens.append(extra if extra is not None else gens[0])
    return gens


@dataclass
class _CoverStep:
    vertices: list  # the projective summands P_v of the cover
    cover: AlgModuleRep
    eps: dict  # vertex -> DenseMatrix  cover(w) -> M(w)


def _cover(M: AlgModuleRep, gens) -> _CoverStep:
    A = M.algebra
    q, F = A.quiver, A.field
    verts = [v for v, _ in gens]
    P = direct_sum_of_projectives(A, verts)
    eps = {}
    for w in q.vertices:
        cols = []
        for v, g in gens:
            cache = {(): g}
            for p in A.basis[v, w]:
                cols.append(_walk(M, p, cache))
        eps[w] = (DenseMatrix.from_columns(cols, M.dim(w), F) if cols
                  else DenseMatrix.zero(M.dim(w), 0, F))
    return _CoverStep(verts, P, eps)


def _walk(M, p: QPath, cache):
    key = p.arrows
    if key in cache:
        return cache[key]
    prev = _walk(M, QPath(p.start, M.algebra.quiver.arrows[key[-1]].tail, key[:-1]), cache)
    out = _apply(M.maps[key[-1]], prev)
    cache[key] = out
    return out


def _kernel(P: AlgModuleRep, eps: dict) -> tuple[AlgModuleRep, dict]:
    """The subrepresentation ``ker eps`` and its inclusion matrices."""
    A = P.algebra
    q, F = A.quiver, A.field
    bases, frees, incl = {}, {}, {}
    for w in q.vertices:
        basis, free = nullspace(eps[w])
        bases[w], frees[w] = basis, free
        incl[w] = (DenseMatrix.from_columns(basis, P.dim(w), F) if basis
                   else DenseMatrix.zero(P.dim(w), 0, F))
    dims = tuple(len(bases[w]) for w in q.vertices)
    maps = []
    for idx, a in enumerate(q.arrows):
        cols = []
        for vec in bases[a.tail]:
            img = _apply(P.maps[idx], vec)
            cols.append(tuple(img[f] for f in frees[a.head]))
        maps.append(DenseMatrix.from_columns(cols, dims[a.head - 1], F) if cols
                    else DenseMatrix.zero(dims[a.head - 1], 0, F))
    return AlgModuleRep(A, dims, tuple(maps)), incl


@dataclass
class Resolution:
    """A projective resolution ``... -> T_1 -> T_0 -> M -> 0``.

    ``terms[i]`` lists the vertices ``v`` of the summands ``P_v`` of ``T_i``;
    ``augmentation[w]`` and ``boundaries[i][w]`` (``T_{i+1} -> T_i``) are the
    per-vertex matrices.
    """

    module: AlgModuleRep
    terms: list
    augmentation: dict
    boundaries: list

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term_dims(self, i: int, w: int) -> int:
        return self.augmentation[w].cols if i == 0 else self.boundaries[i - 1][w].cols

    def check_exact(self) -> bool:
        """Independent rank-based exactness check at every spot and vertex."""
        A = self.module.algebra
        for w in A.quiver.vertices:
            eps = self.augmentation[w]
            if rank(eps) != self.module.dim(w):
                return False
            chain = [eps] + [d[w] for d in self.boundaries]
            for d_out, d_in in zip(chain, chain[1:]):
                if homology_dim(d_in, d_out) != 0:
                    return False
            last = chain[-1]
            if homology_dim(DenseMatrix.zero(last.cols, 0, A.field), last) != 0:
                return False
        return True


def minimal_resolution(M: AlgModuleRep, max_length: int = 64) -> Resolution:
    step = _cover(M, radical_generators(M))
    terms = [step.vertices]
    aug = step.eps
    boundaries = []
    K, incl = _kernel(step.cover, step.eps)
    while K.dimension:
        if len(terms) > max_length:
            raise RuntimeError("resolution did not terminate")
        nxt = _cover(K, radical_generators(K))
        boundaries.append({w: incl[w] @ nxt.eps[w] for w in incl})
        terms.append(nxt.vertices)
        K, incl = _kernel(nxt.cover, nxt.eps)
    return Resolution(M, terms, aug, boundaries)


def simple_resolution(A: PathAlgebra, m: int) -> tuple[Resolution, int]:
    """Minimal projective resolution of the simple at ``m`` and its length."""
    res = minimal_resolution(simple_module(A, m))
    return res, res.length


def is_projective(M: AlgModuleRep) -> bool:
    A = M.algebra
    gens = radical_generators(M)
    return sum(A.dim_pair(v, w) for v, _ in gens for w in A.quiver.vertices) == M.dimension


def projective_dimension_by_shifting(M: AlgModuleRep, max_steps: int = 64) -> int:
    """pd via syzygies of deliberately non-minimal covers (Schanuel's lemma)."""
    steps = 0
    while not is_projective(M):
        if steps > max_steps:
            raise RuntimeError("dimension shifting did not terminate")
        step = _cover(M, radical_generators(M, redundant=True))
        M, _ = _kernel(step.cover, step.eps)
        steps += 1
    return steps


def global_dimension(A: PathAlgebra) -> int:
    return max(simple_resolution(A, m)[1] for m in A.quiver.vertices)


# ---------------------------------------------------------------------------
# JSON


def quiver_to_json(q: Quiver, relations: Sequence[PathPoly] = ()) -> dict:
    def term(p, c):
        d = {"coeff": str(c), "path": q.path_names(p)}
        if not p.arrows:
            d["vertex"] = p.start
        return d
    return {
        "vertices": q.vertex_count,
        "arrows": [{"name": a.name, "tail": a.tail, "head": a.head} for a in q.arrows],
        "relations": [[term(p, r.terms[p]) for p in sorted(r.terms, key=path_key, reverse=True)]
                      for r in relations],
    }


def path_poly_from_json(q: Quiver, terms: Sequence[Mapping], field: Field = QQ) -> PathPoly:
    out: dict = {}
    for t in terms:
        p = q.path(t.get("path", []), t.get("vertex"))
        out[p] = out.get(p, field.zero) + field(t.get("coeff", 1))
    return PathPoly(out, field)


def quiver_from_json(data: Mapping, field: Field = QQ) -> tuple[Quiver, list[PathPoly]]:
    q = Quiver(int(data["vertices"]),
               tuple(Arrow(a["name"], int(a["tail"]), int(a["head"])) for a in data["arrows"]))
    rels = [path_poly_from_json(q, r, field) for r in data.get("relations", [])]
    return q, rels
