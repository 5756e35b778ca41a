"""Tor over lower triangular rings built from a finite-dimensional algebra.

For an algebra ``S`` of dimension ``d`` over a field ``k`` and ``n >= 2``,
let ``A`` be the ring of ``n x n`` lower triangular matrices with ``k`` on
the diagonal and ``S`` below it.  The iterated kernels

    c^0 = S,   c^j = ker(μ : S ⊗_k c^{j-1} -> c^{j-1})

splice into a resolution of the column module ``N = S^n`` by the modules
``P_i ⊗_k c^{i-1}``.  Tensoring with the row module ``M = S^n`` leaves the
complex ``S ⊗ c^{n-1} -> ... -> S ⊗ c^0`` whose homology is
``Tor^A_*(M, N)``.

All spaces are explicit k-vector spaces; maps are sparse dictionaries of
raw field values, turned into :class:`DenseMatrix` only for rank work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactlin import QQ, DenseMatrix, Field, homology_dim, rank
from .report import Check


class NotAssociative(ValueError):
    def __init__(self, witness):
        super().__init__(f"(b{witness[0]} b{witness[1]}) b{witness[2]} != b{witness[0]} (b{witness[1]} b{witness[2]})")
        self.witness = witness


class NoUnit(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# algebras and modules


@dataclass(frozen=True, eq=False)
class FinDimAlgebra:
    """Basis ``b_1..b_d`` (``b_1`` the unit), ``b_p b_q = Σ_r table[p][q][r] b_r``.

    Indices are 0-based internally.
    """

    basis: tuple
    table: tuple  # table[p][q] is a sparse dict {r: raw coefficient}
    field: Field = QQ

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_dense(cls, basis: Sequence[str], table, field: Field = QQ) -> FinDimAlgebra:
        d = len(basis)
        rows = []
        for p in range(d):
            row = []
            for q in range(d):
                vec = table[p][q]
                if len(vec) != d:
                    raise ValueError(f"product b{p + 1} b{q + 1} has {len(vec)} coordinates, expected {d}")
                row.append({r: field.raw(field(c)) for r, c in enumerate(vec) if field(c)})
            rows.append(tuple(row))
        if len(rows) != d:
            raise ValueError("table size does not match the basis")
        return cls(tuple(basis), tuple(rows), field)

    def product(self, p: int, q: int) -> dict:
        return self.table[p][q]

    def mul_vec(self, u: Mapping, v: Mapping) -> dict:
        F = self.field
        out: dict = {}
        for p, a in u.items():
            for q, b in v.items():
                ab = F.r_mul(a, b)
                for r, c in self.table[p][q].items():
                    out[r] = F.r_add_mul(out.get(r, F.r_zero), ab, c)
        return {r: c for r, c in out.items() if c}


def check_algebra(S: FinDimAlgebra) -> bool:
    F = S.field
    d = S.dim
    one = {0: F.r_one}
    for p in range(d):
        e = {p: F.r_one}
        if S.mul_vec(one, e) != e or S.mul_vec(e, one) != e:
            raise NoUnit(f"b1 is not a two-sided unit for b{p + 1}")
    for p, q, r in itertools.product(range(d), repeat=3):
        left = S.mul_vec(S.table[p][q], {r: F.r_one})
        right = S.mul_vec({p: F.r_one}, S.table[q][r])
        if left != right:
            raise NotAssociative((p + 1, q + 1, r + 1))
    return True


@dataclass(frozen=True, eq=False)
class SModule:
    """A left S-module: ``actions[p]`` is a sparse matrix {(row, col): raw} for b_p."""

    algebra: FinDimAlgebra
    dim: int
    actions: tuple

    def act(self, p: int, vec: Mapping) -> dict:
        F = self.algebra.field
        out: dict = {}
        cols = self._columns()[p]
        for j, c in vec.items():
            for i, a in cols.get(j, ()):
                out[i] = F.r_add_mul(out.get(i, F.r_zero), a, c)
        return {i: c for i, c in out.items() if c}

    def _columns(self):
        cache = self.__dict__.get("_cols")
        if cache is None:
            cache = []
            for m in self.actions:
                cols: dict = {}
                for (i, j), a in m.items():
                    cols.setdefault(j, []).append((i, a))
                cache.append(cols)
            object.__setattr__(self, "_cols", cache)
        return cache

    def action_matrix(self, p: int) -> DenseMatrix:
        F = self.algebra.field
        return DenseMatrix.from_sparse(self.dim, self.dim,
                                       {k: F.wrap(v) for k, v in self.actions[p].items()}, F)


def regular_module(S: FinDimAlgebra) -> SModule:
    acts = []
    for p in range(S.dim):
        acts.append({(r, q): c for q in range(S.dim) for r, c in S.table[p][q].items()})
    return SModule(S, S.dim, tuple(acts))


def check_module(M: SModule) -> bool:
    """``act(b_p) act(b_q) = Σ c_pqr act(b_r)`` and ``act(b_1) = 1``."""
    S, F = M.algebra, M.algebra.field
    for j in range(M.dim):
        if M.act(0, {j: F.r_one}) != {j: F.r_one}:
            return False
    for p, q in itertools.product(range(S.dim), repeat=2):
        for j in range(M.dim):
            e = {j: F.r_one}
            lhs = M.act(p, M.act(q, e))
            rhs: dict = {}
            for r, c in S.table[p][q].items():
                for i, v in M.act(r, e).items():
                    rhs[i] = F.r_add_mul(rhs.get(i, F.r_zero), c, v)
            if lhs != {i: v for i, v in rhs.items() if v}:
                return False
    return True


# S ⊗ M has basis b_p ⊗ m_q at index p * dim M + q


def mu(M: SModule) -> dict:
    """``μ_M : S ⊗ M -> M`` as a sparse matrix."""
    out = {}
    for p, act in enumerate(M.actions):
        for (i, q), a in act.items():
            out[i, p * M.dim + q] = a
    return out


@dataclass(frozen=True, eq=False)
class KernelStep:
    """``c = ker μ_M`` with its inclusion ``ι : c -> S ⊗ M``."""

    module: SModule
    inclusion: dict  # sparse {(row in S⊗M, col in c): raw}
    parent: SModule


def kernel_step(M: SModule) -> KernelStep:
    """Kernel of ``μ_M`` with basis ``k_{p,q} = b_p ⊗ m_q - 1 ⊗ (b_p m_q)``, ``p >= 2``.

    Coordinates of a kernel vector are its entries at the positions
    ``b_p ⊗ m_q`` with ``p >= 2``, so the induced action is read off directly.
    """
    S, F = M.algebra, M.algebra.field
    m, d = M.dim, S.dim
    col_of = {(p, q): (p - 1) * m + q for p in range(1, d) for q in range(m)}
    inc: dict = {}
    vecs = []
    for p in range(1, d):
        for q in range(m):
            v = {p * m + q: F.r_one}
            for i, c in M.act(p, {q: F.r_one}).items():
                v[i] = F.r_neg(c)  # the 1 ⊗ (b_p m_q) part sits at p = 0
            vecs.append(v)
            j = col_of[p, q]
            for i, c in v.items():
                inc[i, j] = c
    acts = []
    for r in range(d):
        act = {}
        for j, v in enumerate(vecs):
            # b_r acts on the S factor of S ⊗ M
            img: dict = {}
            for idx, c in v.items():
                p, q = divmod(idx, m)
                for s, a in S.table[r][p].items():
                    k = s * m + q
                    img[k] = F.r_add_mul(img.get(k, F.r_zero), a, c)
            for k, c in img.items():
                p, q = divmod(k, m)
                if p >= 1 and c:
                    act[col_of[p, q], j] = c
        acts.append(act)
    return KernelStep(SModule(S, (d - 1) * m, tuple(acts)), inc, M)


def omega(S: FinDimAlgebra) -> SModule:
    return kernel_step(regular_module(S)).module


def ck_tower(S: FinDimAlgebra, j: int) -> list[KernelStep]:
    """``[c^1 ⊂ S⊗c^0, ..., c^j ⊂ S⊗c^{j-1}]``."""
    M = regular_module(S)
    steps = []
    for _ in range(j):
        st = kernel_step(M)
        steps.append(st)
        M = st.module
    return steps


def ck(S: FinDimAlgebra, j: int) -> SModule:
    if j < 0:
        raise ValueError("j must be >= 0")
    if j == 0:
        return regular_module(S)
    return ck_tower(S, j)[-1].module


# ---------------------------------------------------------------------------
# the Tor complex


def _sparse_mul(F: Field, f: dict, g: dict) -> dict:
    by_row: dict = {}
    for (k, j), c in g.items():
        by_row.setdefault(k, []).append((j, c))
    out: dict = {}
    for (i, k), a in f.items():
        for j, c in by_row.get(k, ()):
            out[i, j] = F.r_add_mul(out.get((i, j), F.r_zero), a, c)
    return {k: v for k, v in out.items() if v}


def _dense(F: Field, rows: int, cols: int, sparse: dict) -> DenseMatrix:
    return DenseMatrix.from_sparse(rows, cols, {k: F.wrap(v) for k, v in sparse.items()}, F)


@dataclass
class TorComplex:
    algebra: FinDimAlgebra
    n: int
    term_dims: tuple  # dim S ⊗ c^j for j = 0..n-1
    differentials: tuple  # D_j : S⊗c^j -> S⊗c^{j-1}, j = 1..n-1, as DenseMatrix


def tor_complex(S: FinDimAlgebra, n: int) -> TorComplex:
    if n < 2:
        raise ValueError("n must be at least 2")
    F, d = S.field, S.dim
    steps = ck_tower(S, n - 1)
    mods = [regular_module(S)] + [st.module for st in steps]
    dims = tuple(d * M.dim for M in mods)
    diffs = []
    for j in range(1, n):
        D = _sparse_mul(F, steps[j - 1].inclusion, mu(mods[j]))
        diffs.append(_dense(F, dims[j - 1], dims[j], D))
    return TorComplex(S, n, dims, tuple(diffs))


def tor_dims(S: FinDimAlgebra, n: int) -> list[int]:
    """``dim Tor^A_i(M, N)`` for ``i = 0..n-1``."""
    cx = tor_complex(S, n)
    F = S.field
    out = []
    for i in range(n):
        d_in = cx.differentials[i] if i < n - 1 else DenseMatrix.zero(cx.term_dims[i], 0, F)
        d_out = cx.differentials[i - 1] if i > 0 else DenseMatrix.zero(0, cx.term_dims[0], F)
        out.append(homology_dim(d_in, d_out))
    return out


def matrix_tor_dims(S: FinDimAlgebra, n: int) -> list[int]:
    """``dim Tor^A_i(M_n(S), M_n(S)) = n^2 dim Tor^A_i(M, N)``."""
    return [n * n * t for t in tor_dims(S, n)]


# ---------------------------------------------------------------------------
# the resolution of N by P_i ⊗ c^{i-1}


DESK_MAX_N = 5
DESK_MAX_D = 4


@dataclass
class _Term:
    """``P_i ⊗ c^{i-1}``: row ``i`` is ``c^{i-1}``, rows ``r > i`` are ``S ⊗ c^{i-1}``."""

    i: int
    rows: dict  # row -> (offset, size, kind) with kind "k" or "S"
    dim: int


def _term(i: int, n: int, cdim: int, d: int) -> _Term:
    rows = {}
    off = 0
    for r in range(i, n + 1):
        size = cdim if r == i else d * cdim
        rows[r] = (off, size, "k" if r == i else "S")
        off += size
    return _Term(i, rows, off)


def _row_action(S: FinDimAlgebra, kind: str, cdim: int, p: int, vec: Mapping) -> dict:
    """``b_p`` applied to a row entry, landing in an ``S``-row.

    A ``k``-row entry ``x`` goes to ``b_p ⊗ x``; an ``S``-row entry is
    multiplied on its ``S`` factor.
    """
    F = S.field
    if kind == "k":
        return {p * cdim + q: c for q, c in vec.items()}
    out: dict = {}
    for idx, c in vec.items():
        s, q = divmod(idx, cdim)
        for r, a in S.table[p][s].items():
            k = r * cdim + q
            out[k] = F.r_add_mul(out.get(k, F.r_zero), a, c)
    return {k: v for k, v in out.items() if v}


def resolution_check(S: FinDimAlgebra, n: int, linearity: bool = True) -> Check:
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > DESK_MAX_N or S.dim > DESK_MAX_D:
        raise BudgetExceeded(f"n={n}, d={S.dim} exceeds the desk budget n<={DESK_MAX_N}, d<={DESK_MAX_D}")
    F, d = S.field, S.dim
    steps = ck_tower(S, n - 1)
    mods = [regular_module(S)] + [st.module for st in steps]
    terms = [_term(i, n, mods[i - 1].dim, d) for i in range(1, n + 1)]
    N_dim = n * d

    # augmentation X_1 -> N: identity on row 1, μ_S on rows r > 1
    X1 = terms[0]
    aug: dict = {}
    mu_S = mu(mods[0])
    for r, (off, size, kind) in X1.rows.items():
        if kind == "k":
            for q in range(size):
                aug[(r - 1) * d + q, off + q] = F.r_one
        else:
            for (i, j), c in mu_S.items():
                aug[(r - 1) * d + i, off + j] = c

    # d_i : X_{i+1} -> X_i
    maps = []
    for i in range(1, n):
        src, dst = terms[i], terms[i - 1]
        inc = steps[i - 1].inclusion  # c^i -> S ⊗ c^{i-1}
        iota_mu = _sparse_mul(F, inc, mu(mods[i]))
        D: dict = {}
        for r, (off, size, kind) in src.rows.items():
            doff = dst.rows[r][0]
            block = inc if kind == "k" else iota_mu
            for (a, b), c in block.items():
                D[doff + a, off + b] = c
        maps.append(D)

    dense = [_dense(F, terms[i - 1].dim, terms[i].dim, maps[i - 1]) for i in range(1, n)]
    aug_m = _dense(F, N_dim, X1.dim, aug)
    details: dict = {"term_dims": [t.dim for t in terms], "N_dim": N_dim,
                     "c_dims": [M.dim for M in mods]}
    ok = True
    # D∘D = 0 (homology_dim raises otherwise) and exactness at each term
    homology = []
    for i in range(1, n + 1):
        d_out = aug_m if i == 1 else dense[i - 2]
        d_in = dense[i - 1] if i < n else DenseMatrix.zero(terms[i - 1].dim, 0, F)
        h = homology_dim(d_in, d_out)
        homology.append(h)
    details["homology"] = homology
    ok &= all(h == 0 for h in homology)
    aug_rank = rank(aug_m)
    details["augmentation_rank"] = aug_rank
    details["augmentation_surjective"] = aug_rank == N_dim
    ok &= aug_rank == N_dim
    details["euler_characteristic"] = sum((-1) ** (i - 1) * t.dim for i, t in enumerate(terms, 1))
    ok &= details["euler_characteristic"] == N_dim
    if linearity:
        lin = _check_linearity(S, n, terms, mods, maps, aug)
        details["A_linear"] = lin
        ok &= lin
    return Check("resolution", "Exact" if ok else "NotExact", ok, True, details)


def _check_linearity(S, n, terms, mods, maps, aug) -> bool:
    """Every map commutes with ``b_p E(r, s)`` for ``r > s`` (the S-part of A)."""
    F, d = S.field, S.dim

    def act_term(t: _Term, cdim, p, r, s, vec):
        # pick out row s, apply b_p, place into row r
        if s not in t.rows or r not in t.rows:
            return {}
        off, size, kind = t.rows[s]
        part = {k - off: c for k, c in vec.items() if off <= k < off + size}
        roff = t.rows[r][0]
        return {roff + k: c for k, c in _row_action(S, kind, cdim, p, part).items()}

    def act_N(p, r, s, vec):
        part = {k - (s - 1) * d: c for k, c in vec.items() if (s - 1) * d <= k < s * d}
        return {(r - 1) * d + k: c for k, c in S.mul_vec({p: F.r_one}, part).items()}

    def apply(D, vec):
        cols: dict = {}
        for (i, j), c in D.items():
            cols.setdefault(j, []).append((i, c))
        out: dict = {}
        for j, c in vec.items():
            for i, a in cols.get(j, ()):
                out[i] = F.r_add_mul(out.get(i, F.r_zero), a, c)
        return {k: v for k, v in out.items() if v}

    pairs = [(r, s) for r in range(1, n + 1) for s in range(1, r)]
    for p in range(d):
        for r, s in pairs:
            for idx, t in enumerate(terms):
                cdim = mods[idx].dim
                target = (lambda v: act_N(p, r, s, v)) if idx == 0 else \
                    (lambda v, tt=terms[idx - 1], cd=mods[idx - 1].dim: act_term(tt, cd, p, r, s, v))
                D = aug if idx == 0 else maps[idx - 1]
                for k in range(t.dim):
                    e = {k: F.r_one}
                    if apply(D, act_term(t, cdim, p, r, s, e)) != target(apply(D, e)):
                        return False
    return True


# ---------------------------------------------------------------------------
# σ and the verdict


def _unit_right_mul(S: FinDimAlgebra, n: int, src_col: int, dst_col: int) -> DenseMatrix:
    """Right multiplication by the matrix unit ``E(src_col, dst_col)`` on
    ``M_n(S) E(src_col, src_col)`` -> ``M_n(S) E(dst_col, dst_col)``.

    Both column modules have basis ``(row, b_p)``; the entry ``x`` at
    ``(row, src_col)`` lands at ``(row, dst_col)`` as ``x * 1``.
    """
    F, d = S.field, S.dim
    one = {0: F.r_one}
    items = {}
    for row in range(n):
        for p in range(d):
            for q, c in S.mul_vec({p: F.r_one}, one).items():
                items[row * d + q, row * d + p] = F.wrap(c)
    return DenseMatrix.from_sparse(n * d, n * d, items, F)


def sigma_maps_check(S: FinDimAlgebra, n: int) -> Check:
    """Each ``s_i : P_n -> P_i`` (the unit of S in the bottom entry) becomes
    invertible over ``M_n(S)``; its inverse is right multiplication by ``E(i, n)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    d = S.dim
    ok = True
    rows = []
    ident = DenseMatrix.identity(n * d, S.field)
    for i in range(1, n + 1):
        s_i = _unit_right_mul(S, n, n, i)
        inv = _unit_right_mul(S, n, i, n)
        two_sided = (inv @ s_i) == ident and (s_i @ inv) == ident
        full = rank(s_i) == n * d
        ok &= two_sided and full
        rows.append({"i": i, "two_sided_inverse": two_sided, "rank": n * d if full else rank(s_i)})
    details: dict = {"maps": rows}
    if n < 3:
        details["warning"] = "universality of the localization needs n >= 3; only invertibility was checked"
    return Check("sigma_maps", "Invertible" if ok else "NotInvertible", ok, True, details)


@dataclass(frozen=True)
class NotStablyFlat:
    witness: int
    dim: int

    def __str__(self):
        return f"NotStablyFlat(Tor_{self.witness}, dim {self.dim})"


@dataclass(frozen=True)
class NoObstructionFound:
    def __str__(self):
        return "NoObstructionFound"


def stable_flatness_verdict(S: FinDimAlgebra, n: int):
    if n < 3:
        raise ValueError("the verdict needs n >= 3")
    dims = matrix_tor_dims(S, n)
    for i, t in enumerate(dims[1:], 1):
        if t:
            return NotStablyFlat(i, t)
    return NoObstructionFound()


# ---------------------------------------------------------------------------
# standard algebras and JSON


def _table(d, products: Mapping, unit_first=True):
    """Dense table from ``{(p, q): {r: c}}`` on non-unit basis indices (1-based)."""
    t = [[[0] * d for _ in range(d)] for _ in range(d)]
    for p in range(d):
        t[0][p][p] = 1
        t[p][0][p] = 1
    for (p, q), vec in products.items():
        for r, c in vec.items():
            t[p - 1][q - 1][r - 1] = c
    return t


def _truncated_poly(d: int, var="x") -> FinDimAlgebra:
    names = ["1"] + [var if k == 1 else f"{var}^{k}" for k in range(1, d)]
    prods = {(p + 1, q + 1): {p + q + 1: 1} for p in range(1, d) for q in range(1, d) if p + q < d}
    return FinDimAlgebra.from_dense(names, _table(d, prods))


def standard_algebra(name: str) -> FinDimAlgebra:
    if name == "k":
        return FinDimAlgebra.from_dense(["1"], [[[1]]])
    if name == "dual_numbers":
        return _truncated_poly(2, "eps")
    if name == "kxk":
        return FinDimAlgebra.from_dense(["1", "e"], _table(2, {(2, 2): {2: 1}}))
    if name == "trunc3":
        return _truncated_poly(3)
    if name == "k3":
        return FinDimAlgebra.from_dense(["1", "e1", "e2"], _table(3, {(2, 2): {2: 1}, (3, 3): {3: 1}}))
    if name == "upper2":
        # basis 1, e11, e12 of upper triangular 2x2 matrices
        return FinDimAlgebra.from_dense(["1", "e11", "e12"], _table(3, {(2, 2): {2: 1}, (2, 3): {3: 1}}))
    if name == "square_zero2":
        return FinDimAlgebra.from_dense(["1", "x", "y"], _table(3, {}))
    if name == "trunc4":
        return _truncated_poly(4)
    if name == "m2":
        # basis 1, e11, e12, e21; e22 = 1 - e11
        return FinDimAlgebra.from_dense(["1", "e11", "e12", "e21"], _table(4, {
            (2, 2): {2: 1}, (2, 3): {3: 1}, (4, 2): {4: 1},
            (3, 4): {2: 1}, (4, 3): {1: 1, 2: -1},
        }))
    raise KeyError(f"unknown algebra {name!r}")


STANDARD_ALGEBRAS = ("k", "dual_numbers", "kxk", "trunc3", "k3", "upper2", "square_zero2", "trunc4", "m2")


def algebra_from_json(data: Mapping, field: Field = QQ) -> FinDimAlgebra:
    d = int(data["dim"])
    basis = data.get("basis") or [f"b{i}" for i in range(1, d + 1)]
    if len(basis) != d:
        raise ValueError("basis length does not match dim")
    table = [[[field(Fraction(c)) if field is QQ else field(int(c)) for c in vec] for vec in row]
             for row in data["table"]]
    return FinDimAlgebra.from_dense(basis, table, field)


def algebra_to_json(S: FinDimAlgebra) -> dict:
    F, d = S.field, S.dim
    return {
        "dim": d,
        "basis": list(S.basis),
        "table": [[[str(F.wrap(S.table[p][q].get(r, F.r_zero))) for r in range(d)]
                   for q in range(d)] for p in range(d)],
    }
