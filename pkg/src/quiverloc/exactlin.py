"""Exact linear algebra over the rationals and prime fields.

Matrices are stored densely, row-major.  Elimination works on a sparse
row view internally because almost every matrix produced by the rest of
the package (structure-constant actions, path concatenation tables) is
very sparse.  No floating point anywhere.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class FieldMismatch(TypeError):
    pass


class ShapeError(ValueError):
    pass


class NotAComplex(ValueError):
    pass


# ---------------------------------------------------------------------------
# fields


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True, slots=True)
class Mod:
    """A residue class modulo a prime ``p``."""

    residue: int
    p: int

    def __post_init__(self):
        if not 0 <= self.residue < self.p:
            object.__setattr__(self, "residue", self.residue % self.p)

    def _other(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise FieldMismatch(f"F_{self.p} vs F_{other.p}")
            return other.residue
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} is not defined mod {self.p}")
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod((self.residue + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod((self.residue - o) % self.p, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod((o - self.residue) % self.p, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.residue * o % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return Mod(self.residue * pow(o, -1, self.p) % self.p, self.p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __neg__(self):
        return Mod(-self.residue % self.p, self.p)

    def __bool__(self):
        return self.residue != 0

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __repr__(self):
        return f"Mod({self.residue}, {self.p})"

    def __str__(self):
        return str(self.residue)


class Field:
    """Common interface of :data:`QQ` and :class:`GF`."""

    characteristic: int

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def owns(self, x) -> bool:
        raise NotImplementedError

    # raw arithmetic used by the eliminator (unwrapped representation)
    def raw(self, x):
        return x

    def wrap(self, r):
        return r

    r_zero = 0
    r_one = 1

    def r_sub_mul(self, a, b, c):
        """a - b*c"""
        return a - b * c

    def r_add_mul(self, a, b, c):
        """a + b*c"""
        return a + b * c

    def r_neg(self, a):
        return -a

    def r_mul(self, a, b):
        return a * b

    def r_inv(self, a):
        return 1 / a


class _Rationals(Field):
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool):
            return Fraction(int(x))
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, Mod):
            raise FieldMismatch(f"{x!r} is not a rational number")
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def owns(self, x):
        return isinstance(x, (int, Fraction)) and not isinstance(x, bool)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("QQ")

    def r_inv(self, a):
        return Fraction(1) / a


QQ = _Rationals()


class GF(Field):
    """The prime field with ``p`` elements."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldMismatch(f"F_{x.p} element in F_{self.p}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return Mod(x % self.p, self.p)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} is not defined mod {self.p}")
            return Mod(x.numerator * pow(x.denominator, -1, self.p) % self.p, self.p)
        raise TypeError(f"cannot coerce {x!r} into GF({self.p})")

    def owns(self, x):
        return isinstance(x, Mod) and x.p == self.p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def raw(self, x):
        return x.residue

    def wrap(self, r):
        return Mod(r, self.p)

    def r_sub_mul(self, a, b, c):
        return (a - b * c) % self.p

    def r_add_mul(self, a, b, c):
        return (a + b * c) % self.p

    def r_neg(self, a):
        return -a % self.p

    def r_mul(self, a, b):
        return a * b % self.p

    def r_inv(self, a):
        return pow(a, -1, self.p)


def field_of(values: Iterable) -> Field | None:
    """Infer the common field of ``values``; ``None`` if only plain ints."""
    found = None
    saw_fraction = False
    for v in values:
        if isinstance(v, Mod):
            if found is not None and found.p != v.p:
                raise FieldMismatch(f"entries from F_{found.p} and F_{v.p}")
            if found is None:
                found = GF(v.p)
        elif isinstance(v, Fraction):
            if v.denominator != 1:
                saw_fraction = True
        elif isinstance(v, int):
            pass
        else:
            raise TypeError(f"unsupported entry {v!r}")
    if found is not None and saw_fraction:
        raise FieldMismatch("rational and modular entries mixed")
    if found is not None:
        return found
    return QQ if saw_fraction else None


# ---------------------------------------------------------------------------
# matrices


class DenseMatrix:
    """An immutable ``rows x cols`` matrix over one exact field."""

    __slots__ = ("rows", "cols", "entries", "field", "_sparse")

    def __init__(self, rows: int, cols: int, entries: Sequence, field: Field | None = None):
        if rows < 0 or cols < 0:
            raise ShapeError("negative dimension")
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ShapeError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        inferred = field_of(entries)
        if field is None:
            field = inferred or QQ
        elif inferred is not None and inferred != field:
            raise FieldMismatch(f"entries live in {inferred}, matrix declared over {field}")
        self.rows = rows
        self.cols = cols
        self.field = field
        self.entries = tuple(field(e) for e in entries)
        self._sparse = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field | None = None, cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeError("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r], field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int, field: Field | None = None):
        for c in columns:
            if len(c) != nrows:
                raise ShapeError("column length mismatch")
        ncols = len(columns)
        return cls(nrows, ncols, [columns[j][i] for i in range(nrows) for j in range(ncols)], field)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, items: dict, field: Field = QQ):
        """Build from ``{(i, j): value}``; entries are assumed to be in ``field``."""
        zero = field.zero
        flat = [zero] * (rows * cols)
        for (i, j), v in items.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise ShapeError(f"entry ({i}, {j}) outside {rows}x{cols}")
            flat[i * cols + j] = v
        m = cls.__new__(cls)
        m.rows, m.cols, m.field = rows, cols, field
        m.entries = tuple(flat)
        m._sparse = None
        return m

    @classmethod
    def zero(cls, rows: int, cols: int, field: Field = QQ):
        return cls.from_sparse(rows, cols, {}, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ):
        return cls.from_sparse(n, n, {(i, i): field.one for i in range(n)}, field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j):
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> DenseMatrix:
        return DenseMatrix.from_sparse(
            self.cols, self.rows,
            {(j, i): v for (i, j), v in self.nonzero_items()}, self.field)

    def nonzero_items(self):
        cols = self.cols
        for k, v in enumerate(self.entries):
            if v:
                yield (k // cols, k % cols), v

    def sparse_rows(self) -> list[dict]:
        """Rows as ``{col: raw value}`` dicts (raw = unwrapped field element)."""
        if self._sparse is None:
            raw = self.field.raw
            out = [dict() for _ in range(self.rows)]
            for (i, j), v in self.nonzero_items():
                out[i][j] = raw(v)
            self._sparse = out
        return [dict(r) for r in self._sparse]

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} @ {other.field}")
        if self.cols != other.rows:
            raise ShapeError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        F = self.field
        left = self.sparse_rows()
        right = other.sparse_rows()
        out = {}
        for i, row in enumerate(left):
            acc = {}
            for k, a in row.items():
                for j, b in right[k].items():
                    acc[j] = acc.get(j, 0) + F.r_mul(a, b)
            for j, v in acc.items():
                v = F.wrap(v % F.characteristic) if F.characteristic else v
                if v:
                    out[i, j] = v
        return DenseMatrix.from_sparse(self.rows, other.cols, out, F)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.field, self.entries) == (
            other.rows, other.cols, other.field, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols} over {self.field!r})"


# ---------------------------------------------------------------------------
# elimination


class Echelon:
    """Incremental row echelon form over ``field`` with ``ncols`` columns.

    Rows are fed one at a time with :meth:`add`; each stored pivot row is
    normalised to 1 at its pivot (its first nonzero column).
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        """Reduce a raw sparse row against the stored pivots (in place)."""
        F = self.field
        pivots = self.pivots
        heap = [c for c in row if c in pivots]
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            v = row.get(c)
            if not v:
                continue
            for cc, pv in pivots[c].items():
                if cc == c:
                    continue
                nv = F.r_sub_mul(row.get(cc, 0), v, pv)
                if nv:
                    if cc not in row and cc in pivots:
                        heapq.heappush(heap, cc)
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            del row[c]
        return row

    def add(self, row: dict) -> bool:
        """Insert a raw sparse row; return True when it raised the rank."""
        row = self.reduce(dict(row))
        if not row:
            return False
        F = self.field
        c = min(row)
        inv = F.r_inv(row[c])
        self.pivots[c] = {k: F.r_mul(v, inv) for k, v in row.items()}
        return True

    def rref_rows(self) -> dict[int, dict]:
        """Fully reduced pivot rows keyed by pivot column."""
        F = self.field
        done: dict[int, dict] = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for cc in [k for k in row if k != c and k in done]:
                v = row.get(cc)
                if not v:
                    continue
                for k, pv in done[cc].items():
                    nv = F.r_sub_mul(row.get(k, 0), v, pv)
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            done[c] = row
        return done


def _check_field(*ms: DenseMatrix) -> Field:
    fields = {m.field for m in ms}
    if len(fields) > 1:
        raise FieldMismatch(f"matrices over {sorted(map(repr, fields))}")
    return ms[0].field


def rank(m: DenseMatrix) -> int:
    ech = Echelon(m.field, m.cols)
    for row in m.sparse_rows():
        if row:
            ech.add(row)
    return ech.rank


def nullspace(m: DenseMatrix) -> tuple[list[tuple], list[int]]:
    """Kernel basis of ``m`` together with its free columns.

    Basis vector ``k`` has a 1 in free column ``free[k]`` and 0 in every
    other free column, so the coordinates of any kernel vector in this
    basis are simply its entries at the free columns.
    """
    F = m.field
    ech = Echelon(F, m.cols)
    for row in m.sparse_rows():
        if row:
            ech.add(row)
    rr = ech.rref_rows()
    free = [j for j in range(m.cols) if j not in rr]
    # column view of the pivot rows restricted to free columns
    by_free: dict[int, list] = {f: [] for f in free}
    for c, row in rr.items():
        for k, v in row.items():
            if k != c:
                by_free[k].append((c, v))
    zero, one = F.zero, F.one
    basis = []
    for f in free:
        vec = [zero] * m.cols
        vec[f] = one
        for c, v in by_free[f]:
            vec[c] = F.wrap((-v) % F.characteristic) if F.characteristic else -v
        basis.append(tuple(vec))
    return basis, free


def kernel_basis(m: DenseMatrix) -> list[tuple]:
    """Linearly independent column vectors spanning ``{v : m v = 0}``."""
    return nullspace(m)[0]


def homology_dim(d_in: DenseMatrix, d_out: DenseMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a composable pair ``d_out . d_in = 0``."""
    _check_field(d_in, d_out)
    if d_in.rows != d_out.cols:
        raise ShapeError(
            f"d_in lands in dimension {d_in.rows}, d_out starts from {d_out.cols}")
    if not (d_out @ d_in).is_zero():
        raise NotAComplex("d_out . d_in is nonzero")
    return d_out.cols - rank(d_out) - rank(d_in)


def quotient_dim(space_dim: int, spanning_vectors: Iterable[Sequence], field: Field | None = None) -> int:
    vecs = [tuple(v) for v in spanning_vectors]
    for v in vecs:
        if len(v) != space_dim:
            raise ShapeError(f"vector of length {len(v)} in a space of dimension {space_dim}")
    if not vecs:
        return space_dim
    m = DenseMatrix(len(vecs), space_dim, [x for v in vecs for x in v], field)
    return space_dim - rank(m)


def coordinates(vec: Sequence, free: Sequence[int]) -> tuple:
    """Coordinates of a kernel vector w.r.t. a basis produced by :func:`nullspace`."""
    return tuple(vec[f] for f in free)
