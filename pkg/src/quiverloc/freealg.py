"""Noncommutative polynomials and finitely presented algebras k<X : Y>.

Words are tuples of 1-based generator indices; the empty tuple is the
unit monomial.  Monomials are ordered degree-first, then lexicographically
with earlier generators counting as larger (``x > y`` for ``k<x, y | ...>``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import QQ, Field, FieldMismatch, GF

Word = tuple


def word_key(w: Word):
    """Sort key realising the global monomial order (ascending = smaller)."""
    return (len(w), tuple(-i for i in w))


class NcPoly:
    """An element of the free algebra over an exact field.

    Treated as immutable; ``terms`` maps words to nonzero coefficients.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: Mapping[Word, object] | None = None, field: Field = QQ):
        self.field = field
        clean = {}
        for w, c in (terms or {}).items():
            c = field(c)
            if c:
                w = tuple(w)
                clean[w] = clean.get(w, field.zero) + c
                if not clean[w]:
                    del clean[w]
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict, field: Field) -> NcPoly:
        p = cls.__new__(cls)
        p.terms = terms
        p.field = field
        return p

    @classmethod
    def monomial(cls, word: Iterable[int], coeff=1, field: Field = QQ) -> NcPoly:
        return cls({tuple(word): coeff}, field)

    @classmethod
    def constant(cls, c, field: Field = QQ) -> NcPoly:
        return cls({(): c}, field)

    @classmethod
    def zero(cls, field: Field = QQ) -> NcPoly:
        return cls._raw({}, field)

    # -- structure ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def leading(self) -> tuple[Word, object]:
        w = max(self.terms, key=word_key)
        return w, self.terms[w]

    def words(self) -> list[Word]:
        return sorted(self.terms, key=word_key, reverse=True)

    def coefficient(self, w: Word):
        return self.terms.get(tuple(w), self.field.zero)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> NcPoly:
        if isinstance(other, NcPoly):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        return NcPoly.constant(other, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w)
            v = c if v is None else v + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NcPoly._raw(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._raw({w: -c for w, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> NcPoly:
        c = self.field(c)
        if not c:
            return NcPoly.zero(self.field)
        return NcPoly._raw({w: v * c for w, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, NcPoly):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w)
                v = c1 * c2 if v is None else v + c1 * c2
                if v:
                    out[w] = v
                else:
                    del out[w]
        return NcPoly._raw(out, self.field)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = NcPoly.constant(1, self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, NcPoly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == NcPoly.constant(other, self.field)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in self.words():
            c = self.terms[w]
            neg = False
            if self.field.characteristic == 0 and c < 0:
                neg, c = True, -c
            mono = "*".join(names[i - 1] if names else f"x{i}" for i in w)
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"NcPoly({self.format()})"


def nc_arith(p: NcPoly, q, op: str) -> NcPoly:
    """Dispatch ``add``, ``mul`` or ``scale`` (``q`` a scalar for the latter)."""
    if op == "add":
        return p + q
    if op == "mul":
        if not isinstance(q, NcPoly):
            raise TypeError("mul expects two polynomials")
        return p * q
    if op == "scale":
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# presentations


class EmptyRelation(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


class PresentationSyntaxError(ValueError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relations: tuple[NcPoly, ...]
    field: Field = QQ

    def __post_init__(self):
        names = tuple(self.generator_names)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relations", tuple(self.relations))
        if not names:
            raise ValueError("a presentation needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for r in self.relations:
            if r.field != self.field:
                raise FieldMismatch(f"relation over {r.field!r} in a presentation over {self.field!r}")
            if r.is_zero():
                raise EmptyRelation("zero relation")
            for w in r.terms:
                if any(not 1 <= i <= len(names) for i in w):
                    raise UnknownGenerator(f"word {w} uses an index outside 1..{len(names)}")

    @property
    def a(self) -> int:
        return len(self.generator_names)

    @property
    def b(self) -> int:
        return len(self.relations)

    def gen(self, i: int) -> NcPoly:
        return NcPoly.monomial((i,), 1, self.field)

    def is_homogeneous(self) -> bool:
        return all(len({len(w) for w in r.terms}) == 1 for r in self.relations)

    def format(self) -> str:
        rels = ", ".join(r.format(self.generator_names) for r in self.relations)
        return f"k<{', '.join(self.generator_names)} | {rels}>"

    def __str__(self):
        return self.format()


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[<>|,+\-*/])
""", re.VERBOSE)


def _tokenize(text: str):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            out.append((kind if kind != "sym" else s, s, line, col))
        for ch in s:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str, field: Field):
        self.toks = _tokenize(text)
        self.i = 0
        self.field = field
        self.names: list[str] = []

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            what = tok[1] or "end of input"
            raise PresentationSyntaxError(f"expected {kind!r}, found {what!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def presentation(self) -> Presentation:
        tok = self.take("ident")
        if tok[1] != "k":
            raise PresentationSyntaxError("presentation must start with 'k<'", tok[2], tok[3])
        self.take("<")
        self.names.append(self.take("ident")[1])
        while self.peek()[0] == ",":
            self.take(",")
            tok = self.take("ident")
            if tok[1] in self.names:
                raise PresentationSyntaxError(f"duplicate generator {tok[1]!r}", tok[2], tok[3])
            self.names.append(tok[1])
        self.take("|")
        rels = []
        if self.peek()[0] != ">":
            rels.append(self.poly())
            while self.peek()[0] == ",":
                self.take(",")
                rels.append(self.poly())
        self.take(">")
        self.take("eof")
        return Presentation(tuple(self.names), tuple(rels), self.field)

    def poly(self) -> NcPoly:
        start = self.peek()
        terms: dict = {}
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        self._add(terms, sign, self.term())
        while self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            self._add(terms, sign, self.term())
        p = NcPoly(terms, self.field)
        if p.is_zero():
            raise EmptyRelation(f"relation at line {start[2]}, column {start[3]} is zero")
        return p

    def _add(self, terms, sign, term):
        coeff, word = term
        terms[word] = terms.get(word, 0) + sign * coeff

    def term(self):
        tok = self.peek()
        coeff = Fraction(1)
        have_coeff = False
        if tok[0] == "int":
            num = int(self.take()[1])
            den = 1
            if self.peek()[0] == "/":
                self.take("/")
                den = int(self.take("int")[1])
                if den == 0:
                    raise PresentationSyntaxError("zero denominator", tok[2], tok[3])
            coeff = Fraction(num, den)
            have_coeff = True
        word = []
        while True:
            nxt = self.peek()
            if nxt[0] == "*":
                self.take()
                nxt = self.peek()
                if nxt[0] != "ident":
                    raise PresentationSyntaxError("expected a generator after '*'", nxt[2], nxt[3])
            if nxt[0] != "ident":
                break
            self.take()
            if nxt[1] not in self.names:
                raise UnknownGenerator(
                    f"line {nxt[2]}, column {nxt[3]}: unknown generator {nxt[1]!r}")
            word.append(self.names.index(nxt[1]) + 1)
        if not have_coeff and not word:
            raise PresentationSyntaxError(f"expected a term, found {tok[1] or 'end of input'!r}",
                                          tok[2], tok[3])
        if isinstance(self.field, GF):
            coeff = self.field(coeff)
        return coeff, tuple(word)


def parse_presentation(text: str, field: Field = QQ) -> Presentation:
    """Parse ``k<x, y | x*x, y*x>``-style text (``#`` starts a comment)."""
    return _Parser(text, field).presentation()


def format_presentation(p: Presentation) -> str:
    return p.format()


# ---------------------------------------------------------------------------


def group_algebra_presentation(c: int, relators: Sequence[Sequence[int]],
                               names: Sequence[str] | None = None,
                               field: Field = QQ) -> Presentation:
    """Presentation of the group algebra kG of ``<x_1..x_c | relators>``.

    Relators are words in the signed indices ``±1..±c``.  The result has
    generators ``x_1..x_c, xbar_1..xbar_c`` with ``xbar_i`` standing in for
    ``x_i^{-1}``.
    """
    if c < 1:
        raise ValueError("need at least one group generator")
    if names is None:
        names = ["x"] if c == 1 else [f"x{i}" for i in range(1, c + 1)]
    if len(names) != c:
        raise ValueError("one name per generator")
    all_names = list(names) + [f"{nm}bar" for nm in names]

    def letter(i):
        if i == 0 or abs(i) > c:
            raise IndexError(f"relator letter {i} outside ±1..±{c}")
        return i if i > 0 else c - i

    one = NcPoly.constant(1, field)
    rels = []
    for i in range(1, c + 1):
        rels.append(NcPoly.monomial((i, c + i), 1, field) - one)
    for i in range(1, c + 1):
        rels.append(NcPoly.monomial((c + i, i), 1, field) - one)
    for r in relators:
        r = list(r)
        if not r:
            raise ValueError("empty relator")
        for u, v in zip(r, r[1:]):
            if u == -v:
                raise ValueError(f"relator {r} is not freely reduced")
        rels.append(NcPoly.monomial(tuple(letter(i) for i in r), 1, field) - one)
    return Presentation(tuple(all_names), tuple(rels), field)


def construction_size(p: Presentation) -> int:
    """Number of quiver vertices: one more than the longest relation word, at least 2."""
    longest = max((len(w) for r in p.relations for w in r.terms), default=0)
    return max(2, 1 + longest)
