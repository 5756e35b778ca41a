"""Degree-truncated noncommutative Groebner rewriting for k<X : Y>.

The word problem for finitely presented algebras is unsolvable in
general, so completion is cut off at a degree bound ``D`` and the result
carries a certificate.  ``certified`` is True only when normal forms of
every polynomial of degree <= D are provably correct:

* every overlap ambiguity of degree <= D resolves, and
* for inhomogeneous input, every overlap of *any* degree among the final
  rules resolves as well (so the rules form a genuine Groebner basis);
  a high-degree overlap of inhomogeneous rules can collapse to a
  low-degree consequence, so skipping it would not be honest.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import NamedTuple

from .freealg import NcPoly, Presentation, Word, word_key


class DegreeOutOfRange(ValueError):
    pass


class TruncationBudgetExceeded(RuntimeError):
    def __init__(self, msg: str, partial: RewriteSystem):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer tagged with whether it is backed by a certificate."""

    kind: str
    certified: bool

    def __str__(self):
        return f"{self.kind}({'certified' if self.certified else 'heuristic'})"

    def __bool__(self):
        return self.kind in ("Zero", "Equal")


@dataclass(frozen=True)
class RewriteSystem:
    presentation: Presentation
    rules: tuple  # ((leading word, tail NcPoly), ...) sorted by leading word
    degree_bound: int
    certified: bool
    cutoff: tuple = ()  # leading words of consequences dropped for exceeding D

    @property
    def field(self):
        return self.presentation.field

    @property
    def rule_map(self) -> dict:
        return dict(self.rules)

    @property
    def complete_below_bound(self) -> bool:
        return self.certified

    def format_rules(self) -> list[str]:
        names = self.presentation.generator_names
        return [f"{NcPoly.monomial(lw, 1, self.field).format(names)} -> {tail.format(names)}"
                for lw, tail in self.rules]


class _Reducer:
    def __init__(self, rules: dict):
        self.rules = rules
        self.lengths = sorted({len(w) for w in rules})

    def find(self, w: Word):
        rules = self.rules
        for i in range(len(w)):
            for L in self.lengths:
                if i + L > len(w):
                    break
                sub = w[i:i + L]
                if sub in rules:
                    return i, sub
        return None

    def reduce(self, p: NcPoly) -> NcPoly:
        if not self.rules or not p.terms:
            return p
        F = p.field
        todo = dict(p.terms)
        done: dict = {}
        heap = [(_neg_key(w), w) for w in todo]
        heapq.heapify(heap)
        while heap:
            _, w = heapq.heappop(heap)
            c = todo.pop(w, None)
            if c is None or not c:
                continue
            hit = self.find(w)
            if hit is None:
                done[w] = c
                continue
            i, lw = hit
            pre, post = w[:i], w[i + len(lw):]
            for tw, tc in self.rules[lw].terms.items():
                nw = pre + tw + post
                v = todo.get(nw)
                if v is None:
                    todo[nw] = c * tc
                    heapq.heappush(heap, (_neg_key(nw), nw))
                else:
                    v = v + c * tc
                    todo[nw] = v
        return NcPoly._raw({w: c for w, c in done.items() if c}, F)


def _neg_key(w: Word):
    # largest word first
    return (-len(w), tuple(w))


def _monic_rule(p: NcPoly):
    lw, lc = p.leading()
    inv = 1 / lc
    tail = NcPoly._raw({w: -c * inv for w, c in p.terms.items() if w != lw}, p.field)
    return lw, tail


def _overlaps(u: Word, v: Word):
    """Words ``u[:len(u)-k] + v`` where a proper suffix of ``u`` of length k
    equals a proper prefix of ``v``; yields (k, overlap word)."""
    for k in range(1, min(len(u), len(v))):
        if u[len(u) - k:] == v[:k]:
            yield k, u + v[k:]


def complete_truncated(p: Presentation, D: int | None = None, rule_budget: int = 10_000) -> RewriteSystem:
    """Buchberger-style overlap completion truncated at degree ``D``."""
    max_deg = max((r.degree for r in p.relations), default=0)
    if D is None:
        D = max(max_deg, 1)
    if D < max_deg:
        raise DegreeOutOfRange(f"degree bound {D} below the relation degree {max_deg}")
    homogeneous = p.is_homogeneous()
    rules: dict = {}
    cutoff: set = set()

    def snapshot(certified):
        ordered = tuple(sorted(rules.items(), key=lambda kv: word_key(kv[0])))
        return RewriteSystem(p, ordered, D, certified, tuple(sorted(cutoff, key=word_key)))

    def insert(poly: NcPoly, pending: list):
        """Add ``poly`` (already reduced, nonzero) and inter-reduce."""
        lw, tail = _monic_rule(poly)
        if len(lw) > D:
            cutoff.add(lw)
            return
        rules[lw] = tail
        # rules whose leading word now contains lw are re-queued
        for w in [w for w in rules if w != lw and _contains(w, lw)]:
            t = rules.pop(w)
            pending.append(NcPoly.monomial(w, 1, p.field) - t)
        # right-hand sides are kept reduced
        red = _Reducer(rules)
        for w in list(rules):
            t = red.reduce(rules[w])
            if t != rules[w]:
                rules[w] = t
        if len(rules) > rule_budget:
            raise TruncationBudgetExceeded(
                f"more than {rule_budget} rules below degree {D}", snapshot(False))

    def absorb(polys: list):
        while polys:
            q = _Reducer(rules).reduce(polys.pop())
            if q:
                insert(q, polys)

    absorb(list(p.relations))

    processed: set = set()
    while True:
        todo = []
        for (u, tu), (v, tv) in itertools.product(rules.items(), repeat=2):
            for k, w in _overlaps(u, v):
                key = (u, tu, v, tv, k)
                if key in processed or (homogeneous and len(w) > D):
                    continue
                todo.append((word_key(w), key))
        if not todo:
            break
        todo.sort(key=lambda t: t[0])
        for _, key in todo:
            u, tu, v, tv, k = key
            if rules.get(u) != tu or rules.get(v) != tv:
                continue  # superseded by an insertion earlier in this sweep
            processed.add(key)
            # u = A B, v = B C:  (u - tu) C - A (v - tv) = A tv - tu C
            A, C = u[:len(u) - k], v[k:]
            s = (NcPoly.monomial(A, 1, p.field) * tv
                 - tu * NcPoly.monomial(C, 1, p.field))
            s = _Reducer(rules).reduce(s)
            if s:
                absorb([s])

    return snapshot(not cutoff)


def _contains(w: Word, sub: Word) -> bool:
    L = len(sub)
    return any(w[i:i + L] == sub for i in range(len(w) - L + 1))


def normal_form(rs: RewriteSystem, p: NcPoly) -> NcPoly:
    if p.degree > rs.degree_bound:
        raise DegreeOutOfRange(f"degree {p.degree} exceeds the bound {rs.degree_bound}")
    return _Reducer(rs.rule_map).reduce(p)


def is_irreducible(rs: RewriteSystem, w: Word) -> bool:
    return _Reducer(rs.rule_map).find(tuple(w)) is None


class FiltrationDims(NamedTuple):
    dims: tuple
    certified: bool


def irreducible_words(rs: RewriteSystem, up_to: int) -> list[list[Word]]:
    """Irreducible words grouped by length 0..up_to."""
    red = _Reducer(rs.rule_map)
    levels = [[()]]
    a = rs.presentation.a
    for _ in range(up_to):
        nxt = []
        for w in levels[-1]:
            for i in range(1, a + 1):
                nw = w + (i,)
                # only suffixes can newly contain a leading word
                if not any(nw[len(nw) - L:] in red.rules for L in red.lengths if L <= len(nw)):
                    nxt.append(nw)
        levels.append(nxt)
    return levels


def filtration_dims(rs: RewriteSystem, up_to: int) -> FiltrationDims:
    """Cumulative dimensions dim S_0, ..., dim S_up_to of the length filtration."""
    if up_to > rs.degree_bound:
        raise DegreeOutOfRange(f"{up_to} exceeds the bound {rs.degree_bound}")
    levels = irreducible_words(rs, up_to)
    dims = tuple(itertools.accumulate(len(lv) for lv in levels))
    return FiltrationDims(dims, rs.certified)


def is_zero(rs: RewriteSystem, p: NcPoly) -> Verdict:
    nf = normal_form(rs, p)
    return Verdict("Zero" if nf.is_zero() else "Nonzero", rs.certified)
