"""Knuth-Bendix ordering over the first-order view of terms, literal
selection, and eligibility.

The comparison treats the encoding's symbols as ordinary ones: binary
application, the lambda constructor, and each De Bruijn index get their
own precedence entries, below all signature symbols.  Free variables
are ordering variables with the usual occurrence condition, so the
ordering is total on ground terms and stable under substitution on the
lambda-free fragment; comparisons that the weight/precedence scheme
cannot orient (which includes most pairs that differ under a binder)
come back INCOMPARABLE rather than being guessed.
"""

from __future__ import annotations

from typing import Optional

from .clauses import Clause, Literal
from .terms import App, Bound, Lam, Subst, Sym, Term, Var, occurs_free, var_counts

GREATER = "GREATER"
LESS = "LESS"
EQUAL = "EQUAL"
INCOMPARABLE = "INCOMPARABLE"

_FLIP = {GREATER: LESS, LESS: GREATER, EQUAL: EQUAL, INCOMPARABLE: INCOMPARABLE}


class KBO:
    """Weights default to 1 for every symbol (so a term's weight is its
    encoded node count); precedence ranks signature symbols above the
    encoding's own symbols."""

    def __init__(self, rank: Optional[dict] = None, weights: Optional[dict] = None):
        self.rank = rank or {}
        self.weights = weights or {}

    # -- construction -------------------------------------------------

    @classmethod
    def from_counts(cls, counts: dict, mode: str = "frequency") -> "KBO":
        """Precedence from symbol statistics of the input problem.
        frequency: rarer symbols are greater (ties by name);
        occurrence: symbols first seen later are greater."""
        if mode == "frequency":
            order = sorted(counts, key=lambda n: (-counts[n], n))
        elif mode == "occurrence":
            order = list(counts)
        else:
            raise ValueError("unknown precedence mode %r" % mode)
        return cls(rank={n: i for i, n in enumerate(order)})

    @classmethod
    def from_clauses(cls, clause_sets, mode: str = "frequency") -> "KBO":
        counts: dict = {}

        def walk(t):
            tt = type(t)
            if tt is Sym:
                counts[t.name] = counts.get(t.name, 0) + 1
            elif tt is App:
                walk(t.fun)
                walk(t.arg)
            elif tt is Lam:
                walk(t.body)

        for clauses in clause_sets:
            for c in clauses:
                for l in c.lits:
                    walk(l.lhs)
                    walk(l.rhs)
        return cls.from_counts(counts, mode)

    # -- weights -------------------------------------------------------

    def weight(self, t: Term) -> int:
        if not self.weights:
            return t.size
        w = 0
        stack = [t]
        while stack:
            u = stack.pop()
            tt = type(u)
            if tt is App:
                w += self.weights.get("app", 1)
                stack.append(u.fun)
                stack.append(u.arg)
            elif tt is Lam:
                w += self.weights.get("lam", 1)
                stack.append(u.body)
            elif tt is Sym:
                w += self.weights.get(u.name, 1)
            else:
                w += 1
        return w

    # -- comparison ----------------------------------------------------

    def _head_key(self, t: Term):
        tt = type(t)
        if tt is Bound:
            return (0, t.index, repr(t.ty))
        if tt is App:
            return (1, 0, "")
        if tt is Lam:
            return (2, 0, repr(t.arg_ty))
        # Sym: ranked symbols sit below symbols unseen at rank time
        # (skolems introduced mid-run), which order by name
        r = self.rank.get(t.name)
        if r is None:
            return (4, 0, t.name + "/" + repr(t.ty_args))
        return (3, r, t.name + "/" + repr(t.ty_args))

    def compare(self, s: Term, t: Term) -> str:
        if s == t:
            return EQUAL
        if type(s) is Var:
            return LESS if occurs_free(s.vid, t) else INCOMPARABLE
        if type(t) is Var:
            return GREATER if occurs_free(t.vid, s) else INCOMPARABLE
        sc = var_counts(s, {})
        tc = var_counts(t, {})
        ge = all(sc.get(v, 0) >= n for v, n in tc.items())
        le = all(tc.get(v, 0) >= n for v, n in sc.items())
        if not ge and not le:
            return INCOMPARABLE
        ws = self.weight(s)
        wt = self.weight(t)
        if ws > wt:
            return GREATER if ge else INCOMPARABLE
        if ws < wt:
            return LESS if le else INCOMPARABLE
        hs = self._head_key(s)
        ht = self._head_key(t)
        if hs > ht:
            return GREATER if ge else INCOMPARABLE
        if hs < ht:
            return LESS if le else INCOMPARABLE
        for cs, ct in zip(_children(s), _children(t)):
            r = self.compare(cs, ct)
            if r == EQUAL:
                continue
            if r == GREATER:
                return GREATER if ge else INCOMPARABLE
            if r == LESS:
                return LESS if le else INCOMPARABLE
            return INCOMPARABLE
        return INCOMPARABLE


def _children(t: Term) -> tuple:
    tt = type(t)
    if tt is App:
        return (t.fun, t.arg)
    if tt is Lam:
        return (t.body,)
    return ()


# ---------------------------------------------------------------------------
# literal comparison (multiset extension)

def _lit_multiset(l: Literal) -> list:
    if l.positive:
        return [l.lhs, l.rhs]
    return [l.lhs, l.lhs, l.rhs, l.rhs]


def multiset_compare(ord_: KBO, xs: list, ys: list) -> str:
    xs = list(xs)
    ys = list(ys)
    i = 0
    while i < len(xs):
        for j, y in enumerate(ys):
            if xs[i] == y:
                del xs[i]
                del ys[j]
                break
        else:
            i += 1
    if not xs and not ys:
        return EQUAL
    if not xs:
        return LESS
    if not ys:
        return GREATER
    if all(any(ord_.compare(x, y) == GREATER for x in xs) for y in ys):
        return GREATER
    if all(any(ord_.compare(y, x) == GREATER for y in ys) for x in xs):
        return LESS
    return INCOMPARABLE


def lit_compare(ord_: KBO, a: Literal, b: Literal) -> str:
    return multiset_compare(ord_, _lit_multiset(a), _lit_multiset(b))


# ---------------------------------------------------------------------------
# selection and eligibility

def select(ord_: KBO, clause: Clause, mode: str = "paper") -> frozenset:
    """Literal selection: one negative non-flex-flex literal whose
    heavier side is heaviest over the clause (ties to the lowest index),
    or nothing when mode is "none" or no literal qualifies."""
    if mode == "none":
        return frozenset()
    if mode != "paper":
        raise ValueError("unknown selection mode %r" % mode)
    best = None
    best_w = -1
    for i, l in enumerate(clause.lits):
        if l.positive or l.flex_flex:
            continue
        w = max(ord_.weight(l.lhs), ord_.weight(l.rhs))
        if w > best_w:
            best, best_w = i, w
    return frozenset() if best is None else frozenset((best,))


def eligible(
    ord_: KBO,
    clause: Clause,
    i: int,
    subst: Subst,
    strict: bool,
    selection: frozenset,
) -> bool:
    """A literal is eligible w.r.t. a substitution if it is selected, or
    if nothing is selected and its instance is (strictly) maximal in the
    instantiated clause."""
    if selection:
        return i in selection and not (strict and clause.lits[i].positive)
    li = clause.lits[i].apply(subst)
    mi = _lit_multiset(li)
    for j, lj in enumerate(clause.lits):
        if j == i:
            continue
        c = multiset_compare(ord_, _lit_multiset(lj.apply(subst)), mi)
        if c == GREATER or (strict and c == EQUAL):
            return False
    return True
