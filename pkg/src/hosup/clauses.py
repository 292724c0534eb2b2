"""Literals, clauses, and derivation records.

A literal is an (in)equation between terms of equal type; predicate
atoms are represented as equations with $true.  Clauses are literal
tuples with multiset semantics; variables are clause-local and every
stored clause is canonically renamed (free variables numbered by first
occurrence), which keeps derivations and printed proofs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .holtypes import TCon, TVar, Type, subst_ty
from .terms import (
    App,
    Lam,
    Subst,
    Sym,
    Term,
    TermError,
    Var,
    free_vars,
    is_flex,
    max_var_id,
    pp,
    subst_term,
)


class Literal:
    __slots__ = ("lhs", "rhs", "positive", "is_constraint", "flex_flex", "_key")

    def __init__(self, lhs: Term, rhs: Term, positive: bool, is_constraint: bool = False):
        if lhs.ty != rhs.ty:
            raise TermError(
                "literal sides have different types: %r vs %r" % (lhs.ty, rhs.ty)
            )
        self.lhs = lhs
        self.rhs = rhs
        self.positive = positive
        self.is_constraint = is_constraint
        self.flex_flex = is_flex(lhs) and is_flex(rhs)
        self._key = (positive, frozenset((lhs, rhs)))

    def key(self):
        """Identity up to side order (equations are symmetric)."""
        return self._key

    def __eq__(self, other):
        return isinstance(other, Literal) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    @property
    def weight(self) -> int:
        return self.lhs.size + self.rhs.size

    def is_trivially_false(self) -> bool:
        return not self.positive and self.lhs == self.rhs

    def is_trivially_true(self) -> bool:
        return self.positive and self.lhs == self.rhs

    def apply(self, subst: Subst) -> "Literal":
        lhs = subst.apply(self.lhs)
        rhs = subst.apply(self.rhs)
        if lhs is self.lhs and rhs is self.rhs:
            return self
        return Literal(lhs, rhs, self.positive, self.is_constraint)

    def negate(self) -> "Literal":
        return Literal(self.lhs, self.rhs, not self.positive, self.is_constraint)

    def __repr__(self):
        return "%s %s %s" % (pp(self.lhs), "=" if self.positive else "!=", pp(self.rhs))


class Clause:
    """Conclusion of a derivation step: literals plus the record of the
    rule, premise clause ids, and unifier that produced it."""

    __slots__ = ("lits", "cid", "rule", "premises", "subst", "age", "weight", "sel")

    def __init__(
        self,
        lits: tuple,
        cid: int = -1,
        rule: str = "input",
        premises: tuple = (),
        subst: Optional[Subst] = None,
        age: int = 0,
    ):
        self.lits = tuple(lits)
        self.cid = cid
        self.rule = rule
        self.premises = premises
        self.subst = subst
        self.age = age
        self.weight = sum(l.weight for l in self.lits)
        self.sel: Optional[frozenset] = None  # literal selection, filled by the prover

    def is_empty(self) -> bool:
        return not self.lits

    def key(self):
        """Identity up to literal order and equation side order (exact,
        not up to renaming; canonicalize first for renaming quotients)."""
        counts: dict = {}
        for l in self.lits:
            k = l.key()
            counts[k] = counts.get(k, 0) + 1
        return frozenset(counts.items())

    def max_var_id(self) -> int:
        m = -1
        for l in self.lits:
            a = max_var_id(l.lhs)
            b = max_var_id(l.rhs)
            if a > m:
                m = a
            if b > m:
                m = b
        return m

    def __repr__(self):
        if not self.lits:
            return "$false"
        return " | ".join(map(repr, self.lits))


@dataclass(frozen=True)
class Inference:
    """One proof line: a clause together with how it was derived."""

    cid: int
    clause: Clause
    rule: str
    premises: tuple
    subst: Optional[Subst]

    def format(self) -> str:
        just = self.rule
        if self.premises:
            just += " " + ",".join(str(p) for p in self.premises)
        if self.subst and self.subst.tmap:
            just += ", %r" % self.subst
        return "%d. %r [%s]" % (self.cid, self.clause, just)


# ---------------------------------------------------------------------------
# canonical renaming

def _ty_vars_ordered(ty: Type, order: list, seen: set):
    if isinstance(ty, TVar):
        if ty.name not in seen:
            seen.add(ty.name)
            order.append(ty.name)
    elif isinstance(ty, TCon):
        for a in ty.args:
            _ty_vars_ordered(a, order, seen)
    else:  # TArrow
        _ty_vars_ordered(ty.lhs, order, seen)
        _ty_vars_ordered(ty.rhs, order, seen)


def _term_vars_ordered(t: Term, vorder: list, vseen: set, tyorder: list, tyseen: set):
    tt = type(t)
    if tt is Var:
        if t.vid not in vseen:
            vseen.add(t.vid)
            vorder.append((t.vid, t.ty))
        _ty_vars_ordered(t.ty, tyorder, tyseen)
    elif tt is App:
        _term_vars_ordered(t.fun, vorder, vseen, tyorder, tyseen)
        _term_vars_ordered(t.arg, vorder, vseen, tyorder, tyseen)
    elif tt is Lam:
        _ty_vars_ordered(t.arg_ty, tyorder, tyseen)
        _term_vars_ordered(t.body, vorder, vseen, tyorder, tyseen)
    elif tt is Sym:
        for a in t.ty_args:
            _ty_vars_ordered(a, tyorder, tyseen)
    else:  # Bound
        _ty_vars_ordered(t.ty, tyorder, tyseen)


def canonical_lits(lits: tuple) -> tuple:
    """Rename term variables to 0..k-1 and type variables to A0..Am-1 in
    first-occurrence order (literals left to right, lhs before rhs)."""
    vorder: list = []
    vseen: set = set()
    tyorder: list = []
    tyseen: set = set()
    for l in lits:
        _term_vars_ordered(l.lhs, vorder, vseen, tyorder, tyseen)
        _term_vars_ordered(l.rhs, vorder, vseen, tyorder, tyseen)
    tymap = {}
    for i, name in enumerate(tyorder):
        new = "A%d" % i
        if new != name:
            tymap[name] = TVar(new)
    tmap = {}
    for i, (vid, ty) in enumerate(vorder):
        nty = ty if not tymap else _apply_tymap(ty, tymap)
        if vid != i or nty != ty:
            tmap[vid] = Var(i, nty)
    if not tmap and not tymap:
        return lits
    return tuple(
        Literal(
            subst_term(l.lhs, tmap, tymap),
            subst_term(l.rhs, tmap, tymap),
            l.positive,
            l.is_constraint,
        )
        for l in lits
    )


def _apply_tymap(ty: Type, tymap: dict) -> Type:
    return subst_ty(ty, tymap)


def rename_apart(lits: tuple, offset: int) -> tuple:
    """Shift every variable id by offset (used to keep premise variables
    disjoint before a binary inference)."""
    if offset <= 0:
        return lits
    out = []
    for l in lits:
        vs: dict = {}
        free_vars(l.lhs, vs)
        free_vars(l.rhs, vs)
        tmap = {vid: Var(vid + offset, v.ty) for vid, v in vs.items()}
        out.append(
            Literal(
                subst_term(l.lhs, tmap, {}),
                subst_term(l.rhs, tmap, {}),
                l.positive,
                l.is_constraint,
            )
        )
    return tuple(out)


def is_tautology(lits: tuple) -> bool:
    for i, l in enumerate(lits):
        if l.is_trivially_true():
            return True
        for j in range(i + 1, len(lits)):
            m = lits[j]
            if m.positive != l.positive and m._key[1] == l._key[1]:
                return True
    return False


def remove_trivial_lits(lits: tuple) -> tuple:
    return tuple(l for l in lits if not l.is_trivially_false())
