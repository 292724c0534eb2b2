"""Inference rules over constrained clauses.

Unification never branches beyond its depth budget; whatever it leaves
open comes back as negative constraint literals appended to the
conclusion.  In applicative mode the rules call plain first-order
unification instead and no constraints ever appear.  Imitate and
Project exist to recover the bindings depth zero cannot try: they are
active exactly when the budget is zero and the mode is higher-order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .clauses import Clause, Literal, rename_apart
from .holtypes import TArrow, TVar, split_arrow
from .ordering import GREATER, LESS, KBO, eligible, select
from .terms import (
    EMPTY_SUBST,
    Subst,
    Var,
    VarGen,
    apps,
    first_order_subterms,
    free_var_ids,
    is_flex,
    replace_at,
    subst_term,
)
from .unification import (
    ConstrainedUnifier,
    applicative_unify,
    depth_n_unifiers,
    imitation_binding,
    projection_bindings,
)


@dataclass(frozen=True)
class Draft:
    """A conclusion before it is registered: literals, rule name,
    premise clause ids, and the substitution that produced it."""

    lits: tuple
    rule: str
    premises: tuple
    subst: Subst


def _constraint_lits(cu: ConstrainedUnifier) -> list:
    return [Literal(a, b, False, is_constraint=True) for a, b in cu.constraints]


def _vids(clause: Clause) -> set:
    ids: set = set()
    for l in clause.lits:
        free_var_ids(l.lhs, ids)
        free_var_ids(l.rhs, ids)
    return ids


class Rules:
    def __init__(
        self,
        ord_: KBO,
        depth: int = 1,
        applicative: bool = False,
        selection: str = "paper",
    ):
        self.ord = ord_
        self.depth = depth
        self.applicative = applicative
        self.selection = selection

    # -- shared pieces -------------------------------------------------

    def select(self, clause: Clause) -> frozenset:
        return select(self.ord, clause, self.selection)

    def _sel(self, clause: Clause) -> frozenset:
        if clause.sel is None:
            clause.sel = self.select(clause)
        return clause.sel

    def unifiers(self, s, t, fresh_start: int) -> list:
        if self.applicative:
            sub = applicative_unify(s, t)
            return [] if sub is None else [ConstrainedUnifier(sub, (), 0)]
        return depth_n_unifiers(s, t, self.depth, fresh_start)

    # -- equality resolution --------------------------------------------

    def eq_res(self, clause: Clause) -> list:
        out = []
        sel = self._sel(clause)
        fresh_start = clause.max_var_id() + 1
        for i, lit in enumerate(clause.lits):
            if lit.positive or lit.flex_flex:
                continue
            for cu in self.unifiers(lit.lhs, lit.rhs, fresh_start):
                if not eligible(self.ord, clause, i, cu.subst, False, sel):
                    continue
                lits = [
                    l.apply(cu.subst) for j, l in enumerate(clause.lits) if j != i
                ] + _constraint_lits(cu)
                out.append(Draft(tuple(lits), "eq_res", (clause.cid,), cu.subst))
        return out

    # -- equality factoring ----------------------------------------------

    def eq_fact(self, clause: Clause) -> list:
        out = []
        sel = self._sel(clause)
        if sel:
            return out
        fresh_start = clause.max_var_id() + 1
        pos = [i for i, l in enumerate(clause.lits) if l.positive]
        for i in pos:
            li = clause.lits[i]
            for j in pos:
                if j == i:
                    continue
                lj = clause.lits[j]
                for s, t in ((li.lhs, li.rhs), (li.rhs, li.lhs)):
                    for u, v in ((lj.lhs, lj.rhs), (lj.rhs, lj.lhs)):
                        for cu in self.unifiers(s, u, fresh_start):
                            if not eligible(self.ord, clause, i, cu.subst, False, sel):
                                continue
                            if (
                                self.ord.compare(cu.subst.apply(s), cu.subst.apply(t))
                                == LESS
                            ):
                                continue
                            lits = [
                                l.apply(cu.subst)
                                for k, l in enumerate(clause.lits)
                                if k != i and k != j
                            ]
                            lits.append(
                                Literal(cu.subst.apply(t), cu.subst.apply(v), False)
                            )
                            lits.append(lj.apply(cu.subst))
                            out.append(
                                Draft(tuple(lits), "eq_fact", (clause.cid,), cu.subst)
                            )
        return out

    # -- argument congruence ----------------------------------------------

    def arg_cong(self, clause: Clause) -> list:
        out = []
        sel = self._sel(clause)
        fresh = VarGen(clause.max_var_id() + 1)
        for i, lit in enumerate(clause.lits):
            if not lit.positive:
                continue
            if not eligible(self.ord, clause, i, EMPTY_SUBST, False, sel):
                continue
            ty = lit.lhs.ty
            if type(ty) is TVar:
                # instantiate the result to a fresh arrow and apply once
                a = TVar("Ac%d" % fresh.next_id)
                b = TVar("Ac%d" % (fresh.next_id + 1))
                fresh.next_id += 2
                tym = {ty.name: TArrow(a, b)}
                sub = Subst({}, tym)
                x = fresh.fresh(a)
                lits = [l.apply(sub) for j, l in enumerate(clause.lits) if j != i]
                lits.append(
                    Literal(
                        apps(subst_term(lit.lhs, {}, tym), [x]),
                        apps(subst_term(lit.rhs, {}, tym), [x]),
                        True,
                    )
                )
                out.append(Draft(tuple(lits), "arg_cong", (clause.cid,), sub))
                continue
            if type(ty) is not TArrow:
                continue
            arg_tys, _ = split_arrow(ty)
            others = [l for j, l in enumerate(clause.lits) if j != i]
            for k in range(1, len(arg_tys) + 1):
                xs = [fresh.fresh(t) for t in arg_tys[:k]]
                lits = list(others)
                lits.append(Literal(apps(lit.lhs, xs), apps(lit.rhs, xs), True))
                out.append(
                    Draft(tuple(lits), "arg_cong", (clause.cid,), EMPTY_SUBST)
                )
        return out

    # -- clauses of nothing but flex-flex pairs ---------------------------

    def flex_flex_simp(self, clause: Clause) -> Optional[Draft]:
        if not clause.lits:
            return None
        if all(not l.positive and l.flex_flex for l in clause.lits):
            return Draft((), "flex_flex_simp", (clause.cid,), EMPTY_SUBST)
        return None

    # -- explicit bindings at depth zero -----------------------------------

    def imitate_project(self, clause: Clause) -> list:
        if self.applicative or self.depth != 0:
            return []
        out = []
        sel = self._sel(clause)
        for i, lit in enumerate(clause.lits):
            if lit.positive or lit.flex_flex:
                continue
            if is_flex(lit.lhs) == is_flex(lit.rhs):
                continue
            if not eligible(self.ord, clause, i, EMPTY_SUBST, False, sel):
                continue
            flex, rigid = (
                (lit.lhs, lit.rhs) if is_flex(lit.lhs) else (lit.rhs, lit.lhs)
            )
            fresh = VarGen(clause.max_var_id() + 1)
            im = imitation_binding(flex, rigid, fresh)
            if im is not None:
                vid, binding = im
                sub = Subst({}, {}).bind(vid, binding)
                lits = tuple(l.apply(sub) for l in clause.lits)
                out.append(Draft(lits, "imitate", (clause.cid,), sub))
            for vid, binding, tym in projection_bindings(flex, fresh):
                sub = Subst({}, {})
                if tym:
                    sub = sub.bind_types(tym)
                sub = sub.bind(vid, binding)
                lits = tuple(l.apply(sub) for l in clause.lits)
                out.append(Draft(lits, "project", (clause.cid,), sub))
        return out

    # -- superposition ------------------------------------------------------

    def superpose(self, left: Clause, right: Clause) -> list:
        """Rewrites with a positive equation of `left` inside first-order
        subterms of `right`.  Premises are renamed apart here when they
        share variables (also covering self-superposition).

        Side conditions checked, ordering ones permissive when the
        comparison comes back incomparable: the equation side used is
        not an applied variable, the rewritten subterm is not a
        variable, neither instantiated equation side nor instantiated
        target side is smaller than its partner, the equation is
        strictly eligible in `left` and the target literal eligible in
        `right`, both under the unifier."""
        out = []
        rlits = right.lits
        if left.cid == right.cid or _vids(left) & _vids(right):
            rlits = rename_apart(right.lits, left.max_var_id() + 1)
        rclause = Clause(rlits, cid=right.cid)
        rclause.sel = (
            self._sel(right) if rlits is right.lits else self.select(rclause)
        )
        lsel = self._sel(left)
        if lsel:
            return out
        fresh_start = (
            max(left.max_var_id(), rclause.max_var_id()) + 1
        )
        for i, llit in enumerate(left.lits):
            if not llit.positive:
                continue
            for l, r in ((llit.lhs, llit.rhs), (llit.rhs, llit.lhs)):
                if type(l) is not Var and is_flex(l):
                    # an applied variable unifies with nearly every
                    # subterm in sight; rewriting out of one prunes
                    # nothing and floods the passive set
                    continue
                for j, rlit in enumerate(rclause.lits):
                    for s, v, flip in ((rlit.lhs, rlit.rhs, False), (rlit.rhs, rlit.lhs, True)):
                        for pos, u in first_order_subterms(s):
                            if type(u) is Var:
                                continue
                            for cu in self.unifiers(l, u, fresh_start):
                                sub = cu.subst
                                if self.ord.compare(sub.apply(l), sub.apply(r)) == LESS:
                                    continue
                                if self.ord.compare(sub.apply(s), sub.apply(v)) == LESS:
                                    continue
                                if not eligible(self.ord, left, i, sub, True, lsel):
                                    continue
                                if not eligible(
                                    self.ord, rclause, j, sub, rlit.positive, rclause.sel
                                ):
                                    continue
                                st, rt = s, r
                                if sub.tymap:
                                    # the into position may sit at a type
                                    # variable the unifier instantiates
                                    st = subst_term(s, {}, sub.tymap)
                                    rt = subst_term(r, {}, sub.tymap)
                                news = replace_at(st, pos.path, rt)
                                newlit = Literal(
                                    sub.apply(news) if flip is False else sub.apply(v),
                                    sub.apply(v) if flip is False else sub.apply(news),
                                    rlit.positive,
                                    rlit.is_constraint,
                                )
                                lits = [
                                    x.apply(sub)
                                    for k, x in enumerate(left.lits)
                                    if k != i
                                ]
                                lits += [
                                    x.apply(sub)
                                    for k, x in enumerate(rclause.lits)
                                    if k != j
                                ]
                                lits.append(newlit)
                                lits += _constraint_lits(cu)
                                out.append(
                                    Draft(
                                        tuple(lits),
                                        "sup",
                                        (left.cid, right.cid),
                                        sub,
                                    )
                                )
        return out

    # -- everything a given clause can produce ------------------------------

    def generate(self, given: Clause, actives):
        """Yields drafts as they appear so the caller can stop mid-clause
        when a refutation or a resource limit shows up."""
        yield from self.eq_res(given)
        yield from self.eq_fact(given)
        yield from self.arg_cong(given)
        yield from self.imitate_project(given)
        for other in actives:
            yield from self.superpose(given, other)
            if other.cid != given.cid:
                yield from self.superpose(other, given)
