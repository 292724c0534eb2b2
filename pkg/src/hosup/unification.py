"""Depth-bounded unification.

The procedure explores the usual preunification tree, but instead of
running to undecidability it carries a depth budget spent only on
imitation and projection steps.  First-order steps are free: trivial
pair deletion, rigid-rigid decomposition, and binding of a bare
variable (with occurs check).  Flex-flex pairs are never worked on.

Every success leaf yields a ConstrainedUnifier: the substitution built
so far plus the pairs that remain, which the calculus turns into
negative constraint literals.  Three kinds of leaves exist:

  * all remaining pairs are flex-flex (a genuine preunifier);
  * the budget is zero and flex-rigid pairs remain (they are emitted
    as constraints untouched);
  * a step consumed the last budget unit: the procedure halts right
    after applying that binding and emits the then-current pairs
    without further decomposition, dropping pairs made trivial and
    pruning the branch if a rigid-rigid clash surfaced.

Pairs produced under binders are re-wrapped in their lambdas before
being emitted, so constraints are always closed.

Binding a bare variable is skipped (the pair is left for imitation or
projection) when the other side mentions a locally bound variable,
since a later binding of some inner flexible head can still remove it.
A bare variable that occurs in the opposite rigid side prunes the
branch.
"""

from __future__ import annotations

from typing import Optional

from .holtypes import TArrow, TVar, arrow, resolve_ty, split_arrow, unify_types
from .terms import (
    App,
    Bound,
    Lam,
    Subst,
    Sym,
    Term,
    Var,
    VarGen,
    app,
    apps,
    eta_expand1,
    head_of,
    is_flex,
    max_var_id,
    occurs_free,
    spine_args,
    subst_term,
)


class ConstrainedUnifier:
    """A substitution, the unification pairs it leaves unsolved (already
    under the substitution), and how many depth units were spent.  If
    constraints is empty the substitution is an actual unifier.  `steps`
    records the binding chain, free bindings included, for tree replay
    and for the refinement relation between depths."""

    __slots__ = ("subst", "constraints", "depth_used", "steps")

    def __init__(self, subst, constraints, depth_used, steps=()):
        self.subst = subst
        self.constraints = constraints
        self.depth_used = depth_used
        self.steps = steps

    def __repr__(self):
        from .terms import pp

        cs = ", ".join("%s != %s" % (pp(a), pp(b)) for a, b in self.constraints)
        return "<unifier %r {%s} depth=%d>" % (self.subst, cs, self.depth_used)


class TraceNode:
    """Node of the unification tree, kept only when tracing for the CLI."""

    __slots__ = ("label", "pairs", "children", "outcome")

    def __init__(self, label, pairs=()):
        self.label = label
        self.pairs = pairs
        self.children = []
        self.outcome = ""


def _snapshot(pairs):
    from .terms import pp

    return tuple("%s =?= %s" % (pp(u), pp(v)) for u, v, _ in pairs)


# ---------------------------------------------------------------------------
# binding construction

def _bound_args(atys):
    n = len(atys)
    return [Bound(n - 1 - i, atys[i]) for i in range(n)]


def _wrap_lams(atys, body):
    for ty in reversed(atys):
        body = Lam(ty, body)
    return body


def imitation_binding(flex: Term, rigid: Term, fresh: VarGen):
    """Binding that copies the rigid head: for x applied to n arguments
    against h applied to m, x <- \\y1..yn. h (z1 y..) .. (zm y..).
    Returns None when the rigid head is a De Bruijn index, which is out
    of scope inside the new abstraction."""
    h = head_of(rigid)
    if type(h) is not Sym:
        return None
    x = head_of(flex)
    atys = [a.ty for a in spine_args(flex)]
    btys = [a.ty for a in spine_args(rigid)]
    ys = _bound_args(atys)
    body = h
    for bty in btys:
        z = fresh.fresh(arrow(atys, bty))
        body = App(body, apps(z, ys))
    return x.vid, _wrap_lams(atys, body)


def projection_bindings(flex: Term, fresh: VarGen):
    """All bindings x <- \\y1..yn. yi (z1 y..) .. (zq y..) whose result
    type can unify with the type of the flex term.  Returns a list of
    (vid, binding, type-substitution) triples in argument order."""
    x = head_of(flex)
    target = flex.ty
    atys = [a.ty for a in spine_args(flex)]
    out = []
    for i, aty in enumerate(atys):
        ci_args, ci_res = split_arrow(aty)
        for q in range(len(ci_args) + 1):
            res_q = arrow(ci_args[q:], ci_res)
            tym = unify_types(res_q, target)
            if tym is None:
                continue
            tym = {n: resolve_ty(TVar(n), tym) for n in tym}
            ys = _bound_args(atys)
            body = ys[i]
            for cty in ci_args[:q]:
                z = fresh.fresh(arrow(atys, cty))
                body = App(body, apps(z, ys))
            binding = _wrap_lams(atys, body)
            if tym:
                binding = subst_term(binding, {}, tym)
            out.append((x.vid, binding, tym))
    return out


# ---------------------------------------------------------------------------
# the tree

_OK, _FAIL = True, False


def _apply_to_pairs(pairs, tmap, tymap):
    return [
        (subst_term(u, tmap, tymap), subst_term(v, tmap, tymap), bs) for u, v, bs in pairs
    ]


def _simpl(pairs, subst, steps):
    """Run the free steps to fixpoint.  Returns (pairs, subst, steps, ok);
    surviving pairs are flex-rigid or flex-flex."""
    pairs = list(pairs)
    i = 0
    while i < len(pairs):
        u, v, bs = pairs[i]
        if u == v:
            del pairs[i]
            i = 0
            continue
        tu = type(u)
        tv = type(v)
        if tu is Var or tv is Var:
            x, w = (u, v) if tu is Var else (v, u)
            if is_flex(w):
                i += 1  # flex-flex, deferred
                continue
            if occurs_free(x.vid, w):
                return pairs, subst, steps, _FAIL
            if w.max_loose >= 0:
                i += 1  # mentions a local; leave for imitation/projection
                continue
            subst = subst.bind(x.vid, w)
            steps = steps + (("bind", x.vid, w),)
            del pairs[i]
            pairs = _apply_to_pairs(pairs, {x.vid: w}, {})
            i = 0
            continue
        if tu is Lam and tv is Lam:
            pairs[i] = (u.body, v.body, bs + (u.arg_ty,))
            continue
        if tu is Lam or tv is Lam:
            if tu is Lam:
                pairs[i] = (u, eta_expand1(v), bs)
            else:
                pairs[i] = (eta_expand1(u), v, bs)
            continue
        hu = head_of(u)
        hv = head_of(v)
        fu = type(hu) is Var
        fv = type(hv) is Var
        if not fu and not fv:
            if hu != hv:
                return pairs, subst, steps, _FAIL
            ua = spine_args(u)
            va = spine_args(v)
            pairs[i : i + 1] = [(a, b, bs) for a, b in zip(ua, va)]
            i = 0
            continue
        i += 1  # flex-rigid or flex-flex
    return pairs, subst, steps, _OK


def _is_flex_rigid(u, v):
    return is_flex(u) != is_flex(v)


def _wrap_constraints(pairs):
    out = []
    for u, v, bs in pairs:
        for ty in reversed(bs):
            u = Lam(ty, u)
            v = Lam(ty, v)
        out.append((u, v))
    return tuple(out)


def _halt_filter(pairs):
    """At budget exhaustion: drop trivial pairs, detect rigid clashes.
    Returns the surviving pairs or None when the branch is dead."""
    keep = []
    for u, v, bs in pairs:
        if u == v:
            continue
        if type(u) is not Lam and type(v) is not Lam:
            hu = head_of(u)
            hv = head_of(v)
            if type(hu) is not Var and type(hv) is not Var and hu != hv:
                return None
        keep.append((u, v, bs))
    return keep


def _explore(pairs, subst, used, budget, steps, fresh, results, node):
    pairs, subst, steps, ok = _simpl(pairs, subst, steps)
    if node is not None:
        node.pairs = _snapshot(pairs)
    if not ok:
        if node is not None:
            node.outcome = "fail"
        return
    branch_at = -1
    for idx, (u, v, _) in enumerate(pairs):
        if _is_flex_rigid(u, v):
            branch_at = idx
            break
    if branch_at < 0 or budget == 0:
        cu = ConstrainedUnifier(subst, _wrap_constraints(pairs), used, steps)
        results.append(cu)
        if node is not None:
            node.outcome = "unifier" if branch_at < 0 else "budget exhausted"
        return
    u, v, bs = pairs[branch_at]
    if not is_flex(u):
        u, v = v, u
    candidates = []
    im = imitation_binding(u, v, fresh)
    if im is not None:
        candidates.append(("imitate", im[0], im[1], {}))
    for vid, binding, tym in projection_bindings(u, fresh):
        candidates.append(("project", vid, binding, tym))
    if not candidates and node is not None:
        node.outcome = "fail"
    for label, vid, binding, tym in candidates:
        s2 = subst.bind_types(tym) if tym else subst
        s2 = s2.bind(vid, binding)
        np = _apply_to_pairs(pairs, {vid: binding}, tym)
        nsteps = steps + ((label, vid, binding),)
        child = None
        if node is not None:
            from .terms import pp

            child = TraceNode("%s X%d <- %s" % (label, vid, pp(binding)))
            node.children.append(child)
        if budget == 1:
            kept = _halt_filter(np)
            if kept is None:
                if child is not None:
                    child.outcome = "fail"
                continue
            cu = ConstrainedUnifier(s2, _wrap_constraints(kept), used + 1, nsteps)
            results.append(cu)
            if child is not None:
                child.pairs = _snapshot(kept)
                child.outcome = "stopped at depth limit"
        else:
            _explore(np, s2, used + 1, budget - 1, nsteps, fresh, results, child)


def depth_n_unifiers(
    s: Term,
    t: Term,
    depth: int,
    fresh_start: Optional[int] = None,
    trace: Optional[TraceNode] = None,
) -> list:
    """Enumerate the constrained unifiers of s and t within the given
    depth budget, in deterministic tree order (imitation first, then
    projections by argument position).  Types are unified first; a type
    clash yields no results."""
    tym = unify_types(s.ty, t.ty)
    if tym is None:
        return []
    tym = {n: resolve_ty(TVar(n), tym) for n in tym}
    subst = Subst({}, tym)
    if tym:
        s = subst.apply(s)
        t = subst.apply(t)
    if fresh_start is None:
        fresh_start = max(max_var_id(s), max_var_id(t)) + 1
    fresh = VarGen(fresh_start)
    results: list = []
    _explore([(s, t, ())], subst, 0, depth, (), fresh, results, trace)
    return results


# ---------------------------------------------------------------------------
# one-sided matching on the encoding

def match_term(pattern: Term, target: Term, tmap=None, tymap=None):
    """Syntactic match of the first-order views: find bindings for the
    pattern's variables making it equal to the target.  Returns the pair
    (tmap, tymap) or None.  Target variables are constants; a pattern
    variable never captures a local of the target."""
    from .holtypes import match_types

    tmap = {} if tmap is None else dict(tmap)
    tymap = {} if tymap is None else dict(tymap)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        tp = type(p)
        if tp is Var:
            seen = tmap.get(p.vid)
            if seen is not None:
                if seen != t:
                    return None
                continue
            if t.max_loose >= 0:
                return None
            tymap = match_types(p.ty, t.ty, tymap)
            if tymap is None:
                return None
            tmap[p.vid] = t
            continue
        tt = type(t)
        if tp is not tt:
            return None
        if tp is App:
            stack.append((p.fun, t.fun))
            stack.append((p.arg, t.arg))
        elif tp is Lam:
            tymap = match_types(p.arg_ty, t.arg_ty, tymap)
            if tymap is None:
                return None
            stack.append((p.body, t.body))
        elif tp is Sym:
            if p.name != t.name or len(p.ty_args) != len(t.ty_args):
                return None
            for a, b in zip(p.ty_args, t.ty_args):
                tymap = match_types(a, b, tymap)
                if tymap is None:
                    return None
        elif tp is Bound:
            if p.index != t.index:
                return None
            tymap = match_types(p.ty, t.ty, tymap)
            if tymap is None:
                return None
        else:
            return None
    return tmap, tymap


# ---------------------------------------------------------------------------
# first-order unification on the encoding

def applicative_unify(s: Term, t: Term) -> Optional[Subst]:
    """Syntactic unification of the first-order views: application and
    lambda are plain binary/unary constructors and De Bruijn indices are
    constants.  No beta steps, no new bindings under binders (a variable
    never captures a local), occurs check applies, and no constraints
    are ever produced."""
    tym = unify_types(s.ty, t.ty)
    if tym is None:
        return None
    tym = {n: resolve_ty(TVar(n), tym) for n in tym}
    subst = Subst({}, tym)
    pairs = [(subst.apply(s) if tym else s, subst.apply(t) if tym else t)]
    while pairs:
        u, v = pairs.pop()
        u = subst.apply(u)
        v = subst.apply(v)
        if u == v:
            continue
        tu = type(u)
        tv = type(v)
        if tu is Var or tv is Var:
            x, w = (u, v) if tu is Var else (v, u)
            if occurs_free(x.vid, w) or w.max_loose >= 0:
                return None
            tym2 = unify_types(x.ty, w.ty, dict(subst.tymap))
            if tym2 is None:
                return None
            tym2 = {n: resolve_ty(TVar(n), tym2) for n in tym2}
            subst = subst.bind_types(tym2).bind(x.vid, subst_term(w, {}, tym2))
            continue
        if tu is not tv:
            return None
        if tu is App:
            pairs.append((u.fun, v.fun))
            pairs.append((u.arg, v.arg))
        elif tu is Lam:
            tym2 = unify_types(u.arg_ty, v.arg_ty, dict(subst.tymap))
            if tym2 is None:
                return None
            subst = subst.bind_types({n: resolve_ty(TVar(n), tym2) for n in tym2})
            pairs.append((u.body, v.body))
        elif tu is Sym:
            if u.name != v.name or len(u.ty_args) != len(v.ty_args):
                return None
            tym2 = dict(subst.tymap)
            for a, b in zip(u.ty_args, v.ty_args):
                tym2 = unify_types(a, b, tym2)
                if tym2 is None:
                    return None
            subst = subst.bind_types({n: resolve_ty(TVar(n), tym2) for n in tym2})
        elif tu is Bound:
            if u.index != v.index:
                return None
            tym2 = unify_types(u.ty, v.ty, dict(subst.tymap))
            if tym2 is None:
                return None
            subst = subst.bind_types({n: resolve_ty(TVar(n), tym2) for n in tym2})
        else:
            return None
    return subst
