"""Public term API: backend selection, signatures, substitutions,
first-order positions, printers, and validators.

The node classes and hot operations live in hosup._termops, which is
compiled to a C extension when possible.  This module picks the backend
at import time (set HOSUP_PURE=1 to force the interpreted one) and
re-exports everything, so the rest of the package never imports
_termops directly.
"""

from __future__ import annotations

import importlib.util
import os
import re
import sys
from dataclasses import dataclass
from typing import Iterable, Optional

from .holtypes import TYPE_O, TArrow, TCon, TVar, Type, subst_ty


def _load_backend():
    if os.environ.get("HOSUP_PURE") == "1":
        path = os.path.join(os.path.dirname(__file__), "_termops.py")
        spec = importlib.util.spec_from_file_location("hosup._termops_pure", path)
        mod = importlib.util.module_from_spec(spec)
        sys.modules["hosup._termops_pure"] = mod
        spec.loader.exec_module(mod)
        return mod
    from . import _termops

    return _termops


_k = _load_backend()

Term = _k.Term
Var = _k.Var
Bound = _k.Bound
Sym = _k.Sym
Lam = _k.Lam
App = _k.App

head_of = _k.head_of
is_flex = _k.is_flex
spine_args = _k.spine_args
shift = _k.shift
bsubst = _k.bsubst
beta_normalize = _k.beta_normalize
subst_term = _k.subst_term
eta_expand1 = _k.eta_expand1
def free_var_ids(t, acc=None):
    if acc is None:
        acc = set()
    _k.free_var_ids(t, acc)
    return acc


def free_vars(t, acc=None):
    """Free variables of t as {vid: Var}."""
    if acc is None:
        acc = {}
    _k.free_vars(t, acc)
    return acc


def var_counts(t, acc=None):
    """Occurrence counts of free variables in t."""
    if acc is None:
        acc = {}
    _k.var_counts(t, acc)
    return acc
occurs_free = _k.occurs_free
max_var_id = _k.max_var_id

BACKEND = "compiled" if _k.__file__.endswith((".so", ".pyd")) else "interpreted"


class TermError(Exception):
    pass


def mk_app(fun: Term, *args: Term) -> Term:
    """Apply fun to the given arguments, maintaining beta-normal form.
    Raises TermError when an argument type does not match."""
    for a in args:
        fty = fun.ty
        if not isinstance(fty, TArrow):
            raise TermError("cannot apply term of non-function type %r" % fty)
        if fty.lhs != a.ty:
            raise TermError(
                "argument type mismatch: function expects %r, argument has %r"
                % (fty.lhs, a.ty)
            )
        fun = _k.mk_app(fun, a)
    return fun


# unchecked fast paths, for code that guarantees well-typedness
app = _k.mk_app
apps = _k.mk_apps


# ---------------------------------------------------------------------------
# signature

_RESERVED = re.compile(r"^(app|lam|d[0-9]+)$")


@dataclass(frozen=True)
class TypeScheme:
    vars: tuple[str, ...]
    ty: Type

    def instantiate(self, ty_args: tuple) -> Type:
        if len(ty_args) != len(self.vars):
            raise TermError(
                "symbol expects %d type arguments, got %d" % (len(self.vars), len(ty_args))
            )
        if not self.vars:
            return self.ty
        return subst_ty(self.ty, dict(zip(self.vars, ty_args)))


class Signature:
    """Symbol table: maps names to type schemes.  The encoding's own
    symbols (app, lam, d0, d1, ...) are reserved and cannot be declared
    by input problems."""

    def __init__(self):
        self.decls: dict[str, TypeScheme] = {}
        self.sorts: set[str] = {"$i", "$o"}
        self._fresh = 0
        self.declare("$true", TYPE_O)
        self.declare("$false", TYPE_O)

    def declare_sort(self, name: str):
        if _RESERVED.match(name):
            raise TermError("sort name %r is reserved" % name)
        self.sorts.add(name)

    def declare(self, name: str, ty, ty_params: tuple[str, ...] = ()):
        if _RESERVED.match(name):
            raise TermError("symbol name %r is reserved by the term encoding" % name)
        scheme = TypeScheme(ty_params, ty)
        old = self.decls.get(name)
        if old is not None and old != scheme:
            raise TermError("conflicting redeclaration of %r" % name)
        self.decls[name] = scheme

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def scheme(self, name: str) -> TypeScheme:
        try:
            return self.decls[name]
        except KeyError:
            raise TermError("undeclared symbol %r" % name) from None

    def sym(self, name: str, ty_args: tuple = ()) -> Sym:
        return Sym(name, self.scheme(name).instantiate(ty_args), ty_args)

    def fresh_name(self, prefix: str = "sk") -> str:
        while True:
            name = "%s%d" % (prefix, self._fresh)
            self._fresh += 1
            if name not in self.decls:
                return name

    def fresh_sym(self, ty: Type, prefix: str = "sk", ty_params: tuple[str, ...] = ()) -> str:
        name = self.fresh_name(prefix)
        self.declare(name, ty, ty_params)
        return name


class VarGen:
    """Deterministic fresh-variable supply: a plain counter."""

    __slots__ = ("next_id",)

    def __init__(self, start: int = 0):
        self.next_id = start

    def fresh(self, ty: Type) -> Var:
        v = Var(self.next_id, ty)
        self.next_id += 1
        return v


# ---------------------------------------------------------------------------
# substitutions

class Subst:
    """Idempotent substitution: term bindings keyed by variable id plus a
    type-variable substitution.  Bindings are closed terms and are kept
    fully applied to each other, so applying a Subst once suffices."""

    __slots__ = ("tmap", "tymap")

    def __init__(self, tmap: Optional[dict] = None, tymap: Optional[dict] = None):
        self.tmap = tmap or {}
        self.tymap = tymap or {}

    def __bool__(self):
        return bool(self.tmap) or bool(self.tymap)

    def __eq__(self, other):
        return (
            isinstance(other, Subst)
            and other.tmap == self.tmap
            and other.tymap == self.tymap
        )

    def __hash__(self):
        raise TypeError("Subst is not hashable")

    def apply(self, t: Term) -> Term:
        return subst_term(t, self.tmap, self.tymap)

    def apply_ty(self, ty: Type) -> Type:
        return subst_ty(ty, self.tymap) if self.tymap else ty

    def bind(self, vid: int, t: Term) -> "Subst":
        """Compose with {vid -> t}; t is first brought under this
        substitution, existing bindings are rewritten with the new one."""
        t = self.apply(t)
        assert t.max_loose < 0, "substitution bindings must be closed"
        assert not occurs_free(vid, t), "occurs check must precede bind"
        one = {vid: t}
        tmap = {v: subst_term(b, one, {}) for v, b in self.tmap.items()}
        tmap[vid] = t
        return Subst(tmap, self.tymap)

    def bind_types(self, tymap: dict) -> "Subst":
        """Compose with a type substitution (applied to every binding)."""
        if not tymap:
            return self
        merged = {n: subst_ty(ty, tymap) for n, ty in self.tymap.items()}
        for n, ty in tymap.items():
            if n not in merged:
                merged[n] = ty
        tmap = {v: subst_term(b, {}, tymap) for v, b in self.tmap.items()}
        return Subst(tmap, merged)

    def restrict(self, vids: Iterable[int]) -> "Subst":
        keep = set(vids)
        return Subst({v: b for v, b in self.tmap.items() if v in keep}, dict(self.tymap))

    def __repr__(self):
        items = ["X%d -> %s" % (v, pp(b)) for v, b in sorted(self.tmap.items())]
        items += ["%s -> %r" % (n, ty) for n, ty in sorted(self.tymap.items())]
        return "{%s}" % ", ".join(items)


EMPTY_SUBST = Subst()


# ---------------------------------------------------------------------------
# positions and first-order subterms

@dataclass(frozen=True)
class Position:
    """Path of spine-argument indices from the root.  Heads of application
    spines are prefixes, not subterms; positions never cross a lambda."""

    path: tuple[int, ...] = ()
    is_prefix: bool = False
    is_below_lambda: bool = False


def first_order_subterms(t: Term) -> list[tuple[Position, Term]]:
    """All subterms at first-order positions: the root, spine arguments,
    and their first-order subterms, in preorder left to right.  Spine
    prefixes are excluded and lambdas are not entered."""
    out = []

    def walk(u, path):
        out.append((Position(path), u))
        for i, a in enumerate(spine_args(u)):
            walk(a, path + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        t = spine_args(t)[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    """Replace the subterm at a first-order position.  The replacement
    must have the type of what it replaces."""
    if not path:
        if new.ty != t.ty:
            raise TermError("replacement changes type %r to %r" % (t.ty, new.ty))
        return new
    args = spine_args(t)
    head = head_of(t)
    i = path[0]
    args[i] = replace_at(args[i], path[1:], new)
    return apps(head, args)


# ---------------------------------------------------------------------------
# printers

def _ty_str(ty: Type) -> str:
    if isinstance(ty, TArrow):
        lhs = _ty_str(ty.lhs)
        if isinstance(ty.lhs, TArrow):
            lhs = "(%s)" % lhs
        return "%s > %s" % (lhs, _ty_str(ty.rhs))
    return repr(ty)


def pp(t: Term, depth: int = 0) -> str:
    """Human-oriented printer: juxtaposed spine application, lambdas as
    named binders (the binder introduced at level k prints as Yk)."""
    tt = type(t)
    if tt is Var:
        return "X%d" % t.vid
    if tt is Sym:
        return t.name
    if tt is Bound:
        return "Y%d" % (depth - 1 - t.index)
    if tt is Lam:
        return "λY%d:%s. %s" % (depth, _ty_str(t.arg_ty), pp(t.body, depth + 1))
    head = t.head
    parts = [pp(head, depth)]
    if type(head) is Lam:
        parts[0] = "(%s)" % parts[0]
    for a in spine_args(t):
        s = pp(a, depth)
        if type(a) is App or type(a) is Lam:
            s = "(%s)" % s
        parts.append(s)
    return " ".join(parts)


def thf_type(ty: Type) -> str:
    if isinstance(ty, TArrow):
        lhs = thf_type(ty.lhs)
        if isinstance(ty.lhs, TArrow):
            lhs = "(%s)" % lhs
        return "%s > %s" % (lhs, thf_type(ty.rhs))
    if isinstance(ty, TVar):
        raise TermError("type variable %r has no THF rendering" % ty)
    if isinstance(ty, TCon) and not ty.args:
        return ty.name
    raise TermError("type %r has no THF rendering" % ty)


def thf_term(t: Term, depth: int = 0) -> str:
    """Strict THF rendering, reparseable by hosup.tptp (free variables
    print as X<id> and are treated as free by the term parser)."""
    tt = type(t)
    if tt is Var:
        return "X%d" % t.vid
    if tt is Sym:
        return t.name
    if tt is Bound:
        return "Y%d" % (depth - 1 - t.index)
    if tt is Lam:
        return "(^ [Y%d : %s] : %s)" % (depth, thf_type(t.arg_ty), thf_term(t.body, depth + 1))
    return "(%s @ %s)" % (thf_term(t.fun, depth), thf_term(t.arg, depth))


def raw_encoding(t: Term, with_types: bool = False) -> str:
    """The first-order view of a term, written with the app/lam/d symbols
    (typed form includes the type arguments)."""
    tt = type(t)
    if tt is Var:
        return "X%d" % t.vid
    if tt is Sym:
        return t.name
    if tt is Bound:
        return "d%d(%r)" % (t.index, t.ty) if with_types else "d%d" % t.index
    if tt is Lam:
        if with_types:
            return "lam(%r,%r,%s)" % (t.arg_ty, t.body.ty, raw_encoding(t.body, True))
        return "lam(%s)" % raw_encoding(t.body, False)
    if with_types:
        return "app(%r,%r,%s,%s)" % (
            t.fun.ty.lhs,
            t.fun.ty.rhs,
            raw_encoding(t.fun, True),
            raw_encoding(t.arg, True),
        )
    return "app(%s,%s)" % (raw_encoding(t.fun, False), raw_encoding(t.arg, False))


# ---------------------------------------------------------------------------
# validation (tests and debugging)

def check_term(t: Term, binders: Optional[list] = None) -> Type:
    """Recompute the type of t bottom-up, verifying stored types, spine
    normality, and that De Bruijn indices are in scope.  Returns the
    type; raises TermError on any violation."""
    binders = binders if binders is not None else []
    tt = type(t)
    if tt is Var or tt is Sym:
        return t.ty
    if tt is Bound:
        if t.index >= len(binders):
            raise TermError("loose De Bruijn index %d" % t.index)
        if binders[-1 - t.index] != t.ty:
            raise TermError(
                "index %d annotated %r but binder has %r"
                % (t.index, t.ty, binders[-1 - t.index])
            )
        return t.ty
    if tt is Lam:
        binders.append(t.arg_ty)
        bty = check_term(t.body, binders)
        binders.pop()
        ty = TArrow(t.arg_ty, bty)
        if ty != t.ty:
            raise TermError("lambda annotated %r, computed %r" % (t.ty, ty))
        return ty
    if tt is App:
        if type(t.fun) is Lam:
            raise TermError("beta redex stored in term: %s" % pp(t))
        fty = check_term(t.fun, binders)
        aty = check_term(t.arg, binders)
        if not isinstance(fty, TArrow) or fty.lhs != aty:
            raise TermError("ill-typed application: %r applied to %r" % (fty, aty))
        if fty.rhs != t.ty:
            raise TermError("application annotated %r, computed %r" % (t.ty, fty.rhs))
        return t.ty
    raise TermError("unknown node %r" % tt)
