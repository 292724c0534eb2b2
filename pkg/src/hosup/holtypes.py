"""Simple types for higher-order terms.

The type language is rank-1: base sorts and applied type constructors
(`TCon`), type variables (`TVar`), and right-nested function arrows
(`TArrow`).  Type variables occur in the built-in axiom schemes (for
instance functional extensionality) and in symbol type schemes; parsed
problems are monomorphic.

Types are immutable and compared structurally, with hashes precomputed
at construction.
"""

from __future__ import annotations

from typing import Iterator, Optional


class Type:
    __slots__ = ("_hash",)

    def __hash__(self) -> int:
        return self._hash


class TVar(Type):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("tv", name))

    def __eq__(self, other):
        return self is other or (type(other) is TVar and other.name == self.name)

    __hash__ = Type.__hash__

    def __repr__(self):
        return self.name


class TCon(Type):
    """Applied type constructor; base sorts are nullary TCons."""

    __slots__ = ("name", "args")

    def __init__(self, name: str, args: tuple = ()):
        self.name = name
        self.args = args
        self._hash = hash(("tc", name, args))

    def __eq__(self, other):
        return self is other or (
            type(other) is TCon and other.name == self.name and other.args == self.args
        )

    __hash__ = Type.__hash__

    def __repr__(self):
        if not self.args:
            return self.name
        return "%s(%s)" % (self.name, ",".join(map(repr, self.args)))


class TArrow(Type):
    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: Type, rhs: Type):
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash(("ta", lhs, rhs))

    def __eq__(self, other):
        return self is other or (
            type(other) is TArrow and other.lhs == self.lhs and other.rhs == self.rhs
        )

    __hash__ = Type.__hash__

    def __repr__(self):
        if isinstance(self.lhs, TArrow):
            return "(%r)>%r" % (self.lhs, self.rhs)
        return "%r>%r" % (self.lhs, self.rhs)


TYPE_O = TCon("$o")
TYPE_I = TCon("$i")


def arrow(arg_tys, res: Type) -> Type:
    """Build arg1 > ... > argn > res (right associated)."""
    ty = res
    for a in reversed(arg_tys):
        ty = TArrow(a, ty)
    return ty


def split_arrow(ty: Type) -> tuple[list, Type]:
    """Return ([arg types...], result type) of a possibly-curried arrow."""
    args = []
    while isinstance(ty, TArrow):
        args.append(ty.lhs)
        ty = ty.rhs
    return args, ty


def arity(ty: Type) -> int:
    n = 0
    while isinstance(ty, TArrow):
        n += 1
        ty = ty.rhs
    return n


def ty_vars(ty: Type, acc: Optional[set] = None) -> set:
    if acc is None:
        acc = set()
    if isinstance(ty, TVar):
        acc.add(ty.name)
    elif isinstance(ty, TCon):
        for a in ty.args:
            ty_vars(a, acc)
    elif isinstance(ty, TArrow):
        ty_vars(ty.lhs, acc)
        ty_vars(ty.rhs, acc)
    return acc


def subst_ty(ty: Type, mapping: dict) -> Type:
    """Apply a {name: Type} substitution to ty."""
    if not mapping:
        return ty
    if isinstance(ty, TVar):
        return mapping.get(ty.name, ty)
    if isinstance(ty, TCon):
        if not ty.args:
            return ty
        return TCon(ty.name, tuple(subst_ty(a, mapping) for a in ty.args))
    assert isinstance(ty, TArrow)
    return TArrow(subst_ty(ty.lhs, mapping), subst_ty(ty.rhs, mapping))


def _occurs_ty(name: str, ty: Type, mapping: dict) -> bool:
    if isinstance(ty, TVar):
        if ty.name == name:
            return True
        t = mapping.get(ty.name)
        return t is not None and _occurs_ty(name, t, mapping)
    if isinstance(ty, TCon):
        return any(_occurs_ty(name, a, mapping) for a in ty.args)
    if isinstance(ty, TArrow):
        return _occurs_ty(name, ty.lhs, mapping) or _occurs_ty(name, ty.rhs, mapping)
    return False


def unify_types(t1: Type, t2: Type, mapping: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier of two types, extending `mapping` (triangular
    form: bindings may mention other bound variables).  Returns None on
    clash or occurs failure."""
    mapping = {} if mapping is None else dict(mapping)
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        while isinstance(a, TVar) and a.name in mapping:
            a = mapping[a.name]
        while isinstance(b, TVar) and b.name in mapping:
            b = mapping[b.name]
        if a == b:
            continue
        if isinstance(a, TVar):
            if _occurs_ty(a.name, b, mapping):
                return None
            mapping[a.name] = b
        elif isinstance(b, TVar):
            if _occurs_ty(b.name, a, mapping):
                return None
            mapping[b.name] = a
        elif isinstance(a, TArrow) and isinstance(b, TArrow):
            stack.append((a.lhs, b.lhs))
            stack.append((a.rhs, b.rhs))
        elif (
            isinstance(a, TCon)
            and isinstance(b, TCon)
            and a.name == b.name
            and len(a.args) == len(b.args)
        ):
            stack.extend(zip(a.args, b.args))
        else:
            return None
    return mapping


def resolve_ty(ty: Type, mapping: dict) -> Type:
    """Fully apply a triangular mapping produced by unify_types."""
    if isinstance(ty, TVar):
        t = mapping.get(ty.name)
        return ty if t is None else resolve_ty(t, mapping)
    if isinstance(ty, TCon):
        if not ty.args:
            return ty
        return TCon(ty.name, tuple(resolve_ty(a, mapping) for a in ty.args))
    if isinstance(ty, TArrow):
        return TArrow(resolve_ty(ty.lhs, mapping), resolve_ty(ty.rhs, mapping))
    return ty


def match_types(pattern: Type, target: Type, mapping: Optional[dict] = None) -> Optional[dict]:
    """One-sided unification: instantiate pattern's variables to make it
    equal to target.  Variables in target are treated as constants."""
    mapping = {} if mapping is None else dict(mapping)
    stack = [(pattern, target)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, TVar):
            bound = mapping.get(p.name)
            if bound is None:
                mapping[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, TArrow) and isinstance(t, TArrow):
            stack.append((p.lhs, t.lhs))
            stack.append((p.rhs, t.rhs))
        elif (
            isinstance(p, TCon)
            and isinstance(t, TCon)
            and p.name == t.name
            and len(p.args) == len(t.args)
        ):
            stack.extend(zip(p.args, t.args))
        else:
            return None
    return mapping
