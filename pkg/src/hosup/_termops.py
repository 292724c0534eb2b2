"""Term representation and the hot term operations.

Terms are immutable, eagerly beta-normalized, and use De Bruijn indices
for bound variables.  Application is stored as binary `App` nodes (the
first-order encoding used by the ordering and by subterm extraction),
with the spine head cached on every App node so classifying a term as
flex or rigid is O(1).

Every node carries its type, its encoded size (node count), the largest
loose De Bruijn level it mentions (-1 when closed), and a precomputed
structural hash.

This module is written to compile as a C extension (see setup.py); the
interpreted version is the fallback and behaves identically.  Import it
through hosup.terms, which selects the backend.
"""

from hosup.holtypes import TArrow, subst_ty


class Term:
    __slots__ = ("ty", "size", "max_loose", "_hash")

    def __hash__(self):
        return self._hash


class Var(Term):
    """Free variable, identified by an integer id within a clause."""

    __slots__ = ("vid",)

    def __init__(self, vid, ty):
        self.vid = vid
        self.ty = ty
        self.size = 1
        self.max_loose = -1
        self._hash = hash((1, vid, ty._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is Var and other.vid == self.vid and other.ty == self.ty

    __hash__ = Term.__hash__

    def __repr__(self):
        return "X%d" % self.vid


class Bound(Term):
    """De Bruijn index; `ty` is the type of the binder it points at."""

    __slots__ = ("index",)

    def __init__(self, index, ty):
        self.index = index
        self.ty = ty
        self.size = 1
        self.max_loose = index
        self._hash = hash((2, index, ty._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return type(other) is Bound and other.index == self.index and other.ty == self.ty

    __hash__ = Term.__hash__

    def __repr__(self):
        return "d%d" % self.index


class Sym(Term):
    """Occurrence of a signature symbol, with its type arguments already
    applied; `ty` is the instantiated type."""

    __slots__ = ("name", "ty_args")

    def __init__(self, name, ty, ty_args=()):
        self.name = name
        self.ty = ty
        self.ty_args = ty_args
        self.size = 1
        self.max_loose = -1
        self._hash = hash((3, name, ty_args, ty._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Sym
            and other.name == self.name
            and other.ty_args == self.ty_args
            and other.ty == self.ty
        )

    __hash__ = Term.__hash__

    def __repr__(self):
        return self.name


class Lam(Term):
    __slots__ = ("arg_ty", "body")

    def __init__(self, arg_ty, body):
        self.arg_ty = arg_ty
        self.body = body
        self.ty = TArrow(arg_ty, body.ty)
        self.size = 1 + body.size
        ml = body.max_loose - 1
        self.max_loose = ml if ml >= 0 else -1
        self._hash = hash((4, arg_ty._hash, body._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is Lam
            and other._hash == self._hash
            and other.arg_ty == self.arg_ty
            and other.body == self.body
        )

    __hash__ = Term.__hash__

    def __repr__(self):
        return "(\\:%r. %r)" % (self.arg_ty, self.body)


class App(Term):
    """Binary application.  Invariant: `fun` is never a Lam (the smart
    constructor beta-reduces), so stored terms are beta-normal."""

    __slots__ = ("fun", "arg", "head")

    def __init__(self, fun, arg):
        fty = fun.ty
        if type(fty) is not TArrow:
            raise TypeError("applying non-function of type %r" % fty)
        self.fun = fun
        self.arg = arg
        self.ty = fty.rhs
        self.head = fun.head if type(fun) is App else fun
        self.size = 1 + fun.size + arg.size
        fl = fun.max_loose
        al = arg.max_loose
        self.max_loose = fl if fl >= al else al
        self._hash = hash((5, fun._hash, arg._hash))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(other) is App
            and other._hash == self._hash
            and other.fun == self.fun
            and other.arg == self.arg
        )

    __hash__ = Term.__hash__

    def __repr__(self):
        return "(%r %r)" % (self.fun, self.arg)


def head_of(t):
    """Spine head: the term itself for leaves and lambdas, the innermost
    function of an application chain otherwise.  O(1)."""
    return t.head if type(t) is App else t


def is_flex(t):
    """True when the spine head is a free variable."""
    h = t.head if type(t) is App else t
    return type(h) is Var


def spine_args(t):
    """Arguments along the application spine, leftmost first."""
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return args


def shift(t, by, cutoff=0):
    """Add `by` to every loose De Bruijn index >= cutoff.  Shifting never
    creates redexes, so nodes are rebuilt directly."""
    if by == 0 or t.max_loose < cutoff:
        return t
    tt = type(t)
    if tt is Bound:
        return Bound(t.index + by, t.ty) if t.index >= cutoff else t
    if tt is App:
        f = shift(t.fun, by, cutoff)
        a = shift(t.arg, by, cutoff)
        return App(f, a)
    if tt is Lam:
        return Lam(t.arg_ty, shift(t.body, by, cutoff + 1))
    return t


def mk_app(fun, arg):
    """Apply fun to arg, beta-reducing on the spot.  Both inputs must be
    beta-normal; the result is beta-normal (hereditary substitution)."""
    if type(fun) is Lam:
        return _bsub(fun.body, arg, 0)
    return App(fun, arg)


def mk_apps(fun, args):
    for a in args:
        if type(fun) is Lam:
            fun = _bsub(fun.body, a, 0)
        else:
            fun = App(fun, a)
    return fun


def _bsub(t, v, j):
    """Substitute v for index j in t, decrementing higher loose indices."""
    if t.max_loose < j:
        return t
    tt = type(t)
    if tt is Bound:
        i = t.index
        if i == j:
            return shift(v, j, 0) if j else v
        if i > j:
            return Bound(i - 1, t.ty)
        return t
    if tt is App:
        f = _bsub(t.fun, v, j)
        a = _bsub(t.arg, v, j)
        return mk_app(f, a)
    if tt is Lam:
        return Lam(t.arg_ty, _bsub(t.body, v, j + 1))
    return t


def bsubst(body, value):
    """Reduce the redex (\\. body) value."""
    return _bsub(body, value, 0)


def beta_normalize(t):
    """Normalize a term that may contain redexes (terms built by the
    smart constructors are already normal; this is for encoders)."""
    tt = type(t)
    if tt is App:
        f = beta_normalize(t.fun)
        a = beta_normalize(t.arg)
        if f is t.fun and a is t.arg and type(f) is not Lam:
            return t
        return mk_app(f, a)
    if tt is Lam:
        b = beta_normalize(t.body)
        return t if b is t.body else Lam(t.arg_ty, b)
    return t


def subst_term(t, tmap, tymap):
    """Apply a free-variable substitution (vid -> closed term) and a type
    substitution to t, renormalizing.  Bindings must be closed, which is
    why no shifting happens under binders."""
    tt = type(t)
    if tt is Var:
        r = tmap.get(t.vid)
        if r is not None:
            return r
        if tymap:
            nty = subst_ty(t.ty, tymap)
            if nty != t.ty:
                return Var(t.vid, nty)
        return t
    if tt is App:
        f = subst_term(t.fun, tmap, tymap)
        a = subst_term(t.arg, tmap, tymap)
        if f is t.fun and a is t.arg:
            return t
        return mk_app(f, a)
    if tt is Lam:
        b = subst_term(t.body, tmap, tymap)
        aty = subst_ty(t.arg_ty, tymap) if tymap else t.arg_ty
        if b is t.body and aty == t.arg_ty:
            return t
        return Lam(aty, b)
    if tt is Sym:
        if tymap and t.ty_args:
            return Sym(
                t.name,
                subst_ty(t.ty, tymap),
                tuple(subst_ty(a, tymap) for a in t.ty_args),
            )
        return t
    # Bound
    if tymap:
        nty = subst_ty(t.ty, tymap)
        if nty != t.ty:
            return Bound(t.index, nty)
    return t


def eta_expand1(t):
    """Wrap a term of arrow type in one binder: t becomes \\x. t x.  Used
    by unification when exactly one side of a pair is a lambda."""
    aty = t.ty.lhs
    return Lam(aty, mk_app(shift(t, 1, 0), Bound(0, aty)))


def free_var_ids(t, acc):
    tt = type(t)
    if tt is Var:
        acc.add(t.vid)
    elif tt is App:
        free_var_ids(t.fun, acc)
        free_var_ids(t.arg, acc)
    elif tt is Lam:
        free_var_ids(t.body, acc)
    return acc


def free_vars(t, acc):
    """Collect free variables as {vid: Var}."""
    tt = type(t)
    if tt is Var:
        acc[t.vid] = t
    elif tt is App:
        free_vars(t.fun, acc)
        free_vars(t.arg, acc)
    elif tt is Lam:
        free_vars(t.body, acc)
    return acc


def var_counts(t, acc):
    """Occurrence counts of free variables, for the ordering's variable
    condition."""
    tt = type(t)
    if tt is Var:
        acc[t.vid] = acc.get(t.vid, 0) + 1
    elif tt is App:
        var_counts(t.fun, acc)
        var_counts(t.arg, acc)
    elif tt is Lam:
        var_counts(t.body, acc)
    return acc


def occurs_free(vid, t):
    tt = type(t)
    if tt is Var:
        return t.vid == vid
    if tt is App:
        return occurs_free(vid, t.fun) or occurs_free(vid, t.arg)
    if tt is Lam:
        return occurs_free(vid, t.body)
    return False


def max_var_id(t):
    """Largest free-variable id in t, or -1."""
    tt = type(t)
    if tt is Var:
        return t.vid
    if tt is App:
        a = max_var_id(t.fun)
        b = max_var_id(t.arg)
        return a if a >= b else b
    if tt is Lam:
        return max_var_id(t.body)
    return -1
