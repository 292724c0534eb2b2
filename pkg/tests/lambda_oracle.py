"""Reference implementation for the term kernel, kept deliberately
naive: named lambda terms, textbook capture-avoiding substitution, and
leftmost-outermost reduction to normal form.  Tests convert kernel
terms to this representation and compare alpha-equivalence classes."""

import itertools

from hosup.terms import App, Bound, Lam, Sym, Var

VAR, LAM, APP, SYM = "v", "l", "a", "s"


def free_names(t, acc=None):
    if acc is None:
        acc = set()
    tag = t[0]
    if tag == VAR:
        acc.add(t[1])
    elif tag == APP:
        free_names(t[1], acc)
        free_names(t[2], acc)
    elif tag == LAM:
        inner = free_names(t[2], set())
        inner.discard(t[1])
        acc |= inner
    return acc


def subst(t, name, s, counter):
    tag = t[0]
    if tag == VAR:
        return s if t[1] == name else t
    if tag == SYM:
        return t
    if tag == APP:
        return (APP, subst(t[1], name, s, counter), subst(t[2], name, s, counter))
    bn, body = t[1], t[2]
    if bn == name:
        return t
    if bn in free_names(s):
        fresh = "_r%d" % next(counter)
        body = subst(body, bn, (VAR, fresh), counter)
        bn = fresh
    return (LAM, bn, subst(body, name, s, counter))


def _step(t, counter):
    tag = t[0]
    if tag == APP:
        f, a = t[1], t[2]
        if f[0] == LAM:
            return subst(f[2], f[1], a, counter)
        r = _step(f, counter)
        if r is not None:
            return (APP, r, a)
        r = _step(a, counter)
        if r is not None:
            return (APP, f, r)
        return None
    if tag == LAM:
        r = _step(t[2], counter)
        return None if r is None else (LAM, t[1], r)
    return None


def normalize(t):
    counter = itertools.count()
    while True:
        r = _step(t, counter)
        if r is None:
            return t
        t = r


_fresh_binder = itertools.count()


def from_db(t, binders=()):
    """Kernel term -> named term.  Free variables become X<id> atoms,
    binders get globally fresh names."""
    k = type(t)
    if k is Var:
        return (VAR, "X%d" % t.vid)
    if k is Bound:
        return (VAR, binders[t.index])
    if k is Sym:
        return (SYM, t.name)
    if k is App:
        return (APP, from_db(t.fun, binders), from_db(t.arg, binders))
    name = "b%d" % next(_fresh_binder)
    return (LAM, name, from_db(t.body, (name,) + binders))


def named_shape(t, binders=()):
    """Alpha-invariant shape of a named term (types ignored)."""
    tag = t[0]
    if tag == VAR:
        name = t[1]
        if name in binders:
            return ("d", binders.index(name))
        return ("fv", name)
    if tag == SYM:
        return ("s", t[1])
    if tag == APP:
        return ("a", named_shape(t[1], binders), named_shape(t[2], binders))
    return ("l", named_shape(t[2], (t[1],) + binders))


def db_shape(t):
    """Same shape, computed directly from a kernel term."""
    k = type(t)
    if k is Var:
        return ("fv", "X%d" % t.vid)
    if k is Bound:
        return ("d", t.index)
    if k is Sym:
        return ("s", t.name)
    if k is App:
        return ("a", db_shape(t.fun), db_shape(t.arg))
    return ("l", db_shape(t.body))
