from hosup.holtypes import (
    TYPE_I,
    TYPE_O,
    TArrow,
    TCon,
    TVar,
    arity,
    arrow,
    match_types,
    resolve_ty,
    split_arrow,
    subst_ty,
    unify_types,
)


def test_arrow_round_trip():
    ty = arrow([TYPE_I, TYPE_O, TYPE_I], TYPE_I)
    args, res = split_arrow(ty)
    assert args == [TYPE_I, TYPE_O, TYPE_I]
    assert res == TYPE_I
    assert arity(ty) == 3
    assert arity(TYPE_I) == 0


def test_arrow_right_associates():
    ty = arrow([TYPE_I], arrow([TYPE_O], TYPE_I))
    assert ty == arrow([TYPE_I, TYPE_O], TYPE_I)
    assert isinstance(ty.rhs, TArrow)


def test_equality_and_hash():
    assert TCon("s") == TCon("s")
    assert hash(TCon("s")) == hash(TCon("s"))
    assert TCon("s") != TCon("t")
    assert TVar("A") != TCon("A")
    d = {arrow([TYPE_I], TYPE_O): 1}
    assert d[arrow([TYPE_I], TYPE_O)] == 1


def test_subst_ty_simultaneous():
    a, b = TVar("A"), TVar("B")
    ty = TArrow(a, b)
    out = subst_ty(ty, {"A": b, "B": TYPE_I})
    # A -> B must not chase into B -> $i
    assert out == TArrow(b, TYPE_I)


def test_unify_types_basic():
    a = TVar("A")
    m = unify_types(TArrow(a, TYPE_I), TArrow(TYPE_O, TYPE_I))
    assert m is not None
    assert resolve_ty(a, m) == TYPE_O
    assert unify_types(TYPE_I, TYPE_O) is None


def test_unify_types_occurs():
    a = TVar("A")
    assert unify_types(a, TArrow(a, TYPE_I)) is None


def test_unify_types_chained():
    a, b = TVar("A"), TVar("B")
    m = unify_types(TArrow(a, a), TArrow(b, TYPE_I))
    assert m is not None
    assert resolve_ty(a, m) == TYPE_I
    assert resolve_ty(b, m) == TYPE_I


def test_match_types_one_sided():
    a = TVar("A")
    m = match_types(TArrow(a, a), TArrow(TYPE_I, TYPE_I), {})
    assert m == {"A": TYPE_I}
    assert match_types(TArrow(a, a), TArrow(TYPE_I, TYPE_O), {}) is None
    # matching never binds variables on the target side
    assert match_types(TYPE_I, a, {}) is None
