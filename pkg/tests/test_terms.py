import os
import subprocess
import sys

import pytest

import gen
from gen import I, I1, I2, IH
from lambda_oracle import APP, VAR, db_shape, from_db, named_shape, normalize, subst
from hosup.holtypes import TYPE_I, TArrow, arrow
from hosup.terms import (
    BACKEND,
    App,
    Bound,
    Lam,
    Subst,
    Sym,
    TermError,
    Var,
    VarGen,
    app,
    apps,
    beta_normalize,
    check_term,
    eta_expand1,
    first_order_subterms,
    free_var_ids,
    head_of,
    is_flex,
    max_var_id,
    mk_app,
    occurs_free,
    pp,
    raw_encoding,
    replace_at,
    shift,
    spine_args,
    subst_term,
    subterm_at,
    thf_term,
)


def _oracle_shape(named):
    return named_shape(normalize(named))


def test_beta_matches_reference(sig):
    rng = gen.seeded(11)
    for _ in range(300):
        fun = gen.gen_term(rng, sig, TArrow(I, I), fuel=4)
        arg = gen.gen_term(rng, sig, I, fuel=3)
        got = app(fun, arg)
        want = _oracle_shape((APP, from_db(fun), from_db(arg)))
        assert db_shape(got) == want


def test_beta_higher_order_args(sig):
    rng = gen.seeded(12)
    for _ in range(200):
        fun = gen.gen_term(rng, sig, TArrow(I1, I), fuel=4)
        arg = gen.gen_term(rng, sig, I1, fuel=3)
        got = app(fun, arg)
        want = _oracle_shape((APP, from_db(fun), from_db(arg)))
        assert db_shape(got) == want


def test_subst_matches_reference(sig):
    rng = gen.seeded(13)
    tried = 0
    for _ in range(400):
        t = gen.gen_term(rng, sig, I, fuel=4)
        fv = sorted(free_var_ids(t))
        if not fv:
            continue
        vid = fv[0]
        vty = gen.TYPES[(vid - 100) // 2]
        s = gen.gen_term(rng, sig, vty, fuel=3)
        tried += 1
        got = subst_term(t, {vid: s}, {})
        want = _oracle_shape(subst(from_db(t), "X%d" % vid, from_db(s), iter(range(10**6))))
        assert db_shape(got) == want
    assert tried > 100


def test_subst_is_simultaneous(sig):
    rng = gen.seeded(14)
    tried = 0
    for _ in range(400):
        t = gen.gen_term(rng, sig, I, fuel=4)
        fv = sorted(free_var_ids(t))
        if len(fv) < 2:
            continue
        x, y = fv[0], fv[1]
        u = gen.gen_term(rng, sig, gen.TYPES[(x - 100) // 2], fuel=2)
        v = gen.gen_term(rng, sig, gen.TYPES[(y - 100) // 2], fuel=2)
        tried += 1
        got = subst_term(t, {x: u, y: v}, {})
        # reference: route through a temporary atom so u is not rewritten by y -> v
        ctr = iter(range(10**6))
        ref = subst(from_db(t), "X%d" % x, (VAR, "_tmp"), ctr)
        ref = subst(ref, "X%d" % y, from_db(v), ctr)
        ref = subst(ref, "_tmp", from_db(u), ctr)
        assert db_shape(got) == _oracle_shape(ref)
    assert tried > 50


def test_generated_terms_are_normal_and_wellformed(sig):
    rng = gen.seeded(15)
    for _ in range(200):
        ty = rng.choice(gen.TYPES)
        t = gen.gen_term(rng, sig, ty, fuel=4)
        check_term(t)
        assert beta_normalize(t) == t
        assert t.ty == ty


def test_size_and_max_loose_invariants(sig):
    def count(t):
        k = type(t)
        if k is App:
            return 1 + count(t.fun) + count(t.arg)
        if k is Lam:
            return 1 + count(t.body)
        return 1

    def loose(t, depth=0):
        k = type(t)
        if k is Bound:
            return t.index - depth if t.index >= depth else -1
        if k is App:
            return max(loose(t.fun, depth), loose(t.arg, depth))
        if k is Lam:
            return loose(t.body, depth + 1)
        return -1

    rng = gen.seeded(16)
    for _ in range(200):
        t = gen.gen_term(rng, sig, rng.choice(gen.TYPES), fuel=4)
        assert t.size == count(t)
        assert t.max_loose == loose(t)


def test_shift():
    b0 = Bound(0, TYPE_I)
    assert shift(b0, 3, 0) == Bound(3, TYPE_I)
    assert shift(b0, 1, 1) is b0
    a = Sym("a", TYPE_I)
    assert shift(a, 5, 0) is a


def test_eta_expand(sig):
    f = sig.sym("f")
    ef = eta_expand1(f)
    assert type(ef) is Lam
    assert ef.ty == f.ty
    a = sig.sym("a")
    assert app(ef, a) == app(f, a)


def test_spine_and_heads(sig):
    f, g, a, b = sig.sym("f"), sig.sym("g"), sig.sym("a"), sig.sym("b")
    t = apps(g, [app(f, a), b])
    assert head_of(t) == g
    assert spine_args(t) == [app(f, a), b]
    x = Var(0, gen.I2)
    assert is_flex(apps(x, [a, b]))
    assert not is_flex(t)


def test_occurs_and_var_ids(sig):
    x = Var(3, TYPE_I)
    t = apps(sig.sym("g"), [x, sig.sym("a")])
    assert occurs_free(3, t)
    assert not occurs_free(4, t)
    assert free_var_ids(t) == {3}
    assert max_var_id(t) == 3
    assert max_var_id(sig.sym("a")) == -1


def test_first_order_subterms(sig):
    f, g, h, a = sig.sym("f"), sig.sym("g"), sig.sym("h"), sig.sym("a")
    lam = Lam(TYPE_I, app(f, Bound(0, TYPE_I)))
    t = apps(g, [app(f, a), app(h, lam)])
    got = [(pos.path, sub) for pos, sub in first_order_subterms(t)]
    assert got == [
        ((), t),
        ((0,), app(f, a)),
        ((0, 0), a),
        ((1,), app(h, lam)),
        ((1, 0), lam),
    ]
    # variables are positions too; the rules filter them
    x = Var(0, TYPE_I)
    t2 = apps(g, [x, a])
    assert [s for _, s in first_order_subterms(t2)] == [t2, x, a]


def test_subterm_replace_round_trip(sig):
    g, f, a, b = sig.sym("g"), sig.sym("f"), sig.sym("a"), sig.sym("b")
    t = apps(g, [app(f, a), b])
    for pos, sub in first_order_subterms(t):
        assert subterm_at(t, pos.path) == sub
    t2 = replace_at(t, (0, 0), b)
    assert t2 == apps(g, [app(f, b), b])
    with pytest.raises(TermError):
        replace_at(t, (0, 0), sig.sym("f"))


def test_raw_encoding(sig):
    h, f = sig.sym("h"), sig.sym("f")
    t = Lam(TYPE_I, app(h, Lam(TYPE_I, Bound(1, TYPE_I))))
    assert raw_encoding(t) == "lam(app(h,lam(d1)))"
    ident = Lam(TYPE_I, Bound(0, TYPE_I))
    assert raw_encoding(ident, with_types=True) == "lam($i,$i,d0($i))"
    assert raw_encoding(app(f, sig.sym("a"))) == "app(f,a)"


def test_printers(sig):
    f, a = sig.sym("f"), sig.sym("a")
    t = Lam(TYPE_I, app(f, Bound(0, TYPE_I)))
    assert pp(t) == "λY0:$i. f Y0"
    assert pp(app(f, a)) == "f a"
    assert thf_term(app(f, a)) == "(f @ a)"
    assert thf_term(t) == "(^ [Y0 : $i] : (f @ Y0))"


def test_app_type_checking(sig):
    a = sig.sym("a")
    with pytest.raises(TermError):
        mk_app(a, a)
    with pytest.raises(TermError):
        mk_app(sig.sym("f"), sig.sym("g"))


def test_signature_rejects_reserved():
    from hosup.terms import Signature

    s = Signature()
    for bad in ("app", "lam", "d0", "d17"):
        with pytest.raises(Exception):
            s.declare(bad, TYPE_I)


def test_subst_class(sig):
    x, y = Var(0, TYPE_I), Var(1, TYPE_I)
    a, fb = sig.sym("a"), app(sig.sym("f"), sig.sym("b"))
    s = Subst({}, {}).bind(0, app(sig.sym("f"), y)).bind(1, a)
    # earlier bindings are rewritten: the map stays idempotent
    assert s.apply(x) == app(sig.sym("f"), a)
    assert s.apply(y) == a
    t = s.restrict({0})
    assert t.apply(y) == y
    assert Subst({1: fb}, {}) == Subst({1: fb}, {})


def test_backend_reports_and_pure_override():
    assert BACKEND in ("compiled", "interpreted")
    env = dict(os.environ, HOSUP_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from hosup.terms import BACKEND; print(BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.stdout.strip() == "interpreted"
