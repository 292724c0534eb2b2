import pytest

from hosup.calculus import Draft, Rules
from hosup.holtypes import TArrow, TVar
from hosup.ordering import KBO
from hosup.clauses import Clause, Literal, canonical_lits
from hosup.terms import Signature, Var, app, apps, pp

from gen import I, I1, I2


def lit_strs(lits):
    return [repr(l) for l in lits]


def ckey(lits):
    return Clause(canonical_lits(tuple(lits))).key()


@pytest.fixture
def two_arg():
    """a, b, c, d : $i and f : $i>$i>$i, plus the clause
    X a b != f b a | X c d != f b a."""
    sig = Signature()
    for n in "abcd":
        sig.declare(n, I)
    sig.declare("f", I2)
    a, b, c, d, f = (sig.sym(n) for n in "abcdf")
    x = Var(0, I2)
    clause = Clause(
        (
            Literal(apps(x, [a, b]), apps(f, [b, a]), False),
            Literal(apps(x, [c, d]), apps(f, [b, a]), False),
        ),
        cid=1,
    )
    ord_ = KBO.from_clauses([[clause]])
    return sig, clause, ord_


@pytest.fixture
def unary():
    """a, b, c : $i, f, g : $i>$i, h : $i>$i>$i."""
    sig = Signature()
    for n in "abc":
        sig.declare(n, I)
    sig.declare("f", I1)
    sig.declare("g", I1)
    sig.declare("h", I2)
    return sig


def unary_ord(sig, *clauses):
    return KBO.from_clauses([clauses])


# -- equality resolution ----------------------------------------------------


def test_eq_res_depth_one_leaves_constraint(two_arg):
    sig, clause, ord_ = two_arg
    rules = Rules(ord_, depth=1)
    drafts = rules.eq_res(clause)
    assert len(drafts) == 1
    dr = drafts[0]
    assert dr.rule == "eq_res"
    assert dr.premises == (1,)
    assert lit_strs(dr.lits) == [
        "f (X1 c d) (X2 c d) != f b a",
        "f (X1 a b) (X2 a b) != f b a",
    ]
    assert dr.lits[1].is_constraint and not dr.lits[0].is_constraint
    assert pp(dr.subst.tmap[0]) == "λY0:$i. λY1:$i. f (X1 Y0 Y1) (X2 Y0 Y1)"


def test_eq_res_chain_reaches_empty_in_three_steps(two_arg):
    sig, clause, ord_ = two_arg
    rules = Rules(ord_, depth=1)
    bindings = []
    cur = clause
    for step in range(3):
        drafts = rules.eq_res(cur)
        picked = None
        for dr in drafts:
            live = [l for l in dr.lits if not l.is_trivially_false()]
            bindings.append(pp(next(iter(dr.subst.tmap.values()))))
            if not live:
                picked = "empty"
                break
            picked = Clause(tuple(live), cid=cur.cid + 1)
            break
        cur = picked
    assert picked == "empty"
    assert bindings[0] == "λY0:$i. λY1:$i. f (X1 Y0 Y1) (X2 Y0 Y1)"
    assert bindings[1] == "λY0:$i. λY1:$i. b"
    assert bindings[2] == "λY0:$i. λY1:$i. a"


def test_eq_res_only_from_selected_literal(unary):
    sig = unary
    a, f = sig.sym("a"), sig.sym("f")
    y, x = Var(0, I), Var(2, I)
    # second literal is far heavier, so it is the one selected
    clause = Clause(
        (Literal(y, a, False), Literal(app(f, app(f, x)), app(f, app(f, a)), False)),
        cid=3,
    )
    ord_ = unary_ord(sig, clause)
    rules = Rules(ord_, depth=1)
    assert rules.select(clause) == frozenset({1})
    drafts = rules.eq_res(clause)
    assert drafts
    for dr in drafts:
        assert 2 in dr.subst.tmap and 0 not in dr.subst.tmap


def test_eq_res_skips_positive_and_flex_flex(unary):
    sig = unary
    a = sig.sym("a")
    x, y = Var(0, I1), Var(2, I1)
    clause = Clause(
        (Literal(a, a, True), Literal(app(x, a), app(y, a), False)), cid=4
    )
    rules = Rules(unary_ord(sig, clause), depth=1)
    assert rules.eq_res(clause) == []


# -- equality factoring -------------------------------------------------------


def test_eq_fact_binds_and_keeps_one_copy(unary):
    sig = unary
    a, b, f = sig.sym("a"), sig.sym("b"), sig.sym("f")
    x = Var(0, I)
    clause = Clause(
        (Literal(app(f, x), a, True), Literal(app(f, b), a, True)), cid=5
    )
    rules = Rules(unary_ord(sig, clause), depth=1)
    drafts = rules.eq_fact(clause)
    assert drafts
    keys = {ckey(dr.lits) for dr in drafts}
    assert keys == {ckey((Literal(a, a, False), Literal(app(f, b), a, True)))}
    for dr in drafts:
        assert dr.rule == "eq_fact"
        assert pp(dr.subst.tmap[0]) == "b"


def test_eq_fact_blocked_by_selection(unary):
    sig = unary
    a, b, f = sig.sym("a"), sig.sym("b"), sig.sym("f")
    x = Var(0, I)
    clause = Clause(
        (
            Literal(app(f, x), a, True),
            Literal(app(f, b), a, True),
            Literal(app(f, app(f, b)), a, False),
        ),
        cid=6,
    )
    rules = Rules(unary_ord(sig, clause), depth=1)
    assert rules.select(clause)
    assert rules.eq_fact(clause) == []


def test_eq_fact_orientation_condition(unary):
    # unifying through the variable makes the worked side smaller than its
    # partner, so that branch is pruned; the others survive
    sig = unary
    a, b = sig.sym("a"), sig.sym("b")
    x = Var(0, I)
    clause = Clause((Literal(x, a, True), Literal(b, a, True)), cid=7)
    ord_ = KBO.from_counts({"a": 1, "b": 2})  # a rarer, so a > b
    rules = Rules(ord_, depth=1)
    keys = {ckey(dr.lits) for dr in rules.eq_fact(clause)}
    pruned = ckey((Literal(a, a, False), Literal(b, a, True)))
    assert keys and pruned not in keys


# -- argument congruence -------------------------------------------------------


def test_arg_cong_applies_fresh_variables(unary):
    sig = unary
    f, g = sig.sym("f"), sig.sym("g")
    clause = Clause((Literal(g, f, True),), cid=8)
    rules = Rules(unary_ord(sig, clause), depth=1)
    drafts = rules.arg_cong(clause)
    assert [lit_strs(dr.lits) for dr in drafts] == [["g X0 = f X0"]]


def test_arg_cong_iterates_arities(unary):
    sig = unary
    h = sig.sym("h")
    sig.declare("k", I2)
    k = sig.sym("k")
    clause = Clause((Literal(h, k, True),), cid=9)
    rules = Rules(unary_ord(sig, clause), depth=1)
    drafts = rules.arg_cong(clause)
    assert [lit_strs(dr.lits) for dr in drafts] == [
        ["h X0 = k X0"],
        ["h X1 X2 = k X1 X2"],
    ]


def test_arg_cong_instantiates_type_variable_result():
    A = TVar("A")
    x, y = Var(4, A), Var(6, A)
    clause = Clause((Literal(x, y, True),), cid=10)
    rules = Rules(KBO(), depth=1)
    drafts = rules.arg_cong(clause)
    assert len(drafts) == 1
    dr = drafts[0]
    lit = dr.lits[0]
    assert type(lit.lhs.ty) is TVar  # fresh result type variable
    assert dr.subst.tymap["A"] == TArrow(TVar("Ac7"), TVar("Ac8"))
    assert lit_strs(dr.lits) == ["X4 X9 = X6 X9"]


def test_arg_cong_skips_negative_and_base(unary):
    sig = unary
    a, b, f = sig.sym("a"), sig.sym("b"), sig.sym("f")
    clause = Clause((Literal(f, f, False), Literal(a, b, True)), cid=11)
    rules = Rules(unary_ord(sig, clause), depth=1)
    assert rules.arg_cong(clause) == []


# -- flex-flex clauses ---------------------------------------------------------


def test_flex_flex_simp(unary):
    sig = unary
    a = sig.sym("a")
    x, y = Var(0, I1), Var(2, I1)
    rules = Rules(unary_ord(sig), depth=1)
    ff = Clause((Literal(app(x, a), app(y, a), False), Literal(x, y, False)), cid=12)
    dr = rules.flex_flex_simp(ff)
    assert isinstance(dr, Draft)
    assert dr.lits == () and dr.rule == "flex_flex_simp" and dr.premises == (12,)
    mixed = Clause((Literal(app(x, a), app(y, a), False), Literal(app(x, a), a, False)))
    assert rules.flex_flex_simp(mixed) is None
    assert rules.flex_flex_simp(Clause(())) is None


# -- imitate / project -----------------------------------------------------------


def test_imitate_project_only_at_depth_zero(unary):
    sig = unary
    a, g = sig.sym("a"), sig.sym("g")
    x = Var(0, I1)
    clause = Clause((Literal(app(x, a), app(g, a), False),), cid=13)
    ord_ = unary_ord(sig, clause)
    assert Rules(ord_, depth=1).imitate_project(clause) == []
    assert Rules(ord_, depth=0, applicative=True).imitate_project(clause) == []
    assert Rules(ord_, depth=0).imitate_project(clause)


def test_imitate_project_frozen_conclusions(unary):
    sig = unary
    a, b, c, f, g = (sig.sym(n) for n in "abcfg")
    y = Var(0, I1)
    clause = Clause(
        (
            Literal(app(y, b), app(g, app(f, b)), False),
            Literal(app(y, a), app(g, c), False),
        ),
        cid=14,
    )
    rules = Rules(unary_ord(sig, clause), depth=0)
    drafts = rules.imitate_project(clause)
    assert [(dr.rule, lit_strs(dr.lits)) for dr in drafts] == [
        ("imitate", ["g (X1 b) != g (f b)", "g (X1 a) != g c"]),
        ("project", ["b != g (f b)", "a != g c"]),
    ]
    assert pp(drafts[0].subst.tmap[0]) == "λY0:$i. g (X1 Y0)"
    assert pp(drafts[1].subst.tmap[0]) == "λY0:$i. Y0"
    for dr in drafts:
        assert dr.premises == (14,)


def test_imitate_project_requires_one_flex_side(unary):
    sig = unary
    a, f = sig.sym("a"), sig.sym("f")
    x, y = Var(0, I1), Var(2, I1)
    rigid = Clause((Literal(app(f, a), a, False),), cid=15)
    flexflex = Clause((Literal(app(x, a), app(y, a), False),), cid=16)
    rules = Rules(unary_ord(sig, rigid), depth=0)
    assert rules.imitate_project(rigid) == []
    assert rules.imitate_project(flexflex) == []


# -- superposition ----------------------------------------------------------------


def test_superpose_frozen_conclusions(unary):
    sig = unary
    a, b, c, f = (sig.sym(n) for n in "abcf")
    x = Var(2, I1)
    left = Clause((Literal(app(f, a), c, True),), cid=20)
    right = Clause(
        (
            Literal(app(f, app(x, a)), c, False),
            Literal(app(x, b), b, False),
        ),
        cid=21,
    )
    ord_ = unary_ord(sig, left, right)
    rules = Rules(ord_, depth=0)
    drafts = rules.superpose(left, right)
    assert [lit_strs(dr.lits) for dr in drafts] == [
        ["X2 b != b", "c != c", "a != X2 a"],
        ["X2 b != b", "f c != c", "f a != X2 a"],
    ]
    for dr in drafts:
        assert dr.rule == "sup" and dr.premises == (20, 21)
        assert dr.lits[-1].is_constraint


def test_superpose_skips_bare_variable_positions(unary):
    sig = unary
    a, c, f, g = sig.sym("a"), sig.sym("c"), sig.sym("f"), sig.sym("g")
    x = Var(0, I)
    left = Clause((Literal(app(f, a), c, True),), cid=22)
    right = Clause((Literal(app(g, x), a, False),), cid=23)
    rules = Rules(unary_ord(sig, left, right), depth=1)
    assert rules.superpose(left, right) == []


def test_superpose_orientation_conditions(unary):
    sig = unary
    a, b, c, f = sig.sym("a"), sig.sym("b"), sig.sym("c"), sig.sym("f")
    left = Clause((Literal(c, app(f, a), True),), cid=24)  # stored small-first
    right = Clause((Literal(app(f, a), b, False),), cid=25)
    rules = Rules(unary_ord(sig, left, right), depth=1)
    drafts = rules.superpose(left, right)
    # only the f a -> c direction is usable, and only into the larger side
    assert [lit_strs(dr.lits) for dr in drafts] == [["c != b"]]


def test_superpose_renames_apart_on_overlap(unary):
    # self-superposition: the two premise copies must not share X0, which
    # shows up as a deferred pair between two distinct variables
    sig = unary
    a, f = sig.sym("a"), sig.sym("f")
    x = Var(0, I)
    u = Clause((Literal(app(f, x), a, True),), cid=26)
    rules = Rules(unary_ord(sig, u), depth=1)
    drafts = rules.superpose(u, u)
    assert [lit_strs(dr.lits) for dr in drafts] == [["a = a", "X0 != X1"]]
    assert drafts[0].premises == (26, 26)


def test_superpose_left_selection_blocks(unary):
    sig = unary
    a, b, c, f = sig.sym("a"), sig.sym("b"), sig.sym("c"), sig.sym("f")
    left = Clause(
        (Literal(app(f, a), c, True), Literal(app(f, b), app(f, a), False)), cid=27
    )
    right = Clause((Literal(app(f, a), b, False),), cid=28)
    rules = Rules(unary_ord(sig, left, right), depth=1)
    assert rules.select(left)
    assert rules.superpose(left, right) == []


def test_superpose_into_both_polarities(unary):
    sig = unary
    a, b, c, f, g = (sig.sym(n) for n in "abcfg")
    left = Clause((Literal(app(f, a), c, True),), cid=29)
    right = Clause((Literal(app(g, app(f, a)), b, True),), cid=30)
    rules = Rules(unary_ord(sig, left, right), depth=1)
    drafts = rules.superpose(left, right)
    assert ["g c = b"] in [lit_strs(dr.lits) for dr in drafts]


# -- aggregation ---------------------------------------------------------------


def test_generate_collects_all_rules(unary):
    sig = unary
    a, b, c, f = sig.sym("a"), sig.sym("b"), sig.sym("c"), sig.sym("f")
    x = Var(0, I1)
    given = Clause((Literal(app(x, b), app(f, a), False),), cid=31)
    unit = Clause((Literal(app(f, a), c, True),), cid=32)
    rules = Rules(unary_ord(sig, given, unit), depth=0)
    out = rules.generate(given, [unit, given])
    rule_names = {dr.rule for dr in out}
    assert {"eq_res", "imitate", "project", "sup"} <= rule_names
    for dr in out:
        assert isinstance(dr, Draft)
