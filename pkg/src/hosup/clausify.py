"""Formulas to clauses.

The pipeline negates the conjecture, folds truth constants, names
subformulas whose expansion would exceed a clause-count threshold,
converts to NNF, Skolemizes, distributes to CNF and finally lifts
Boolean terms out of argument positions.  Preprocessing options turn
Boolean equality into equivalence and add the functional
extensionality and choice axioms as clauses.
"""

from dataclasses import dataclass, replace

from .clauses import Clause, Literal
from .holtypes import TYPE_O, TArrow, TVar, arrow
from .terms import App, Lam, Sym, Var, app, apps, free_vars, subst_term
from .tptp import FAtom, FBin, FEq, FNot, FQuant, Problem


@dataclass
class ClausifyConfig:
    equality_to_equiv: bool = False
    func_ext: str = "axiom"  # or "off"
    choice_axiom: bool = False
    naming_threshold: int = 8


# ---------------------------------------------------------------------------
# preprocessing

def _eq_to_equiv(f):
    if isinstance(f, FEq):
        if f.lhs.ty == TYPE_O:
            out = FBin("<=>", FAtom(f.lhs), FAtom(f.rhs))
            return out if f.positive else FNot(out)
        return f
    if isinstance(f, FNot):
        return FNot(_eq_to_equiv(f.sub))
    if isinstance(f, FBin):
        return FBin(f.op, _eq_to_equiv(f.lhs), _eq_to_equiv(f.rhs))
    if isinstance(f, FQuant):
        return replace(f, body=_eq_to_equiv(f.body))
    return f


def func_ext_clause(sig) -> Clause:
    """f (sk f g) != g (sk f g) | f = g, polymorphic in both types."""
    a, b = TVar("A"), TVar("B")
    fg = TArrow(a, b)
    name = sig.fresh_sym(arrow([fg, fg], a), ty_params=("A", "B"))
    f, g = Var(0, fg), Var(1, fg)
    d = apps(sig.sym(name, (a, b)), [f, g])
    return Clause(
        (Literal(app(f, d), app(g, d), False), Literal(f, g, True)),
        rule="func_ext",
    )


def choice_clause(sig) -> Clause:
    """~(p x) | p (sk p): whatever p holds of, it holds of sk p."""
    a = TVar("A")
    pty = TArrow(a, TYPE_O)
    name = sig.fresh_sym(arrow([pty], a), ty_params=("A",))
    p, x = Var(0, pty), Var(1, a)
    true = sig.sym("$true")
    eps = app(sig.sym(name, (a,)), p)
    return Clause(
        (Literal(app(p, x), true, False), Literal(app(p, eps), true, True)),
        rule="choice",
    )


def preprocess(problem: Problem, cfg: ClausifyConfig) -> Problem:
    """Formula-level preparation: equality_to_equiv rewriting plus the
    extensionality and choice axioms (attached in clause form)."""
    statements = problem.statements
    if cfg.equality_to_equiv:
        statements = [
            replace(s, formula=_eq_to_equiv(s.formula)) if s.formula else s
            for s in statements
        ]
    out = Problem(problem.sig, statements)
    if cfg.func_ext == "axiom":
        out.extras.append(func_ext_clause(problem.sig))
    if cfg.choice_axiom:
        out.extras.append(choice_clause(problem.sig))
    return out


# ---------------------------------------------------------------------------
# constant folding
#
# _TRUE/_FALSE stand for the formulas "true" and "false"; they never
# survive into the NNF stage.

_TRUE = "$T"
_FALSE = "$F"


def _is_const_sym(t, name):
    return type(t) is Sym and t.name == name


def _simp(f):
    if isinstance(f, FAtom):
        if _is_const_sym(f.term, "$true"):
            return _TRUE
        if _is_const_sym(f.term, "$false"):
            return _FALSE
        return f
    if isinstance(f, FEq):
        if f.lhs == f.rhs:
            return _TRUE if f.positive else _FALSE
        return f
    if isinstance(f, FNot):
        s = _simp(f.sub)
        if s is _TRUE:
            return _FALSE
        if s is _FALSE:
            return _TRUE
        return FNot(s)
    if isinstance(f, FBin):
        l, r = _simp(f.lhs), _simp(f.rhs)
        if f.op == "&":
            if _FALSE in (l, r):
                return _FALSE
            if l is _TRUE:
                return r
            if r is _TRUE:
                return l
        elif f.op == "|":
            if _TRUE in (l, r):
                return _TRUE
            if l is _FALSE:
                return r
            if r is _FALSE:
                return l
        elif f.op == "=>":
            if l is _FALSE or r is _TRUE:
                return _TRUE
            if l is _TRUE:
                return r
            if r is _FALSE:
                return FNot(l)
        else:  # <=>
            if l is _TRUE:
                return r
            if r is _TRUE:
                return l
            if l is _FALSE:
                return FNot(r) if r not in (_TRUE, _FALSE) else _TRUE
            if r is _FALSE:
                return FNot(l)
        return FBin(f.op, l, r)
    if isinstance(f, FQuant):
        b = _simp(f.body)
        if b in (_TRUE, _FALSE):
            return b
        return replace(f, body=b)
    return f


# ---------------------------------------------------------------------------
# subformula naming
#
# A node is named when the number of clauses it would contribute at its
# polarity exceeds the threshold: it is replaced by a fresh predicate
# over its free variables and a polarity-matched definition is queued.

def _nclauses(f, pol, memo):
    key = (id(f), pol)
    got = memo.get(key)
    if got is not None:
        return got
    if isinstance(f, (FAtom, FEq)):
        n = 1
    elif isinstance(f, FNot):
        n = _nclauses(f.sub, -pol, memo)
    elif isinstance(f, FQuant):
        n = _nclauses(f.body, pol, memo)
    else:
        l, r = f.lhs, f.rhs
        if f.op == "&":
            lp, rp = _nclauses(l, pol, memo), _nclauses(r, pol, memo)
            n = lp + rp if pol > 0 else lp * rp
        elif f.op == "|":
            lp, rp = _nclauses(l, pol, memo), _nclauses(r, pol, memo)
            n = lp * rp if pol > 0 else lp + rp
        elif f.op == "=>":
            if pol > 0:
                n = _nclauses(l, -1, memo) * _nclauses(r, 1, memo)
            else:
                n = _nclauses(l, 1, memo) + _nclauses(r, -1, memo)
        else:  # <=>
            if pol > 0:
                n = (_nclauses(l, -1, memo) * _nclauses(r, 1, memo)
                     + _nclauses(l, 1, memo) * _nclauses(r, -1, memo))
            else:
                n = (_nclauses(l, 1, memo) * _nclauses(r, 1, memo)
                     + _nclauses(l, -1, memo) * _nclauses(r, -1, memo))
    memo[key] = n
    return n


def _formula_vars(f, acc):
    if isinstance(f, FAtom):
        free_vars(f.term, acc)
    elif isinstance(f, FEq):
        free_vars(f.lhs, acc)
        free_vars(f.rhs, acc)
    elif isinstance(f, FNot):
        _formula_vars(f.sub, acc)
    elif isinstance(f, FBin):
        _formula_vars(f.lhs, acc)
        _formula_vars(f.rhs, acc)
    elif isinstance(f, FQuant):
        sub = {}
        _formula_vars(f.body, sub)
        sub.pop(f.vid, None)
        acc.update(sub)
    return acc


class _Namer:
    def __init__(self, sig, threshold):
        self.sig = sig
        self.threshold = threshold
        self.defs = []  # (pol, atom Formula, body Formula)

    def run(self, f, pol):
        memo = {}
        return self._walk(f, pol, memo, root=True)

    def _walk(self, f, pol, memo, root=False):
        if isinstance(f, (FAtom, FEq)):
            return f
        if isinstance(f, FNot):
            return FNot(self._walk(f.sub, -pol, memo))
        if isinstance(f, FQuant):
            return replace(f, body=self._walk(f.body, pol, memo))
        lpol = -pol if f.op in ("=>",) else (0 if f.op == "<=>" else pol)
        rpol = 0 if f.op == "<=>" else pol
        f = FBin(f.op, self._walk(f.lhs, lpol, memo), self._walk(f.rhs, rpol, memo))
        if root:
            return f
        n = (_nclauses(f, 1, memo) + _nclauses(f, -1, memo)) if pol == 0 \
            else _nclauses(f, pol, memo)
        if n <= self.threshold:
            return f
        fv = sorted(_formula_vars(f, {}).items())
        name = self.sig.fresh_sym(arrow([v.ty for _, v in fv], TYPE_O), prefix="np")
        atom = FAtom(apps(self.sig.sym(name), [v for _, v in fv]))
        self.defs.append((pol, atom, f))
        return atom


# ---------------------------------------------------------------------------
# NNF, Skolemization, CNF
#
# The NNF tree is tuples: ("and"|"or", parts), ("all"|"ex", Var, sub),
# ("lit", Literal).

def _nnf(f, pol, true_sym):
    if isinstance(f, FAtom):
        return ("lit", Literal(f.term, true_sym, pol > 0))
    if isinstance(f, FEq):
        return ("lit", Literal(f.lhs, f.rhs, f.positive if pol > 0 else not f.positive))
    if isinstance(f, FNot):
        return _nnf(f.sub, -pol, true_sym)
    if isinstance(f, FQuant):
        kind = f.kind if pol > 0 else ("?" if f.kind == "!" else "!")
        sub = _nnf(f.body, pol, true_sym)
        return ("all" if kind == "!" else "ex", Var(f.vid, f.ty), sub)
    l, r, op = f.lhs, f.rhs, f.op
    if op == "&":
        node = "and" if pol > 0 else "or"
        return (node, [_nnf(l, pol, true_sym), _nnf(r, pol, true_sym)])
    if op == "|":
        node = "or" if pol > 0 else "and"
        return (node, [_nnf(l, pol, true_sym), _nnf(r, pol, true_sym)])
    if op == "=>":
        if pol > 0:
            return ("or", [_nnf(l, -1, true_sym), _nnf(r, 1, true_sym)])
        return ("and", [_nnf(l, 1, true_sym), _nnf(r, -1, true_sym)])
    if pol > 0:  # l <=> r
        return ("and", [
            ("or", [_nnf(l, -1, true_sym), _nnf(r, 1, true_sym)]),
            ("or", [_nnf(l, 1, true_sym), _nnf(r, -1, true_sym)]),
        ])
    return ("and", [
        ("or", [_nnf(l, 1, true_sym), _nnf(r, 1, true_sym)]),
        ("or", [_nnf(l, -1, true_sym), _nnf(r, -1, true_sym)]),
    ])


def _skolemize(node, uvars, tmap, sig):
    kind = node[0]
    if kind == "lit":
        lit = node[1]
        if not tmap:
            return node
        return ("lit", Literal(subst_term(lit.lhs, tmap, {}),
                               subst_term(lit.rhs, tmap, {}), lit.positive))
    if kind in ("and", "or"):
        return (kind, [_skolemize(s, uvars, tmap, sig) for s in node[1]])
    _, v, sub = node
    if kind == "all":
        return _skolemize(sub, uvars + [v], tmap, sig)
    name = sig.fresh_sym(arrow([u.ty for u in uvars], v.ty))
    tmap = dict(tmap)
    tmap[v.vid] = apps(sig.sym(name), uvars)
    return _skolemize(sub, uvars, tmap, sig)


def _cnf(node):
    kind = node[0]
    if kind == "lit":
        return [[node[1]]]
    parts = [_cnf(s) for s in node[1]]
    if kind == "and":
        return [c for p in parts for c in p]
    out = parts[0]
    for p in parts[1:]:
        out = [c + d for c in out for d in p]
    return out


# ---------------------------------------------------------------------------
# Boolean argument lifting

def _bool_args(t, out, skip=frozenset()):
    """Proper first-order subterms of Boolean type at argument positions
    (not below binders), innermost first.  Heads named in `skip` are
    atoms a previous lift introduced and stay put."""
    if type(t) is Lam:
        return
    spine = []
    while type(t) is App:
        spine.append(t.arg)
        t = t.fun
    for a in reversed(spine):
        _bool_args(a, out, skip)
        if a.ty == TYPE_O and type(a) is not Var \
                and not _is_const_sym(a, "$true") and not _is_const_sym(a, "$false") \
                and _head_name(a) not in skip and a not in out:
            out.append(a)


def _head_name(t):
    while type(t) is App:
        t = t.fun
    return t.name if type(t) is Sym else None


def _replace_args(t, old, new):
    """Replace `old` at argument positions.  Occurrences under binders
    stay; the definition equation keeps them equal anyway."""
    if t == old:
        return new
    if type(t) is App:
        return app(_replace_args(t.fun, old, new), _replace_args(t.arg, old, new))
    return t


def _lift_bool_args(clauses, sig):
    """Name Boolean-typed argument subterms: each distinct one becomes a
    fresh predicate atom, defined by a unit equation so the replacement
    is a congruence."""
    memo = {}
    skip = set()
    out = []
    queue = list(clauses)
    while queue:
        c = queue.pop(0)
        found = []
        if c.rule != "bool_lift":
            for lit in c.lits:
                _bool_args(lit.lhs, found, skip)
                _bool_args(lit.rhs, found, skip)
        if not found:
            out.append(c)
            continue
        u = found[0]
        atom = memo.get(u)
        if atom is None:
            fv = sorted(free_vars(u).items())
            name = sig.fresh_sym(arrow([v.ty for _, v in fv], TYPE_O), prefix="bp")
            atom = apps(sig.sym(name), [v for _, v in fv])
            memo[u] = atom
            skip.add(name)
            queue.append(Clause((Literal(atom, u, True),), rule="bool_lift"))
        lits = tuple(
            Literal(_replace_args(l.lhs, u, atom),
                    _replace_args(l.rhs, u, atom), l.positive)
            for l in c.lits
        )
        queue.append(Clause(lits, rule=c.rule))
    return out


def _mentions_false(t, false):
    if t == false:
        return True
    if type(t) is App:
        return _mentions_false(t.fun, false) or _mentions_false(t.arg, false)
    if type(t) is Lam:
        return _mentions_false(t.body, false)
    return False


def _needs_bool_axiom(clauses, sig):
    """Boolean terms are reasoned about equationally as soon as anything
    beyond plain `atom = $true` literals shows up; then the two truth
    values must be kept distinct explicitly."""
    true = sig.sym("$true")
    false = sig.sym("$false")
    for c in clauses:
        for lit in c.lits:
            if lit.lhs.ty == TYPE_O and true not in (lit.lhs, lit.rhs):
                return True
            for side in (lit.lhs, lit.rhs):
                if _mentions_false(side, false):
                    return True
                found = []
                _bool_args(side, found)
                if found:
                    return True
    return False


# ---------------------------------------------------------------------------
# driver

def clausify(problem: Problem, cfg: ClausifyConfig = None) -> list:
    """Clauses for the problem: axioms positively, the conjecture
    negated, plus whatever preprocessing attached."""
    cfg = cfg or ClausifyConfig()
    sig = problem.sig
    true_sym = sig.sym("$true")
    jobs = []
    for st in problem.formulas:
        if st.role == "conjecture":
            jobs.append((FNot(st.formula), "negated_conjecture"))
        else:
            jobs.append((st.formula, st.role))

    clauses = []
    for f, rule in jobs:
        f = _simp(f)
        if f is _TRUE:
            continue
        if f is _FALSE:
            clauses.append(Clause((), rule=rule))
            continue
        namer = _Namer(sig, cfg.naming_threshold)
        pending = [(namer.run(f, 1), rule)]
        for pol, atom, body in namer.defs:
            if pol > 0:
                d = FBin("=>", atom, body)
            elif pol < 0:
                d = FBin("=>", body, atom)
            else:
                d = FBin("<=>", atom, body)
            pending.append((d, "naming"))
        for g, grule in pending:
            seed = [v for _, v in sorted(_formula_vars(g, {}).items())]
            tree = _skolemize(_nnf(g, 1, true_sym), seed, {}, sig)
            for lits in _cnf(tree):
                clauses.append(Clause(tuple(lits), rule=grule))

    clauses = _lift_bool_args(clauses, sig)
    clauses.extend(problem.extras)
    if _needs_bool_axiom(clauses, sig):
        clauses.append(Clause((Literal(true_sym, sig.sym("$false"), False),),
                              rule="true_ne_false"))
    return clauses
