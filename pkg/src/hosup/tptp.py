"""Reader and printer for a THF subset.

Supported statements are `thf(name, role, formula).` with roles axiom,
hypothesis, definition, lemma, conjecture, negated_conjecture and type,
plus `include('file').` resolved against a configurable root.  Formulas
use the binders ! ? ^, the connectives ~ & | => <=>, equality = and !=,
and left-associative application @.  Types are $i, $o, declared sorts
and right-associative arrows.

Everything else in the TPTP zoo (other dialects, arithmetic, the exotic
connectives) is rejected with an error naming the construct.
"""

import os
from dataclasses import dataclass, field
from typing import Optional, Union

from .holtypes import TYPE_O, TArrow, TCon, Type
from .terms import (
    App,
    Bound,
    Lam,
    Signature,
    Sym,
    Term,
    TermError,
    Var,
    mk_app,
    thf_type,
)


class ParseError(Exception):
    def __init__(self, msg, path="<input>", line=0, col=0):
        super().__init__(msg)
        self.msg = msg
        self.path = path
        self.line = line
        self.col = col

    def __str__(self):
        return "%s:%d:%d: %s" % (self.path, self.line, self.col, self.msg)


class UnsupportedError(ParseError):
    """Input is (probably) valid TPTP, but outside the supported subset."""


# ---------------------------------------------------------------------------
# formula AST
#
# Terms inside formulas are the shared Term encoding; universally and
# existentially quantified variables appear in them as free Vars whose
# ids are assigned per statement in binder-encounter order, which keeps
# parse/print round trips exact.

@dataclass(frozen=True)
class FAtom:
    term: Term


@dataclass(frozen=True)
class FEq:
    lhs: Term
    rhs: Term
    positive: bool


@dataclass(frozen=True)
class FNot:
    sub: "Formula"


@dataclass(frozen=True)
class FBin:
    op: str  # "&" "|" "=>" "<=>"
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class FQuant:
    kind: str  # "!" or "?"
    vid: int
    name: str
    ty: Type
    body: "Formula"


Formula = Union[FAtom, FEq, FNot, FBin, FQuant]


@dataclass
class Statement:
    name: str
    role: str
    formula: Optional[Formula] = None
    decl: Optional[tuple] = None  # (symbol name, Type) or (sort name, None)
    path: str = field(default="<input>", compare=False)
    line: int = field(default=0, compare=False)


@dataclass
class Problem:
    sig: Signature
    statements: list
    # clause-level axioms attached by preprocessing (extensionality, choice)
    extras: list = field(default_factory=list)

    @property
    def formulas(self):
        return [s for s in self.statements if s.formula is not None]

    @property
    def conjecture(self) -> Optional[Statement]:
        for s in self.statements:
            if s.role == "conjecture":
                return s
        return None


# ---------------------------------------------------------------------------
# tokens

_OPS = ("<=>", "<~>", "=>", "<=", "~&", "~|", "!=", "!!", "??",
        "@+", "@-", ":=", "@", "^", "!", "?", "~", "&", "|", "=", ">", "<", ":")
_PUNCT = "()[],."
_UNSUPPORTED_OPS = {"<~>", "<=", "~&", "~|", "!!", "??", "@+", "@-", ":=", "<"}


@dataclass(frozen=True)
class Token:
    kind: str  # lower upper dollar num squote op punct eof
    text: str
    line: int
    col: int


def _tokenize(text: str, path: str) -> list:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == "'":
            j = i + 1
            while j < n and text[j] != "'":
                j += 1
            if j >= n:
                raise ParseError("unterminated quoted name", path, start_line, start_col)
            toks.append(Token("squote", text[i + 1:j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isalpha() or c == "$" or c.isdigit():
            j = i
            if c == "$":
                j += 1
                if j < n and text[j] == "$":
                    j += 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if c == "$":
                kind = "dollar"
            elif c.isdigit():
                kind = "num"
            elif c.isupper():
                kind = "upper"
            else:
                kind = "lower"
            toks.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if c in _PUNCT:
            toks.append(Token("punct", c, start_line, start_col))
            i += 1
            col += 1
            continue
        for op in _OPS:
            if text.startswith(op, i):
                toks.append(Token("op", op, start_line, start_col))
                i += len(op)
                col += len(op)
                break
        else:
            raise ParseError("unexpected character %r" % c, path, start_line, start_col)
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# parser

_ROLES = ("axiom", "hypothesis", "definition", "lemma",
          "conjecture", "negated_conjecture", "type")


class _Parser:
    def __init__(self, sig, statements, include_root, seen):
        self.sig = sig
        self.statements = statements
        self.include_root = include_root
        self.seen = seen
        self.path = "<input>"
        self.toks = []
        self.pos = 0
        self._vid = 0
        self._qvars = {}  # name -> Var, current quantifier scope
        self._lams = []  # (name, ty) stack, innermost last

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def err(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(msg, self.path, tok.line, tok.col)

    def expect(self, kind, text=None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            self.err("expected %r, found %r" % (text or kind, t.text or "end of input"))
        return self.next()

    def accept(self, kind, text=None) -> Optional[Token]:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    # -- statements ---------------------------------------------------------

    def file(self, text, path):
        self.path = path
        self.toks = _tokenize(text, path)
        self.pos = 0
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind == "lower" and t.text == "include":
                self.include()
            elif t.kind == "lower" and t.text == "thf":
                self.statement()
            elif t.kind == "lower" and t.text in ("fof", "cnf", "tff", "tcf", "tpi"):
                self.err("dialect %r is not supported, only thf" % t.text, t,
                         UnsupportedError)
            else:
                self.err("expected a thf statement or include")

    def include(self):
        self.next()
        self.expect("punct", "(")
        tok = self.peek()
        rel = self.expect("squote").text
        self.expect("punct", ")")
        self.expect("punct", ".")
        root = self.include_root
        if root is None:
            root = os.path.dirname(self.path) or "."
        full = os.path.normpath(os.path.join(root, rel))
        if full in self.seen:
            self.err("circular include of %r" % rel, tok)
        self.seen.add(full)
        try:
            with open(full, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            self.err("cannot read include %r: %s" % (rel, e.strerror), tok)
        sub = _Parser(self.sig, self.statements, self.include_root, self.seen)
        sub.file(text, full)

    def statement(self):
        start = self.next()
        self.expect("punct", "(")
        t = self.peek()
        if t.kind in ("lower", "num", "squote"):
            name = self.next().text
        else:
            self.err("expected a statement name")
        self.expect("punct", ",")
        role_tok = self.peek()
        role = self.expect("lower").text
        if role not in _ROLES:
            self.err("role %r is not supported" % role, role_tok, UnsupportedError)
        self.expect("punct", ",")
        self._vid = 0
        self._qvars = {}
        if role == "type":
            decl = self.type_decl()
            st = Statement(name, role, decl=decl, path=self.path, line=start.line)
        else:
            f = self.as_formula(self.expr())
            if role == "conjecture" and any(
                s.role == "conjecture" for s in self.statements
            ):
                self.err("multiple conjecture statements", start, UnsupportedError)
            st = Statement(name, role, formula=f, path=self.path, line=start.line)
        self.expect("punct", ")")
        self.expect("punct", ".")
        self.statements.append(st)

    def type_decl(self):
        parens = 0
        while self.accept("punct", "("):
            parens += 1
        t = self.peek()
        if t.kind not in ("lower", "squote"):
            self.err("expected a symbol name in type declaration")
        name = self.next().text
        self.expect("op", ":")
        if self.peek().kind == "dollar" and self.peek().text == "$tType":
            self.next()
            self.sig.declare_sort(name)
            decl = (name, None)
        else:
            ty = self.type_expr()
            try:
                self.sig.declare(name, ty)
            except TermError as e:
                self.err(str(e), t)
            decl = (name, ty)
        for _ in range(parens):
            self.expect("punct", ")")
        return decl

    def type_expr(self) -> Type:
        ty = self.type_atom()
        if self.accept("op", ">"):
            return TArrow(ty, self.type_expr())
        return ty

    def type_atom(self) -> Type:
        t = self.peek()
        if t.kind == "punct" and t.text == "(":
            self.next()
            ty = self.type_expr()
            self.expect("punct", ")")
            return ty
        if t.kind == "dollar":
            if t.text in ("$i", "$o"):
                self.next()
                return TCon(t.text)
            self.err("type %r is not supported" % t.text, t, UnsupportedError)
        if t.kind == "lower":
            if t.text not in self.sig.sorts:
                self.err("undeclared sort %r" % t.text, t)
            self.next()
            return TCon(t.text)
        self.err("expected a type")

    # -- formulas and terms --------------------------------------------------
    #
    # expr/unit return either a Formula node or a bare Term; which one
    # the context wants is settled by as_formula/as_term.  Parentheses
    # are transparent, so `(f @ a) = c` works out.

    def as_formula(self, x) -> Formula:
        if isinstance(x, Term):
            if x.ty != TYPE_O:
                self.err("expected a formula, got a term of type %s" % thf_type(x.ty))
            return FAtom(x)
        return x

    def as_term(self, x, what) -> Term:
        if isinstance(x, Term):
            return x
        kind = {
            FEq: "an equation",
            FNot: "a negation",
            FBin: "a connective",
            FQuant: "a quantified formula",
        }[type(x)]
        self.err("%s cannot appear inside %s" % (kind, what), cls=UnsupportedError)

    def expr(self):
        x = self.unit()
        t = self.peek()
        if t.kind != "op" or t.text not in ("&", "|", "=>", "<=>"):
            if t.kind == "op" and t.text in _UNSUPPORTED_OPS:
                self.err("connective %r is not supported" % t.text, t, UnsupportedError)
            return x
        op = self.next().text
        lhs = self.as_formula(x)
        rhs = self.as_formula(self.unit())
        out = FBin(op, lhs, rhs)
        if op in ("&", "|"):
            while True:
                t = self.peek()
                if t.kind == "op" and t.text in ("&", "|"):
                    if t.text != op:
                        self.err("mixing %r and %r needs parentheses" % (op, t.text), t)
                    self.next()
                    out = FBin(op, out, self.as_formula(self.unit()))
                else:
                    break
        else:
            t = self.peek()
            if t.kind == "op" and t.text in ("&", "|", "=>", "<=>"):
                self.err("%r is not associative, use parentheses" % op, t)
        return out

    def unit(self):
        t = self.peek()
        if t.kind == "op" and t.text == "~":
            self.next()
            return FNot(self.as_formula(self.unit()))
        if t.kind == "op" and t.text in ("!", "?"):
            return self.quantifier()
        x = self.term()
        t = self.peek()
        if t.kind == "op" and t.text in ("=", "!="):
            self.next()
            lhs = self.as_term(x, "an equation")
            rhs = self.as_term(self.term(), "an equation")
            if lhs.ty != rhs.ty:
                self.err("equation between types %s and %s"
                         % (thf_type(lhs.ty), thf_type(rhs.ty)), t)
            return FEq(lhs, rhs, t.text == "=")
        return x

    def quantifier(self):
        kind = self.next().text
        self.expect("punct", "[")
        binders = []
        while True:
            name_tok = self.expect("upper")
            self.expect("op", ":")
            binders.append((name_tok.text, self.type_expr()))
            if not self.accept("punct", ","):
                break
        self.expect("punct", "]")
        self.expect("op", ":")
        saved = {}
        vs = []
        for name, ty in binders:
            v = Var(self._vid, ty)
            self._vid += 1
            saved[name] = self._qvars.get(name)
            self._qvars[name] = v
            vs.append((name, v))
        body = self.as_formula(self.unit())
        for name, old in saved.items():
            if old is None:
                del self._qvars[name]
            else:
                self._qvars[name] = old
        for name, v in reversed(vs):
            body = FQuant(kind, v.vid, name, v.ty, body)
        return body

    def term(self):
        x = self.lam()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "@":
                self.next()
                fun = self.as_term(x, "an application")
                arg = self.as_term(self.lam(), "an application")
                try:
                    x = mk_app(fun, arg)
                except TermError as e:
                    self.err(str(e), t)
            else:
                return x

    def lam(self):
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            self.expect("punct", "[")
            binders = []
            while True:
                name_tok = self.expect("upper")
                self.expect("op", ":")
                binders.append((name_tok.text, self.type_expr()))
                if not self.accept("punct", ","):
                    break
            self.expect("punct", "]")
            self.expect("op", ":")
            self._lams.extend(binders)
            body = self.as_term(self.lam(), "a lambda body")
            del self._lams[len(self._lams) - len(binders):]
            for _, ty in reversed(binders):
                body = Lam(ty, body)
            return body
        return self.atom()

    def atom(self):
        t = self.peek()
        if t.kind == "punct" and t.text == "(":
            self.next()
            x = self.expr()
            self.expect("punct", ")")
            return x
        if t.kind == "upper":
            self.next()
            for i in range(len(self._lams) - 1, -1, -1):
                if self._lams[i][0] == t.text:
                    return Bound(len(self._lams) - 1 - i, self._lams[i][1])
            v = self._qvars.get(t.text)
            if v is None:
                self.err("unbound variable %r" % t.text, t)
            return v
        if t.kind in ("lower", "squote"):
            self.next()
            if t.text not in self.sig:
                self.err("undeclared symbol %r" % t.text, t)
            return self.sig.sym(t.text)
        if t.kind == "dollar":
            if t.text in ("$true", "$false"):
                self.next()
                return self.sig.sym(t.text)
            self.err("%r is not supported" % t.text, t, UnsupportedError)
        if t.kind == "num":
            self.err("numeric terms are not supported", t, UnsupportedError)
        self.err("expected a term, found %r" % (t.text or "end of input"))


def parse_problem(text, path="<input>", include_root=None) -> Problem:
    """Parse a THF file (bytes or str) into a Problem.  Includes are
    resolved against include_root, defaulting to the file's directory."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    sig = Signature()
    statements = []
    p = _Parser(sig, statements, include_root, {os.path.normpath(path)})
    p.file(text, path)
    return Problem(sig, statements)


def parse_file(path, include_root=None) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read(), path, include_root)


# ---------------------------------------------------------------------------
# printer
#
# print_problem(parse_problem(x)) reparses to the same statements: vids
# are assigned in binder-encounter order, which printing preserves, and
# lambda binders get display names that cannot collide with the
# quantified ones.

def _used_names(f, acc):
    if isinstance(f, FQuant):
        acc.add(f.name)
        _used_names(f.body, acc)
    elif isinstance(f, FNot):
        _used_names(f.sub, acc)
    elif isinstance(f, FBin):
        _used_names(f.lhs, acc)
        _used_names(f.rhs, acc)


def _fmt_term(t, names, lams, prefix):
    tt = type(t)
    if tt is Var:
        return names[t.vid]
    if tt is Bound:
        return lams[len(lams) - 1 - t.index]
    if tt is Lam:
        b = "%s%d" % (prefix, len(lams))
        body = _fmt_term(t.body, names, lams + [b], prefix)
        return "(^ [%s : %s] : %s)" % (b, thf_type(t.arg_ty), body)
    if tt is Sym:
        return t.name
    parts = []
    while type(t) is App:
        parts.append(t.arg)
        t = t.fun
    parts.append(t)
    parts.reverse()
    return "(%s)" % " @ ".join(_fmt_term(u, names, lams, prefix) for u in parts)


def _fmt(f, names, prefix):
    if isinstance(f, FAtom):
        return _fmt_term(f.term, names, [], prefix)
    if isinstance(f, FEq):
        op = "=" if f.positive else "!="
        return "%s %s %s" % (_fmt_term(f.lhs, names, [], prefix), op,
                             _fmt_term(f.rhs, names, [], prefix))
    if isinstance(f, FNot):
        sub = _fmt(f.sub, names, prefix)
        if not isinstance(f.sub, FAtom):
            sub = "(%s)" % sub
        return "~ %s" % sub
    if isinstance(f, FBin):
        if f.op in ("&", "|"):
            ops = []
            node = f
            while isinstance(node, FBin) and node.op == f.op:
                ops.append(node.rhs)
                node = node.lhs
            ops.append(node)
            ops.reverse()
        else:
            ops = [f.lhs, f.rhs]
        sides = []
        for g in ops:
            s = _fmt(g, names, prefix)
            if not isinstance(g, (FAtom, FEq)):
                s = "(%s)" % s
            sides.append(s)
        return (" %s " % f.op).join(sides)
    names = dict(names)
    names[f.vid] = f.name
    return "%s [%s : %s] : (%s)" % (f.kind, f.name, thf_type(f.ty),
                                    _fmt(f.body, names, prefix))


def print_formula(f) -> str:
    used = set()
    _used_names(f, used)
    prefix = "Y"
    while any(u.startswith(prefix) for u in used):
        prefix += "Y"
    return _fmt(f, {}, prefix)


def print_problem(p: Problem) -> str:
    lines = []
    for st in p.statements:
        if st.decl is not None:
            name, ty = st.decl
            body = "%s : %s" % (name, "$tType" if ty is None else thf_type(ty))
        else:
            body = print_formula(st.formula)
        lines.append("thf(%s, %s, %s)." % (st.name, st.role, body))
    return "\n".join(lines) + "\n"
