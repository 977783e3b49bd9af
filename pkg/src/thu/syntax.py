"""Surface syntax: lexer, parser and printer for ``.thu`` scripts.

Terms::

    TYPE  KIND  ident  (t)  t u  A -> B  !x : A. B  \\x : A. b

Statements::

    [dagger] symbol c : A;
    [dagger] rule [name] l --> r [with x : A, ...] [where x = t, ...];
    #CHECK t : A;   #INFER t;   #NORMALIZE t;   #CONV t == u;
    #CLASSIFY t : A;   #REQUIRE name;

A rule name is either a hyphenated word (``imp-red``) or any word in
brackets (``[beta1]``).  ``//`` starts a line comment.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import ParseError
from .signature import RewriteRule, Signature
from .term import (
    KIND,
    TYPE,
    Abs,
    App,
    BVar,
    Const,
    Prod,
    Sort,
    Term,
    Var,
    arrow,
    const_of,
    free_vars,
    fresh_name,
    lam,
    pi,
)

RESERVED = frozenset({"TYPE", "KIND", "symbol", "rule", "with", "where"})
COMMANDS = ("#CHECK", "#INFER", "#NORMALIZE", "#CONV", "#CLASSIFY", "#REQUIRE")

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
HWORD = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)+")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*)
  | (?P<cmd>\#[A-Za-z]+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
  | (?P<punct>-->|->|==|[()\[\]:.,;!\\=])
    """,
    re.X,
)


@dataclass(frozen=True)
class Token:
    kind: str  # word, cmd, punct, eof
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    starts = [0] + [m.end() for m in re.finditer("\n", src)]

    def where(i):
        ln = bisect.bisect_right(starts, i)
        return ln, i - starts[ln - 1] + 1

    out = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if m is None:
            ln, col = where(i)
            raise ParseError(ln, col, f"a token, found {src[i]!r}")
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            ln, col = where(i)
            out.append(Token(kind, m.group(), ln, col))
        i = m.end()
    ln, col = where(len(src))
    out.append(Token("eof", "", ln, col))
    return out


# --------------------------------------------------------------------------
# script AST


@dataclass
class SymbolDecl:
    name: str
    type: Term
    dagger: bool = False
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class RuleDecl:
    name: str | None
    lhs: Term
    rhs: Term
    meta_ctx: tuple[tuple[str, Term], ...] = ()
    equations: tuple[tuple[Term, Term], ...] = ()
    dagger: bool = False
    annotated: bool = False  # a with-clause was written
    pos: tuple[int, int] = field(default=(0, 0), compare=False)

    def to_rule(self, sig: Signature | None = None, default_name: str = "rule") -> RewriteRule:
        lhs, rhs, eqs = self.lhs, self.rhs, self.equations
        if not self.annotated and sig is not None:
            # without annotations, names unknown to the signature are pattern variables
            names = (const_of(lhs) | const_of(rhs)) - sig.names
            lhs, rhs = _to_vars(lhs, names), _to_vars(rhs, names)
            eqs = tuple((_to_vars(a, names), _to_vars(b, names)) for a, b in eqs)
        return RewriteRule(self.name or default_name, lhs, rhs, self.meta_ctx, eqs, self.dagger)


@dataclass
class Check:
    term: Term
    type: Term
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Infer:
    term: Term
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Normalize:
    term: Term
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Conv:
    left: Term
    right: Term
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Classify:
    term: Term
    type: Term
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


@dataclass
class Require:
    name: str
    pos: tuple[int, int] = field(default=(0, 0), compare=False)


Statement = Union[SymbolDecl, RuleDecl, Check, Infer, Normalize, Conv, Classify, Require]


@dataclass
class Script:
    statements: list[Statement]


def _to_vars(t: Term, names) -> Term:
    match t:
        case Const(c) if c in names:
            return Var(c)
        case App(f, a):
            return App(_to_vars(f, names), _to_vars(a, names))
        case Prod(x, a, b):
            return Prod(x, _to_vars(a, names), _to_vars(b, names))
        case Abs(x, a, b):
            return Abs(x, _to_vars(a, names), _to_vars(b, names))
    return t


# --------------------------------------------------------------------------
# parser


class Parser:
    def __init__(self, src: str, variables=()):
        self.toks = tokenize(src)
        self.i = 0
        # names currently bound (by binders or given as free variables)
        self.scope: list[str] = list(variables)

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expectation: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(t.line, t.col, f"{expectation}, found {found}")

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text

    def eat(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        t = self.tok
        self.i += 1
        return t

    def ident(self, what="an identifier") -> str:
        t = self.tok
        if t.kind != "word" or t.text in RESERVED or not IDENT.fullmatch(t.text):
            self.fail(what)
        self.i += 1
        return t.text

    # terms

    def term(self) -> Term:
        if self.at("!") or self.at("\\"):
            kind = self.tok.text
            self.i += 1
            x = self.ident("a binder name")
            self.eat(":")
            dom = self.term()
            self.eat(".")
            self.scope.append(x)
            try:
                body = self.term()
            finally:
                self.scope.pop()
            return pi(x, dom, body) if kind == "!" else lam(x, dom, body)
        left = self.application()
        if self.at("->"):
            self.i += 1
            right = self.term()
            return arrow(left, right)
        return left

    def application(self) -> Term:
        t = self.atom()
        if t is None:
            self.fail("a term")
        while (a := self.atom()) is not None:
            t = App(t, a)
        return t

    def atom(self) -> Term | None:
        tok = self.tok
        if tok.kind == "word":
            if tok.text == "TYPE":
                self.i += 1
                return TYPE
            if tok.text == "KIND":
                self.i += 1
                return KIND
            if tok.text in RESERVED:
                return None
            if not IDENT.fullmatch(tok.text):
                self.fail("an identifier without '-'")
            self.i += 1
            return Var(tok.text) if tok.text in self.scope else Const(tok.text)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.eat(")")
            return t
        return None

    # statements

    def script(self) -> Script:
        out = []
        while self.tok.kind != "eof":
            out.append(self.statement())
        return Script(out)

    def statement(self) -> Statement:
        tok = self.tok
        pos = (tok.line, tok.col)
        dagger = False
        if tok.kind == "word" and tok.text == "dagger":
            dagger = True
            self.i += 1
        if self.at("symbol"):
            self.i += 1
            name = self.ident("a constant name")
            self.eat(":")
            ty = self.term()
            self.eat(";")
            return SymbolDecl(name, ty, dagger, pos)
        if self.at("rule"):
            self.i += 1
            return self.rule(dagger, pos)
        if dagger:
            self.fail("'symbol' or 'rule' after 'dagger'")
        if tok.kind == "cmd":
            self.i += 1
            match tok.text:
                case "#CHECK" | "#CLASSIFY":
                    t = self.term()
                    self.eat(":")
                    a = self.term()
                    st = Check(t, a, pos) if tok.text == "#CHECK" else Classify(t, a, pos)
                case "#INFER":
                    st = Infer(self.term(), pos)
                case "#NORMALIZE":
                    st = Normalize(self.term(), pos)
                case "#CONV":
                    t = self.term()
                    self.eat("==")
                    st = Conv(t, self.term(), pos)
                case "#REQUIRE":
                    if self.tok.kind != "word":
                        self.fail("a theory name")
                    st = Require(self.tok.text, pos)
                    self.i += 1
                case _:
                    self.i -= 1
                    self.fail("one of " + ", ".join(COMMANDS))
            self.eat(";")
            return st
        self.fail("a statement ('symbol', 'rule' or a #COMMAND)")

    def rule(self, dagger: bool, pos) -> RuleDecl:
        name = None
        if self.at("["):
            self.i += 1
            if self.tok.kind != "word":
                self.fail("a rule name")
            name = self.tok.text
            self.i += 1
            self.eat("]")
        elif self.tok.kind == "word" and HWORD.fullmatch(self.tok.text):
            name = self.tok.text
            self.i += 1
        lhs = self.term()
        self.eat("-->")
        rhs = self.term()
        meta, eqs, annotated = [], [], False
        if self.at("with"):
            self.i += 1
            annotated = True
            while True:
                x = self.ident("a pattern variable")
                self.eat(":")
                meta.append((x, self.term()))
                if not self.at(","):
                    break
                self.i += 1
        if self.at("where"):
            self.i += 1
            while True:
                a = self.term()
                self.eat("=")
                eqs.append((a, self.term()))
                if not self.at(","):
                    break
                self.i += 1
        self.eat(";")
        names = {x for x, _ in meta}
        return RuleDecl(
            name,
            _to_vars(lhs, names),
            _to_vars(rhs, names),
            tuple((x, _to_vars(a, names)) for x, a in meta),
            tuple((_to_vars(a, names), _to_vars(b, names)) for a, b in eqs),
            dagger,
            annotated,
            pos,
        )


def parse_term(src: str, variables=()) -> Term:
    """Parse a single term.  Names in ``variables`` become free variables, others constants."""
    p = Parser(src, variables)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("end of term")
    return t


def parse(src: str) -> Script:
    return Parser(src).script()


# --------------------------------------------------------------------------
# printer

TOP, DOM, LEFT, ARG = range(4)


def _uses_index0(t: Term, depth: int = 0) -> bool:
    match t:
        case BVar(i):
            return i == depth
        case App(f, a):
            return _uses_index0(f, depth) or _uses_index0(a, depth)
        case Prod(_, a, b) | Abs(_, a, b):
            return _uses_index0(a, depth) or _uses_index0(b, depth + 1)
    return False


def format_term(t: Term) -> str:
    avoid = set(const_of(t)) | set(free_vars(t)) | RESERVED
    return _fmt(t, [], TOP, avoid)


def _fmt(t: Term, env: list[str], prec: int, avoid: set[str]) -> str:
    match t:
        case Const(c) | Var(c):
            return c
        case Sort(s):
            return s
        case BVar(i):
            return env[-1 - i] if i < len(env) else f"#{i}"
        case App(f, a):
            s = f"{_fmt(f, env, LEFT, avoid)} {_fmt(a, env, ARG, avoid)}"
            return f"({s})" if prec >= ARG else s
        case Prod(x, a, b) if not _uses_index0(b):
            s = f"{_fmt(a, env, LEFT, avoid)} -> {_fmt(b, env + ['?'], TOP, avoid)}"
            return f"({s})" if prec >= LEFT else s
        case Prod(x, a, b) | Abs(x, a, b):
            hint = x if IDENT.fullmatch(x or "") else "x"
            y = fresh_name(hint, avoid | set(env))
            mark = "!" if isinstance(t, Prod) else "\\"
            s = f"{mark}{y}:{_fmt(a, env, DOM, avoid)}. {_fmt(b, env + [y], TOP, avoid)}"
            return f"({s})" if prec >= DOM else s
    raise TypeError(f"not a term: {t!r}")


def _rule_name(name: str) -> str:
    return name if HWORD.fullmatch(name) else f"[{name}]"


def format_rule(rule: RewriteRule | RuleDecl) -> str:
    meta = rule.meta_ctx
    eqs = rule.lhs_equations if isinstance(rule, RewriteRule) else rule.equations
    name = rule.name
    s = "dagger " if rule.dagger else ""
    s += "rule "
    if name:
        s += _rule_name(name) + " "
    s += f"{format_term(rule.lhs)} --> {format_term(rule.rhs)}"
    if meta:
        s += " with " + ", ".join(f"{x} : {format_term(a)}" for x, a in meta)
    if eqs:
        s += " where " + ", ".join(f"{format_term(a)} = {format_term(b)}" for a, b in eqs)
    return s + ";"


def format_statement(st: Statement) -> str:
    match st:
        case SymbolDecl(name, ty, dagger):
            return f"{'dagger ' if dagger else ''}symbol {name} : {format_term(ty)};"
        case RuleDecl():
            return format_rule(st)
        case Check(t, a):
            return f"#CHECK {format_term(t)} : {format_term(a)};"
        case Classify(t, a):
            return f"#CLASSIFY {format_term(t)} : {format_term(a)};"
        case Infer(t):
            return f"#INFER {format_term(t)};"
        case Normalize(t):
            return f"#NORMALIZE {format_term(t)};"
        case Conv(t, u):
            return f"#CONV {format_term(t)} == {format_term(u)};"
        case Require(name):
            return f"#REQUIRE {name};"
    raise TypeError(st)


def format_script(script: Script) -> str:
    return "".join(format_statement(st) + "\n" for st in script.statements)


def format_context(entries) -> str:
    return ", ".join(f"{x} : {format_term(a)}" for x, a in entries)

