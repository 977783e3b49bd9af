"""Encodings into U: first-order languages, formulas and sequents, natural
deduction proofs (by Curry-Howard), and functional pure type systems."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Union

from .errors import ArityMismatch, DuplicateSymbol, NonFunctionalSpec, UnknownSymbol
from .signature import (
    AxiomCluster,
    Context,
    Declaration,
    RewriteRule,
    Theory,
    theory_from_clusters,
)
from .term import (
    TYPE,
    Abs,
    App,
    Const,
    Prod,
    Term,
    Var,
    app,
    arrow,
    fresh_name,
    lam,
    pi,
    subst_many,
)

I = Const("I")
PROP = Const("Prop")
PRF = Const("Prf")
IOTA = Const("iota")


# --------------------------------------------------------------------------
# predicate logic


@dataclass(frozen=True)
class PLLanguage:
    functions: tuple[tuple[str, int], ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()

    def arity(self, name: str) -> tuple[str, int] | None:
        for f, n in self.functions:
            if f == name:
                return "function", n
        for p, n in self.predicates:
            if p == name:
                return "predicate", n
        return None

    @property
    def names(self) -> list[str]:
        return [f for f, _ in self.functions] + [p for p, _ in self.predicates]


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class Fn:
    name: str
    args: tuple = ()


PLTerm = Union[PVar, Fn]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class Imp:
    left: "PLFormula"
    right: "PLFormula"


@dataclass(frozen=True)
class And:
    left: "PLFormula"
    right: "PLFormula"


@dataclass(frozen=True)
class Or:
    left: "PLFormula"
    right: "PLFormula"


@dataclass(frozen=True)
class Neg:
    body: "PLFormula"


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Forall:
    var: str
    body: "PLFormula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "PLFormula"


PLFormula = Union[Atom, Imp, And, Or, Neg, TrueF, FalseF, Forall, Exists]


def encode_pl_language(lang: PLLanguage) -> Context:
    seen = set()
    entries = []
    for name, n in lang.functions:
        if name in seen:
            raise DuplicateSymbol(name)
        seen.add(name)
        entries.append((name, arrow(*([I] * n), I)))
    for name, n in lang.predicates:
        if name in seen:
            raise DuplicateSymbol(name)
        seen.add(name)
        entries.append((name, arrow(*([I] * n), PROP)))
    return Context(tuple(entries))


def _encode_term(lang: PLLanguage, t: PLTerm) -> Term:
    match t:
        case PVar(x):
            if lang.arity(x) is not None:
                raise DuplicateSymbol(f"variable {x} clashes with a symbol of the language")
            return Var(x)
        case Fn(f, args):
            info = lang.arity(f)
            if info is None or info[0] != "function":
                raise UnknownSymbol(f"function symbol {f}")
            if info[1] != len(args):
                raise ArityMismatch(f"{f} takes {info[1]} argument(s), got {len(args)}")
            return app(Var(f), *(_encode_term(lang, a) for a in args))
    raise TypeError(t)


def encode_pl_formula(lang: PLLanguage, f: PLFormula, classical: bool = False) -> Term:
    """Translate a formula; ``classical`` selects the double-negation connectives."""
    imp, and_, or_ = ("impc", "andc", "orc") if classical else ("imp", "and", "or")
    all_, ex = ("allc", "exc") if classical else ("all", "ex")

    def go(f: PLFormula) -> Term:
        match f:
            case Atom(p, args):
                info = lang.arity(p)
                if info is None or info[0] != "predicate":
                    raise UnknownSymbol(f"predicate symbol {p}")
                if info[1] != len(args):
                    raise ArityMismatch(f"{p} takes {info[1]} argument(s), got {len(args)}")
                return app(Var(p), *(_encode_term(lang, a) for a in args))
            case Imp(a, b):
                return app(Const(imp), go(a), go(b))
            case And(a, b):
                return app(Const(and_), go(a), go(b))
            case Or(a, b):
                return app(Const(or_), go(a), go(b))
            case Neg(a):
                return App(Const("neg"), go(a))
            case TrueF():
                return Const("top")
            case FalseF():
                return Const("bot")
            case Forall(z, body) | Exists(z, body):
                if lang.arity(z) is not None:
                    raise DuplicateSymbol(f"bound variable {z} clashes with a symbol of the language")
                q = all_ if isinstance(f, Forall) else ex
                return app(Const(q), IOTA, lam(z, I, go(body)))
        raise TypeError(f)

    return go(f)


def pl_free_vars(f: PLFormula, bound=frozenset()) -> list[str]:
    """Free variables in order of first occurrence."""
    out: list[str] = []

    def term(t, bound):
        match t:
            case PVar(x) if x not in bound and x not in out:
                out.append(x)
            case Fn(_, args):
                for a in args:
                    term(a, bound)

    def form(f, bound):
        match f:
            case Atom(_, args):
                for a in args:
                    term(a, bound)
            case Imp(a, b) | And(a, b) | Or(a, b):
                form(a, bound)
                form(b, bound)
            case Neg(a):
                form(a, bound)
            case Forall(z, body) | Exists(z, body):
                form(body, bound | {z})

    form(f, frozenset(bound))
    return out


def encode_pl_sequent(
    lang: PLLanguage, hyps: list[PLFormula], goal: PLFormula, classical: bool = False
) -> tuple[Context, Term]:
    """Context Gamma_L, Delta, Delta' and the target type ``Prf B``.

    Delta types the free variables at I; Delta' names the hypotheses a1, a2, ...
    """
    ctx = encode_pl_language(lang)
    fvs: list[str] = []
    for f in list(hyps) + [goal]:
        for x in pl_free_vars(f):
            if x not in fvs:
                fvs.append(x)
    for x in fvs:
        if x in ctx.names:
            raise DuplicateSymbol(f"variable {x} clashes with a symbol of the language")
        ctx = ctx.extend(x, I)
    for i, h in enumerate(hyps, 1):
        name = fresh_name(f"a{i}", ctx.names)
        ctx = ctx.extend(name, App(PRF, encode_pl_formula(lang, h, classical)))
    return ctx, App(PRF, encode_pl_formula(lang, goal, classical))


# natural deduction (minimal fragment: implication and universal quantifier)


@dataclass(frozen=True)
class Hyp:
    label: str


@dataclass(frozen=True)
class ImpIntro:
    label: str
    assumption: PLFormula
    body: "NDProof"


@dataclass(frozen=True)
class ImpElim:
    major: "NDProof"
    minor: "NDProof"


@dataclass(frozen=True)
class ForallIntro:
    var: str
    body: "NDProof"


@dataclass(frozen=True)
class ForallElim:
    proof: "NDProof"
    witness: PLTerm


NDProof = Union[Hyp, ImpIntro, ImpElim, ForallIntro, ForallElim]


def transcribe(lang: PLLanguage, proof: NDProof) -> Term:
    """Curry-Howard reading of a natural deduction proof as a lambda-term.

    Open hypotheses are free variables named by their labels, so a proof of a
    sequent refers to the hypotheses a1, a2, ... of ``encode_pl_sequent``.
    """
    match proof:
        case Hyp(label):
            return Var(label)
        case ImpIntro(label, a, body):
            return lam(label, App(PRF, encode_pl_formula(lang, a)), transcribe(lang, body))
        case ImpElim(major, minor):
            return App(transcribe(lang, major), transcribe(lang, minor))
        case ForallIntro(z, body):
            return lam(z, I, transcribe(lang, body))
        case ForallElim(p, w):
            return App(transcribe(lang, p), _encode_term(lang, w))
    raise TypeError(proof)


# --------------------------------------------------------------------------
# pure type systems


@dataclass(frozen=True)
class PTSSpec:
    sorts: tuple[str, ...]
    axioms: tuple[tuple[str, str], ...]
    rules: tuple[tuple[str, str, str], ...]


COC_SPEC = PTSSpec(
    ("*", "□"),
    (("*", "□"),),
    (("*", "*", "*"), ("*", "□", "□"), ("□", "*", "*"), ("□", "□", "□")),
)
LAMBDA_PI_SPEC = PTSSpec(("*", "□"), (("*", "□"),), (("*", "*", "*"), ("*", "□", "□")))

# the renaming that turns the encoding of COC_SPEC into the catalog's constants
COC_RENAMING = {
    "U_star": "Prop",
    "eps_star": "Prf",
    "U_box": "Set",
    "eps_box": "El",
    "dot_star": "o",
    "Pi_star_star_star": "impd",
    "Pi_box_star_star": "all",
    "Pi_star_box_box": "pi",
    "Pi_box_box_box": "arrd",
}

_SORT_NAMES = {"*": "star", "□": "box", "△": "tri", "☐": "box", "∗": "star"}
_IDENT = re.compile(r"[A-Za-z0-9_']+")


def sort_ident(s: str) -> str:
    if s in _SORT_NAMES:
        return _SORT_NAMES[s]
    if _IDENT.fullmatch(s):
        return s
    raise UnknownSymbol(f"sort name {s!r} has no ASCII spelling")


def check_functional(spec: PTSSpec) -> None:
    sorts = set(spec.sorts)
    if len(sorts) != len(spec.sorts):
        raise NonFunctionalSpec("a sort is listed twice")
    names = [sort_ident(s) for s in spec.sorts]
    if len(set(names)) != len(names):
        raise NonFunctionalSpec("two sorts share an ASCII spelling")
    seen_ax: dict[str, str] = {}
    for s1, s2 in spec.axioms:
        if not {s1, s2} <= sorts:
            raise UnknownSymbol(f"axiom ({s1}, {s2}) mentions an undeclared sort")
        if seen_ax.get(s1, s2) != s2:
            raise NonFunctionalSpec(f"sort {s1} has two types")
        seen_ax[s1] = s2
    seen_r: dict[tuple[str, str], str] = {}
    for s1, s2, s3 in spec.rules:
        if not {s1, s2, s3} <= sorts:
            raise UnknownSymbol(f"rule ({s1}, {s2}, {s3}) mentions an undeclared sort")
        if seen_r.get((s1, s2), s3) != s3:
            raise NonFunctionalSpec(f"rule ({s1}, {s2}, _) has two targets")
        seen_r[(s1, s2)] = s3


def encode_pts(spec: PTSSpec, name: str = "pts") -> Theory:
    check_functional(spec)
    U = {s: Const(f"U_{sort_ident(s)}") for s in spec.sorts}
    eps = {s: Const(f"eps_{sort_ident(s)}") for s in spec.sorts}
    clusters = []
    for s in spec.sorts:
        clusters.append(AxiomCluster(U[s].name, (Declaration(U[s].name, TYPE),)))
        clusters.append(AxiomCluster(eps[s].name, (Declaration(eps[s].name, arrow(U[s], TYPE)),)))
    for s1, s2 in dict.fromkeys(spec.axioms):
        dot = f"dot_{sort_ident(s1)}"
        rule = RewriteRule(f"{dot}-red", App(eps[s2], Const(dot)), U[s1])
        clusters.append(AxiomCluster(dot, (Declaration(dot, U[s2]),), (rule,)))
    for s1, s2, s3 in dict.fromkeys(spec.rules):
        c = f"Pi_{sort_ident(s1)}_{sort_ident(s2)}_{sort_ident(s3)}"
        x, y = Var("x"), Var("y")
        ty = pi("x", U[s1], arrow(arrow(App(eps[s1], x), U[s2]), U[s3]))
        lhs = App(eps[s3], app(Const(c), x, y))
        rhs = pi("z", App(eps[s1], x), App(eps[s2], App(y, Var("z"))))
        meta = (("x", U[s1]), ("y", arrow(App(eps[s1], x), U[s2])))
        rule = RewriteRule(f"{c}-red", lhs, rhs, meta)
        clusters.append(AxiomCluster(c, (Declaration(c, ty),), (rule,)))
    return theory_from_clusters(clusters, name)


def parse_pts_spec(text: str) -> PTSSpec:
    """``sorts: * box; axioms: *:box; rules: *,*,* *,box,box`` (fields in any order)."""
    fields = {"sorts": "", "axioms": "", "rules": ""}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, _, val = part.partition(":")
        key = key.strip()
        if key not in fields:
            raise UnknownSymbol(f"unknown field {key!r} (expected sorts, axioms, rules)")
        fields[key] = val
    sorts = tuple(fields["sorts"].split())
    axioms = tuple(tuple(a.split(":")) for a in fields["axioms"].split())
    rules = tuple(tuple(r.split(",")) for r in fields["rules"].split())
    if any(len(a) != 2 for a in axioms) or any(len(r) != 3 for r in rules):
        raise ArityMismatch("axioms are s1:s2 and rules are s1,s2,s3")
    return PTSSpec(sorts, axioms, rules)


def rename_consts(t: Term, mapping: dict[str, str]) -> Term:
    match t:
        case Const(c):
            return Const(mapping.get(c, c))
        case App(f, a):
            return App(rename_consts(f, mapping), rename_consts(a, mapping))
        case Prod(x, a, b):
            return Prod(x, rename_consts(a, mapping), rename_consts(b, mapping))
        case Abs(x, a, b):
            return Abs(x, rename_consts(a, mapping), rename_consts(b, mapping))
    return t


def _canonical_rule(rule: RewriteRule, mapping: dict[str, str]) -> tuple[Term, Term]:
    # pattern variables renamed v0, v1, ... in order of first occurrence in the lhs
    order: list[str] = []

    def collect(t):
        match t:
            case Var(x) if x not in order:
                order.append(x)
            case App(f, a):
                collect(f)
                collect(a)

    collect(rule.lhs)
    sigma = {x: Var(f"v{i}") for i, x in enumerate(order)}
    return (
        subst_many(rename_consts(rule.lhs, mapping), sigma),
        subst_many(rename_consts(rule.rhs, mapping), sigma),
    )


def pts_signature_isomorphic(a: Theory, b: Theory, renaming: dict[str, str]) -> bool:
    """Do declarations, rules and clusters of ``a`` match those of ``b`` under ``renaming``?"""
    if len(set(renaming.values())) != len(renaming):
        return False
    full = {d.name: renaming.get(d.name, d.name) for d in a.signature}
    if len(set(full.values())) != len(full):
        return False
    if len(a.signature) != len(b.signature) or len(a.rules) != len(b.rules):
        return False
    for d in a.signature:
        target = full[d.name]
        if target not in b.signature:
            return False
        if rename_consts(d.type, full) != b.signature.type_of(target):
            return False
    ra = [_canonical_rule(r, full) for r in a.rules]
    rb = [_canonical_rule(r, {}) for r in b.rules]
    if not _same_multiset(ra, rb):
        return False
    if a.clusters and b.clusters:
        ca = {frozenset(full[d.name] for d in c.declarations): c for c in a.clusters}
        cb = {frozenset(d.name for d in c.declarations): c for c in b.clusters}
        if set(ca) != set(cb):
            return False
        for key, c in ca.items():
            x = [_canonical_rule(r, full) for r in c.rules]
            y = [_canonical_rule(r, {}) for r in cb[key].rules]
            if not _same_multiset(x, y):
                return False
    return True


def _same_multiset(xs: list, ys: list) -> bool:
    # terms hash without binder names, so a Counter compares up to alpha
    return Counter(xs) == Counter(ys)
