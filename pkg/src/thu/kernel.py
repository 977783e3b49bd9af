"""Syntax-directed type inference and checking modulo beta + rewriting."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DaggerInUserTerm,
    DomainMismatch,
    IllFormedContext,
    IllFormedDomain,
    KernelError,
    MissingAnnotation,
    NotAFunction,
    NotASort,
    TypeMismatch,
    UnknownVariable,
    UntypableSort,
)
from .rewrite import DEFAULT_FUEL, Normalizer
from .signature import Context, RewriteRule, Theory, append_declaration
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
    const_of,
    free_vars,
    fresh_name,
    instantiate,
    pi,
    subst_many,
)


@dataclass(frozen=True)
class Judgement:
    context: Context
    subject: Term
    type: Term


class Checker:
    """One typing session: a theory, and a fuel budget shared by every conversion."""

    def __init__(self, theory: Theory, fuel: int = DEFAULT_FUEL):
        self.theory = theory
        self.sig = theory.signature
        self.norm = Normalizer(theory, fuel)

    def whnf(self, t: Term) -> Term:
        return self.norm.whnf(t)

    def conv(self, t: Term, u: Term) -> bool:
        return self.norm.convertible(t, u)

    def well_formed(self, ctx: Context) -> None:
        seen = Context()
        for i, (x, ty) in enumerate(ctx.entries):
            try:
                s = self.whnf(self.infer(seen, ty))
                if not isinstance(s, Sort):
                    raise NotASort(f"type of {x} has type {_show(s)}, not a sort")
            except KernelError as e:
                raise IllFormedContext(i, e) from e
            seen = seen.extend(x, ty)

    def infer(self, ctx: Context, t: Term) -> Term:
        match t:
            case Sort("TYPE"):
                return KIND
            case Sort(_):
                raise UntypableSort("KIND has no type")
            case Const(c):
                return self.sig.type_of(c)
            case Var(x):
                ty = ctx.lookup(x)
                if ty is None:
                    raise UnknownVariable(x)
                return ty
            case BVar(i):
                raise UnknownVariable(f"loose bound index {i}")
            case Prod(x, a, b):
                self._domain(ctx, a)
                y = fresh_name(x, ctx.names)
                s = self.whnf(self.infer(ctx.extend(y, a), instantiate(b, Var(y))))
                if not isinstance(s, Sort):
                    raise NotASort(f"codomain has type {_show(s)}, not a sort")
                return s
            case Abs(x, a, b):
                self._domain(ctx, a)
                y = fresh_name(x, ctx.names)
                body_ty = self.infer(ctx.extend(y, a), instantiate(b, Var(y)))
                if body_ty == KIND:
                    raise UntypableSort("abstraction over a kind-level body")
                return pi(y, a, body_ty)
            case App(f, a):
                fty = self.whnf(self.infer(ctx, f))
                if not isinstance(fty, Prod):
                    raise NotAFunction(f"{_show(f)} has type {_show(fty)}")
                aty = self.infer(ctx, a)
                if not self.conv(aty, fty.domain):
                    raise DomainMismatch(
                        f"argument {_show(a)} has type {_show(aty)}, expected {_show(fty.domain)}"
                    )
                return instantiate(fty.body, a)
        raise TypeError(f"not a term: {t!r}")

    def _domain(self, ctx: Context, a: Term) -> None:
        s = self.whnf(self.infer(ctx, a))
        if s != TYPE:
            raise IllFormedDomain(f"domain {_show(a)} has type {_show(s)}, expected TYPE")

    def check(self, ctx: Context, t: Term, expected: Term) -> Judgement:
        inferred = self.infer(ctx, t)
        if expected != KIND:
            s = self.whnf(self.infer(ctx, expected))
            if not isinstance(s, Sort):
                raise NotASort(f"expected type {_show(expected)} has type {_show(s)}")
        if not self.conv(inferred, expected):
            raise TypeMismatch(f"{_show(t)} has type {_show(inferred)}, expected {_show(expected)}")
        return Judgement(ctx, t, expected)


def _show(t: Term) -> str:
    from .syntax import format_term

    return format_term(t)


def well_formed_ctx(theory: Theory, ctx: Context, fuel: int = DEFAULT_FUEL) -> None:
    Checker(theory, fuel).well_formed(ctx)


def infer(theory: Theory, ctx: Context, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    k = Checker(theory, fuel)
    k.well_formed(ctx)
    return k.infer(ctx, t)


def check(theory: Theory, ctx: Context, t: Term, expected: Term, fuel: int = DEFAULT_FUEL) -> Judgement:
    k = Checker(theory, fuel)
    k.well_formed(ctx)
    return k.check(ctx, t, expected)


def lint_user_term(theory: Theory, t: Term) -> None:
    """Reject hand-written terms that mention conversion-only constants."""
    daggers = {d.name for d in theory.signature if d.dagger}
    bad = const_of(t) & daggers
    if bad:
        raise DaggerInUserTerm(f"{sorted(bad)} may only appear in reducts, not in written terms")


def declare(theory: Theory, name: str, type: Term, dagger: bool = False, fuel: int = DEFAULT_FUEL) -> Theory:
    """Type-checked declaration: the type must itself have sort TYPE or KIND."""
    append_declaration(theory.signature, name, type, dagger)  # structural errors first
    s = Checker(theory, fuel).whnf(infer(theory, Context(), type, fuel))
    if not isinstance(s, Sort):
        raise NotASort(f"type of {name} has type {_show(s)}, not a sort")
    return theory.with_declaration(name, type, dagger)


# --------------------------------------------------------------------------
# type preservation of rewrite rules


@dataclass
class PreservationReport:
    rule: str
    lhs_type: Term | None
    rhs_type: Term | None
    used_equations: list[tuple[Term, Term]] = field(default_factory=list)
    verdict: bool = False
    reason: str = ""

    def to_text(self) -> str:
        if self.verdict:
            eqs = ""
            if self.used_equations:
                eqs = " using " + ", ".join(f"{_show(a)} = {_show(b)}" for a, b in self.used_equations)
            return f"{self.rule}: preserved, both sides : {_show(self.lhs_type)}{eqs}"
        return f"{self.rule}: NOT preserved ({self.reason})"


def check_rule_preservation(theory: Theory, rule: RewriteRule, fuel: int = DEFAULT_FUEL) -> PreservationReport:
    annotated = [x for x, _ in rule.meta_ctx]
    missing = free_vars(rule.lhs) - set(annotated)
    if missing:
        raise MissingAnnotation(f"rule {rule.name}: no type given for {sorted(missing)}")

    # equations are oriented variable := term and applied as a substitution
    sigma: dict[str, Term] = {}
    for a, b in rule.lhs_equations:
        match a, b:
            case Var(x), _:
                sigma[x] = b
            case _, Var(x):
                sigma[x] = a
            case _:
                raise MissingAnnotation(f"rule {rule.name}: equation without a variable side")
    for x in list(sigma):
        sigma[x] = subst_many(sigma[x], sigma)

    ctx = Context(tuple((x, subst_many(ty, sigma)) for x, ty in rule.meta_ctx if x not in sigma))
    lhs = subst_many(rule.lhs, sigma)
    rhs = subst_many(rule.rhs, sigma)
    report = PreservationReport(rule.name, None, None, list(rule.lhs_equations))
    k = Checker(theory, fuel)
    try:
        k.well_formed(ctx)
        report.lhs_type = k.infer(ctx, lhs)
        report.rhs_type = k.infer(ctx, rhs)
    except KernelError as e:
        report.reason = f"{e.code}: {e}"
        return report
    report.verdict = k.conv(report.lhs_type, report.rhs_type)
    if not report.verdict:
        report.reason = f"left side : {_show(report.lhs_type)}, right side : {_show(report.rhs_type)}"
    return report
