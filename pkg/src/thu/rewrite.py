"""beta + rule reduction, normalization, conversion and the orthogonality check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import FuelExhausted, UnsupportedPattern
from .signature import RewriteRule, Theory, validate_rule
from .term import (
    Abs,
    App,
    Const,
    Prod,
    Term,
    Var,
    app,
    has_binder,
    instantiate,
    replace_at,
    spine,
    subst_many,
    subterms,
)

DEFAULT_FUEL = 100_000
BETA = "beta"

_CACHE_LIMIT = 200_000


class RuleSet:
    """Rules indexed by head constant, plus a normal-form cache."""

    def __init__(self, rules: Iterable[RewriteRule]):
        self.rules = tuple(rules)
        self.index: dict[str, list[RewriteRule]] = {}
        for r in self.rules:
            if has_binder(r.lhs):
                raise UnsupportedPattern(f"rule {r.name}: binder inside left-hand side")
            self.index.setdefault(r.head, []).append(r)
        self._nf: dict[Term, Term] = {}

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


Rules = Union[RuleSet, Theory, Iterable[RewriteRule]]


def as_ruleset(rules: Rules) -> RuleSet:
    if isinstance(rules, RuleSet):
        return rules
    if isinstance(rules, Theory):
        return rules.ruleset
    return RuleSet(rules)


# --------------------------------------------------------------------------
# syntactic matching


def match(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """First-order syntactic matching of a rule left-hand side."""
    if has_binder(pattern):
        raise UnsupportedPattern("binder inside pattern")
    sigma: dict[str, Term] = {}
    return sigma if _match(pattern, subject, sigma) else None


def _match(p: Term, s: Term, sigma: dict[str, Term]) -> bool:
    match p:
        case Var(x):
            if x in sigma:
                return sigma[x] == s
            sigma[x] = s
            return True
        case Const():
            return p == s
        case App(pf, pa):
            return isinstance(s, App) and _match(pf, s.fun, sigma) and _match(pa, s.arg, sigma)
    return p == s


def _root_redex(rs: RuleSet, t: Term) -> tuple[Term, str] | None:
    if isinstance(t, App) and isinstance(t.fun, Abs):
        return instantiate(t.fun.body, t.arg), BETA
    head, _ = spine(t)
    if isinstance(head, Const):
        for rule in rs.index.get(head.name, ()):
            sigma: dict[str, Term] = {}
            if _match(rule.lhs, t, sigma):
                return subst_many(rule.rhs, sigma), rule.name
    return None


def _positions_innermost(t: Term, pos=()):
    # right-to-left post-order: children before parents, arguments before functions
    match t:
        case App(f, a):
            yield from _positions_innermost(a, pos + (1,))
            yield from _positions_innermost(f, pos + (0,))
        case Prod(_, a, b) | Abs(_, a, b):
            yield from _positions_innermost(b, pos + (1,))
            yield from _positions_innermost(a, pos + (0,))
    yield pos, t


def step(rules: Rules, t: Term, strategy: str = "outermost") -> tuple[Term, str] | None:
    """Contract one redex: leftmost-outermost by default, or rightmost-innermost."""
    rs = as_ruleset(rules)
    if strategy == "outermost":
        walk = subterms(t)
    elif strategy == "innermost":
        walk = _positions_innermost(t)
    else:
        raise ValueError(strategy)
    for pos, sub in walk:
        hit = _root_redex(rs, sub)
        if hit is not None:
            return replace_at(t, pos, hit[0]), hit[1]
    return None


def reduce_with(rules: Rules, t: Term, strategy: str, fuel: int = DEFAULT_FUEL) -> Term:
    """Iterate :func:`step` with the given strategy until normal."""
    rs = as_ruleset(rules)
    for _ in range(fuel):
        nxt = step(rs, t, strategy)
        if nxt is None:
            return t
        t = nxt[0]
    raise FuelExhausted(f"no normal form within {fuel} steps")


# --------------------------------------------------------------------------
# normalization


class Normalizer:
    """Normal-order evaluation with a step budget shared by all calls."""

    def __init__(self, rules: Rules, fuel: int = DEFAULT_FUEL):
        if fuel <= 0:
            raise ValueError("fuel must be positive")
        self.rs = as_ruleset(rules)
        self.fuel = fuel

    def _tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted("step budget exhausted; the term may have no normal form")

    def whnf(self, t: Term) -> Term:
        index = self.rs.index
        while True:
            head, args = spine(t)
            if isinstance(head, Abs) and args:
                self._tick()
                t = app(instantiate(head.body, args[0]), *args[1:])
                continue
            if isinstance(head, Const) and head.name in index:
                for rule in index[head.name]:
                    _, pargs = spine(rule.lhs)
                    n = len(pargs)
                    if len(args) < n:
                        continue
                    sigma: dict[str, Term] = {}
                    if all(self._lazy_match(p, s, sigma) for p, s in zip(pargs, args)):
                        self._tick()
                        t = app(subst_many(rule.rhs, sigma), *args[n:])
                        break
                else:
                    return t
                continue
            return t

    def _lazy_match(self, p: Term, s: Term, sigma: dict[str, Term]) -> bool:
        if isinstance(p, Var):
            if p.name in sigma:
                return self.nf(sigma[p.name]) == self.nf(s)
            sigma[p.name] = s
            return True
        phead, pargs = spine(p)
        shead, sargs = spine(self.whnf(s))
        if shead != phead or len(sargs) != len(pargs):
            return False
        return all(self._lazy_match(pa, sa, sigma) for pa, sa in zip(pargs, sargs))

    def nf(self, t: Term) -> Term:
        cache = self.rs._nf
        hit = cache.get(t)
        if hit is not None:
            return hit
        w = self.whnf(t)
        match w:
            case Prod(x, a, b):
                r = Prod(x, self.nf(a), self.nf(b))
            case Abs(x, a, b):
                r = Abs(x, self.nf(a), self.nf(b))
            case App():
                head, args = spine(w)
                r = app(self.nf(head), *(self.nf(a) for a in args))
                if r != w:
                    again = self.whnf(r)
                    if again != r:
                        r = self.nf(again)
            case _:
                r = w
        if len(cache) > _CACHE_LIMIT:
            cache.clear()
        cache[t] = r
        return r

    def convertible(self, t: Term, u: Term) -> bool:
        return t == u or self.nf(t) == self.nf(u)


def normalize(rules: Rules, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    return Normalizer(rules, fuel).nf(t)


def whnf(rules: Rules, t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    return Normalizer(rules, fuel).whnf(t)


def convertible(rules: Rules, t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> bool:
    return Normalizer(rules, fuel).convertible(t, u)


# --------------------------------------------------------------------------
# orthogonality


def _occurs(x: str, t: Term, sub: dict[str, Term]) -> bool:
    t = _walk(t, sub)
    match t:
        case Var(y):
            return x == y
        case App(f, a):
            return _occurs(x, f, sub) or _occurs(x, a, sub)
    return False


def _walk(t: Term, sub: dict[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in sub:
        t = sub[t.name]
    return t


def unify(s: Term, t: Term) -> dict[str, Term] | None:
    """Syntactic first-order unification of binder-free terms."""
    sub: dict[str, Term] = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, sub), _walk(b, sub)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, sub):
                return None
            sub[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a, sub):
                return None
            sub[b.name] = a
        elif isinstance(a, App) and isinstance(b, App):
            stack.append((a.fun, b.fun))
            stack.append((a.arg, b.arg))
        else:
            return None
    return {x: _resolve(v, sub) for x, v in sub.items()}


def _resolve(t: Term, sub: dict[str, Term]) -> Term:
    t = _walk(t, sub)
    if isinstance(t, App):
        return App(_resolve(t.fun, sub), _resolve(t.arg, sub))
    return t


def _rename(t: Term, suffix: str) -> Term:
    match t:
        case Var(x):
            return Var(x + suffix)
        case App(f, a):
            return App(_rename(f, suffix), _rename(a, suffix))
    return t


def _var_occurrences(t: Term) -> list[str]:
    match t:
        case Var(x):
            return [x]
        case App(f, a):
            return _var_occurrences(f) + _var_occurrences(a)
    return []


@dataclass(frozen=True)
class Overlap:
    outer: str
    inner: str
    position: tuple[int, ...]
    unifier: dict[str, Term] = field(hash=False, compare=False)

    def __str__(self):
        from .syntax import format_term

        mgu = ", ".join(f"{x} := {format_term(v)}" for x, v in sorted(self.unifier.items()))
        pos = ".".join(map(str, self.position)) or "root"
        return f"{self.inner} overlaps {self.outer} at {pos} [{mgu}]"


@dataclass
class OrthogonalityReport:
    left_linear: dict[str, bool]
    overlaps: list[Overlap]
    # every lhs is a binder-free constant-headed term, so no lhs contains or is a beta-redex
    beta_overlap_free: bool = True

    @property
    def verdict(self) -> bool:
        return all(self.left_linear.values()) and not self.overlaps and self.beta_overlap_free

    def to_text(self) -> str:
        n = len(self.left_linear)
        lines = [
            f"rules: {n}",
            f"left-linear: {sum(self.left_linear.values())}/{n}",
            f"overlaps: {len(self.overlaps)}",
        ]
        lines += [f"  non-left-linear: {r}" for r, ok in self.left_linear.items() if not ok]
        lines += [f"  {o}" for o in self.overlaps]
        lines.append(f"beta overlaps: {'none' if self.beta_overlap_free else 'possible'}")
        lines.append(f"verdict: {'orthogonal' if self.verdict else 'NOT orthogonal'}")
        return "\n".join(lines)


def check_orthogonality(rules: Rules) -> OrthogonalityReport:
    rules = list(as_ruleset(rules).rules)
    for r in rules:
        validate_rule(r)
    left_linear = {}
    for r in rules:
        occ = _var_occurrences(r.lhs)
        left_linear[r.name] = len(occ) == len(set(occ))
    overlaps = []
    for r1 in rules:
        for r2 in rules:
            inner = _rename(r2.lhs, "#2")
            for pos, sub in subterms(r1.lhs):
                if isinstance(sub, Var):
                    continue
                if not pos and r1 is r2:
                    continue
                mgu = unify(sub, inner)
                if mgu is not None:
                    overlaps.append(Overlap(r1.name, r2.name, pos, mgu))
    beta_free = all(isinstance(spine(r.lhs)[0], Const) and not has_binder(r.lhs) for r in rules)
    return OrthogonalityReport(left_linear, overlaps, beta_free)
