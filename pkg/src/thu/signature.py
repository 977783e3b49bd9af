"""Signatures, contexts, rewrite rules and axiom clusters.

Everything here is immutable.  Structural invariants (closedness, dependency
order, head-constant left-hand sides) are enforced on construction; typing is
the kernel's job.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import (
    BadLhsShape,
    DuplicateConstant,
    EscapedVariable,
    OpenType,
    OutsideSignature,
    UnknownConstant,
    UnsupportedPattern,
)
from .term import Const, Term, const_of, free_vars, has_binder, spine


@dataclass(frozen=True)
class Declaration:
    name: str
    type: Term
    dagger: bool = False


@dataclass(frozen=True)
class Signature:
    declarations: tuple[Declaration, ...] = ()

    @cached_property
    def _index(self) -> dict[str, Declaration]:
        return {d.name: d for d in self.declarations}

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._index)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.declarations)

    def __iter__(self):
        return iter(self.declarations)

    def lookup(self, name: str) -> Declaration:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownConstant(name) from None

    def type_of(self, name: str) -> Term:
        return self.lookup(name).type

    def restrict(self, names: Iterable[str]) -> Signature:
        keep = set(names)
        return Signature(tuple(d for d in self.declarations if d.name in keep))


def append_declaration(sig: Signature, name: str, type: Term, dagger: bool = False) -> Signature:
    if name in sig:
        raise DuplicateConstant(name)
    if fv := free_vars(type):
        raise OpenType(f"type of {name} has free variables {sorted(fv)}")
    missing = const_of(type) - sig.names
    if missing:
        raise UnknownConstant(f"type of {name} uses undeclared {sorted(missing)}")
    return Signature(sig.declarations + (Declaration(name, type, dagger),))


def in_lambda_sigma(t: Term, sig: Signature) -> bool:
    return const_of(t) <= sig.names


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Term
    rhs: Term
    # typing annotations for the rule's variables, used by the preservation check
    meta_ctx: tuple[tuple[str, Term], ...] = ()
    # equations (variable, term) needed to make the lhs typable
    lhs_equations: tuple[tuple[Term, Term], ...] = ()
    dagger: bool = False

    @property
    def head(self) -> str:
        head, _ = spine(self.lhs)
        assert isinstance(head, Const)
        return head.name

    @property
    def arity(self) -> int:
        return len(spine(self.lhs)[1])

    def constants(self) -> frozenset[str]:
        return const_of(self.lhs) | const_of(self.rhs)

    def __str__(self):
        from .syntax import format_rule

        return format_rule(self)


def validate_rule(rule: RewriteRule) -> None:
    """Structural checks that do not need a signature."""
    head, _ = spine(rule.lhs)
    if not isinstance(head, Const):
        raise BadLhsShape(f"rule {rule.name}: left-hand side must be headed by a constant")
    if has_binder(rule.lhs):
        raise UnsupportedPattern(f"rule {rule.name}: binders are not allowed in left-hand sides")
    escaped = free_vars(rule.rhs) - free_vars(rule.lhs)
    if escaped:
        raise EscapedVariable(f"rule {rule.name}: {sorted(escaped)} not bound by the left-hand side")
    if rule.meta_ctx:
        names = [x for x, _ in rule.meta_ctx]
        if len(set(names)) != len(names):
            raise BadLhsShape(f"rule {rule.name}: duplicate annotation")


@dataclass(frozen=True)
class Context:
    entries: tuple[tuple[str, Term], ...] = ()

    @cached_property
    def _index(self) -> dict[str, Term]:
        return dict(self.entries)

    def __post_init__(self):
        names = [x for x, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"context declares a variable twice: {names}")

    def extend(self, name: str, type: Term) -> Context:
        return Context(self.entries + ((name, type),))

    def lookup(self, name: str) -> Term | None:
        return self._index.get(name)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._index)

    def constants(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for _, ty in self.entries:
            out |= const_of(ty)
        return out

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class AxiomCluster:
    name: str
    declarations: tuple[Declaration, ...]
    rules: tuple[RewriteRule, ...] = ()
    glyph: str = ""

    def __post_init__(self):
        if not self.declarations:
            raise ValueError(f"cluster {self.name} has no declaration")


@dataclass(frozen=True)
class Theory:
    signature: Signature = field(default_factory=Signature)
    rules: tuple[RewriteRule, ...] = ()
    clusters: tuple[AxiomCluster, ...] = ()
    name: str = ""

    @cached_property
    def ruleset(self):
        from .rewrite import RuleSet

        return RuleSet(self.rules)

    def rule(self, name: str) -> RewriteRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def rule_names(self) -> frozenset[str]:
        return frozenset(r.name for r in self.rules)

    def cluster(self, name: str) -> AxiomCluster:
        for c in self.clusters:
            if c.name == name:
                return c
        raise KeyError(name)

    def with_declaration(self, name: str, type: Term, dagger: bool = False) -> Theory:
        return Theory(append_declaration(self.signature, name, type, dagger), self.rules, self.clusters, self.name)


def add_rule(theory: Theory, rule: RewriteRule) -> Theory:
    validate_rule(rule)
    outside = rule.constants() - theory.signature.names
    if outside:
        raise OutsideSignature(f"rule {rule.name} mentions undeclared {sorted(outside)}")
    if rule.name in theory.rule_names:
        raise DuplicateConstant(f"rule name {rule.name}")
    return Theory(theory.signature, theory.rules + (rule,), theory.clusters, theory.name)


def theory_from_clusters(clusters: Iterable[AxiomCluster], name: str = "") -> Theory:
    """Build a theory whose declarations come first (in order), then all rules."""
    clusters = tuple(clusters)
    sig = Signature()
    for c in clusters:
        for d in c.declarations:
            sig = append_declaration(sig, d.name, d.type, d.dagger)
    th = Theory(sig, (), clusters, name)
    for c in clusters:
        for r in c.rules:
            th = add_rule(th, r)
    return th
