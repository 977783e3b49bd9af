"""Fragment closure, fragment checking, re-checking in a fragment, classification."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import CATALOG, induced_theory, theory_u
from .errors import KernelError, OutsideFragment, ReCheckFailed, UnknownConstant
from .kernel import Checker
from .rewrite import DEFAULT_FUEL, Normalizer
from .signature import Context, Signature, Theory, append_declaration
from .term import Term, const_of


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


@dataclass
class FragmentReport:
    seed: frozenset[str]
    closure_constants: frozenset[str]
    closure_rules: frozenset[str]
    iterations: int
    catalog_matches: list[str] = field(default_factory=list)
    # constants outside U (user declarations), classified modulo
    context_extensions: frozenset[str] = frozenset()
    uses_dagger: bool = False
    exact_entry: str | None = None
    recheck: str | None = None

    @property
    def smallest(self) -> str | None:
        return self.catalog_matches[0] if self.catalog_matches else None

    def to_record(self) -> dict:
        return {
            "seed": sorted(self.seed),
            "constants": sorted(self.closure_constants),
            "rules": sorted(self.closure_rules),
            "iterations": self.iterations,
            "matches": list(self.catalog_matches),
            "extensions": sorted(self.context_extensions),
            "dagger": self.uses_dagger,
            "exact": self.exact_entry,
            "recheck": self.recheck,
        }

    def to_text(self) -> str:
        lines = [
            f"constants ({len(self.closure_constants)}): {' '.join(sorted(self.closure_constants)) or '-'}",
            f"rules ({len(self.closure_rules)}): {' '.join(sorted(self.closure_rules)) or '-'}",
            f"iterations: {self.iterations}",
        ]
        if self.context_extensions:
            lines.append(f"context extensions: {' '.join(sorted(self.context_extensions))}")
        if self.uses_dagger:
            lines.append("uses the conversion-only extension (pairD)")
        if self.catalog_matches:
            kind = "" if self.exact_entry == self.smallest else " (closure is an anonymous fragment)"
            lines.append(f"smallest sub-theory: {self.smallest}{kind}")
            lines.append(f"all matches: {' '.join(self.catalog_matches)}")
        if self.recheck is not None:
            lines.append(f"re-check: {self.recheck}")
        return "\n".join(lines)


def fragment_closure(theory: Theory, seed, catalog=None) -> FragmentReport:
    """Least fragment of ``theory`` whose signature contains ``seed``."""
    sig = theory.signature
    seed = frozenset(seed)
    unknown = seed - sig.names
    if unknown:
        raise UnknownConstant(f"seed constants not in the theory: {sorted(unknown)}")
    consts = set(seed)
    rules: set[str] = set()
    iterations = 0
    while True:
        iterations += 1
        before = len(consts)
        for c in list(consts):
            consts |= const_of(sig.type_of(c))
        for r in theory.rules:
            if r.name not in rules and const_of(r.lhs) <= consts:
                rules.add(r.name)
                consts |= const_of(r.rhs)
        if len(consts) == before:
            break
    closure = frozenset(consts)
    u_names = theory_u().signature.names
    in_u = closure & u_names
    entries = [e for e in (catalog or CATALOG) if in_u <= e.constants]
    entries.sort(key=lambda e: (len(e.constants), e.name))
    exact = next((e.name for e in entries if e.constants == in_u), None)
    daggers = {d.name for d in sig if d.dagger}
    return FragmentReport(
        seed,
        closure,
        frozenset(rules),
        iterations,
        [e.name for e in entries],
        closure - u_names,
        bool(closure & daggers),
        exact,
    )


def is_fragment(theory0: Theory, theory1: Theory) -> tuple[bool, list[Violation]]:
    sig0, sig1 = theory0.signature, theory1.signature
    names1 = sig1.names
    out = []
    for d in sig1:
        if d.name not in sig0:
            out.append(Violation("NotInSignature", d.name))
        elif sig0.type_of(d.name) != d.type:
            out.append(Violation("TypeDiffers", d.name))
        missing = const_of(d.type) - names1
        if missing:
            out.append(Violation("TypeNotClosed", f"type of {d.name} uses {sorted(missing)}"))
    rules0 = {r.name: r for r in theory0.rules}
    names_r1 = set()
    for r in theory1.rules:
        names_r1.add(r.name)
        r0 = rules0.get(r.name)
        if r0 is None or (r0.lhs, r0.rhs) != (r.lhs, r.rhs):
            out.append(Violation("RuleNotInTheory", r.name))
        outside = r.constants() - names1
        if outside:
            out.append(Violation("RuleOutsideSignature", f"{r.name} uses {sorted(outside)}"))
    for r in theory0.rules:
        if const_of(r.lhs) <= names1:
            if r.name not in names_r1:
                out.append(Violation("MissingRule", f"left-hand side of {r.name} fits but the rule is absent"))
            missing = const_of(r.rhs) - names1
            if missing:
                out.append(Violation("RhsOutsideSignature", f"right-hand side of {r.name} needs {sorted(missing)}"))
    # dedupe, keep order
    out = list(dict.fromkeys(out))
    return not out, out


@dataclass(frozen=True)
class RecheckResult:
    type: Term  # D': normal form of the original type, inside the fragment
    inferred: Term  # type inferred by the fragment's kernel
    corollary: bool  # the original type itself was re-checked


def recheck_in_fragment(
    theory0: Theory, fragment: Theory, ctx: Context, t: Term, A: Term, fuel: int = DEFAULT_FUEL
) -> RecheckResult:
    names1 = fragment.signature.names
    outside = (const_of(t) | ctx.constants()) - names1
    if outside:
        raise OutsideFragment(f"{sorted(outside)} not in {fragment.name or 'the fragment'}")
    k1 = Checker(fragment, fuel)
    try:
        k1.well_formed(ctx)
        inferred = k1.infer(ctx, t)
    except KernelError as e:
        raise ReCheckFailed(f"fragment kernel rejects the term: {e.code}: {e}") from e
    d = Normalizer(theory0, fuel).nf(A)
    if not const_of(d) <= names1:
        raise ReCheckFailed(f"normal form of the type leaves the fragment: {sorted(const_of(d) - names1)}")
    if not k1.conv(inferred, d):
        raise ReCheckFailed("inferred type is not convertible to the normal form of the original type")
    corollary = const_of(A) <= names1
    if corollary:
        try:
            k1.check(ctx, t, A)
        except KernelError as e:
            raise ReCheckFailed(f"original type rejected in the fragment: {e.code}: {e}") from e
    return RecheckResult(d, inferred, corollary)


def extend_fragment(theory0: Theory, base: Theory, extra) -> Theory:
    """``base`` plus the declarations and rules of ``theory0`` named in ``extra`` (user additions)."""
    extra = set(extra)
    sig = Signature(base.signature.declarations)
    for d in theory0.signature:
        if d.name in extra and d.name not in sig:
            sig = append_declaration(sig, d.name, d.type, d.dagger)
    rules = base.rules + tuple(r for r in theory0.rules if r.name in extra and r not in base.rules)
    return Theory(sig, rules, base.clusters, base.name)


def classify(
    theory0: Theory, ctx: Context, t: Term, A: Term, catalog=None, fuel: int = DEFAULT_FUEL
) -> FragmentReport:
    seed = const_of(t) | const_of(A) | ctx.constants()
    report = fragment_closure(theory0, seed, catalog)
    if report.smallest is None:
        report.recheck = "no catalog entry contains the closure"
        return report
    entry = next(e for e in (catalog or CATALOG) if e.name == report.smallest)
    base = induced_theory(entry.clusters, entry.name)
    user_rules = {r.name for r in theory0.rules} - {r.name for r in theory_u().rules}
    frag = extend_fragment(theory0, base, report.context_extensions | (report.closure_rules & user_rules))
    try:
        res = recheck_in_fragment(theory0, frag, ctx, t, A, fuel)
        report.recheck = f"ok in {entry.name}" + ("" if res.corollary else " (up to reduction of the type)")
    except KernelError as e:
        report.recheck = f"{e.code}: {e}"
    return report
