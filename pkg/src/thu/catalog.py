"""The theory U as data, and the named sub-theories built from its clusters."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import KernelError, UnknownSubTheory
from .signature import AxiomCluster, Declaration, Theory, theory_from_clusters
from .syntax import RuleDecl, SymbolDecl, format_rule, format_term, parse

# One block per cluster, in declaration order.  Header: "// cluster NAME GLYPH".
U_SOURCE = r"""
// cluster I I
symbol I : TYPE;

// cluster Set Set
symbol Set : TYPE;

// cluster El El
symbol El : Set -> TYPE;

// cluster iota ι
symbol iota : Set;
rule iota-red El iota --> I;

// cluster Prop Prop
symbol Prop : TYPE;

// cluster Prf Prf
symbol Prf : Prop -> TYPE;

// cluster imp ⇒
symbol imp : Prop -> Prop -> Prop;
rule imp-red Prf (imp x y) --> Prf x -> Prf y with x : Prop, y : Prop;

// cluster all ∀
symbol all : !x:Set. (El x -> Prop) -> Prop;
rule all-red Prf (all x p) --> !z:El x. Prf (p z) with x : Set, p : El x -> Prop;

// cluster top ⊤
symbol top : Prop;
rule top-red Prf top --> !z:Prop. Prf z -> Prf z;

// cluster bot ⊥
symbol bot : Prop;
rule bot-red Prf bot --> !z:Prop. Prf z;

// cluster neg ¬
symbol neg : Prop -> Prop;
rule neg-red Prf (neg x) --> Prf x -> (!z:Prop. Prf z) with x : Prop;

// cluster and ∧
symbol and : Prop -> Prop -> Prop;
rule and-red Prf (and x y) --> !z:Prop. (Prf x -> Prf y -> Prf z) -> Prf z with x : Prop, y : Prop;

// cluster or ∨
symbol or : Prop -> Prop -> Prop;
rule or-red Prf (or x y) --> !z:Prop. (Prf x -> Prf z) -> (Prf y -> Prf z) -> Prf z with x : Prop, y : Prop;

// cluster ex ∃
symbol ex : !a:Set. (El a -> Prop) -> Prop;
rule ex-red Prf (ex a p) --> !z:Prop. (!x:El a. Prf (p x) -> Prf z) -> Prf z with a : Set, p : El a -> Prop;

// cluster Prfc Prf_c
symbol Prfc : Prop -> TYPE;
rule Prfc-red Prfc --> \x:Prop. Prf (neg (neg x));

// cluster impc ⇒_c
symbol impc : Prop -> Prop -> Prop;
rule impc-red impc --> \x:Prop. \y:Prop. imp (neg (neg x)) (neg (neg y));

// cluster andc ∧_c
symbol andc : Prop -> Prop -> Prop;
rule andc-red andc --> \x:Prop. \y:Prop. and (neg (neg x)) (neg (neg y));

// cluster orc ∨_c
symbol orc : Prop -> Prop -> Prop;
rule orc-red orc --> \x:Prop. \y:Prop. or (neg (neg x)) (neg (neg y));

// cluster allc ∀_c
symbol allc : !a:Set. (El a -> Prop) -> Prop;
rule allc-red allc --> \a:Set. \p:El a -> Prop. all a (\x:El a. neg (neg (p x)));

// cluster exc ∃_c
symbol exc : !a:Set. (El a -> Prop) -> Prop;
rule exc-red exc --> \a:Set. \p:El a -> Prop. ex a (\x:El a. neg (neg (p x)));

// cluster o o
symbol o : Set;
rule o-red El o --> Prop;

// cluster arr ↝
symbol arr : Set -> Set -> Set;
rule arr-red El (arr x y) --> El x -> El y with x : Set, y : Set;

// cluster arrd ↝_d
symbol arrd : !x:Set. (El x -> Set) -> Set;
rule arrd-red El (arrd x y) --> !z:El x. El (y z) with x : Set, y : El x -> Set;

// cluster impd ⇒_d
symbol impd : !x:Prop. (Prf x -> Prop) -> Prop;
rule impd-red Prf (impd x y) --> !z:Prf x. Prf (y z) with x : Prop, y : Prf x -> Prop;

// cluster pi π
symbol pi : !x:Prop. (Prf x -> Set) -> Set;
rule pi-red El (pi x y) --> !z:Prf x. El (y z) with x : Prop, y : Prf x -> Set;

// cluster zero 0
symbol zero : I;

// cluster succ succ
symbol succ : I -> I;

// cluster pred pred
symbol pred : I -> I;
rule pred-red1 pred zero --> zero;
rule pred-red2 pred (succ x) --> x with x : I;

// cluster positive positive
symbol positive : I -> Prop;
rule positive-red1 positive zero --> bot;
rule positive-red2 positive (succ x) --> top with x : I;

// cluster psub psub
symbol psub : !t:Set. (El t -> Prop) -> Set;

// cluster pair pair
symbol pair : !t:Set. !p:El t -> Prop. !m:El t. Prf (p m) -> El (psub t p);

// cluster pairD pair†
dagger symbol pairD : !t:Set. !p:El t -> Prop. El t -> El (psub t p);
dagger rule pair-red pair t p m h --> pairD t p m with t : Set, p : El t -> Prop, m : El t, h : Prf (p m);

// cluster fst fst
symbol fst : !t:Set. !p:El t -> Prop. El (psub t p) -> El t;
rule fst-red fst t p (pairD t' p' m) --> m with t : Set, p : El t -> Prop, t' : Set, p' : El t' -> Prop, m : El t' where t' = t, p' = p;

// cluster snd snd
symbol snd : !t:Set. !p:El t -> Prop. !m:El (psub t p). Prf (p (fst t p m));

// cluster Set1 Set1
symbol Set1 : TYPE;

// cluster set1c set
symbol set1c : Set1;
rule set-red Ty set1c --> Set;

// cluster tarrd ⤳_d
symbol tarrd : !x:Set. (El x -> Set1) -> Set1;
rule tarrd-red Ty (tarrd x y) --> !z:El x. Ty (y z) with x : Set, y : El x -> Set1;

// cluster Ty Ty
symbol Ty : Set1 -> TYPE;

// cluster Scheme Scheme
symbol Scheme : TYPE;

// cluster Els Els
symbol Els : Scheme -> TYPE;

// cluster up ↑
symbol up : Set -> Scheme;
rule up-red Els (up x) --> El x with x : Set;

// cluster SchemeAll Ɐ
symbol SchemeAll : (Set -> Scheme) -> Scheme;
rule SchemeAll-red Els (SchemeAll p) --> !x:Set. Els (p x) with p : Set -> Scheme;

// cluster PropAll 𝒜
symbol PropAll : (Set -> Prop) -> Prop;
rule PropAll-red Prf (PropAll p) --> !x:Set. Prf (p x) with p : Set -> Prop;
"""

_HEADER = re.compile(r"^// cluster (\S+) (\S+)$", re.M)


@lru_cache(maxsize=1)
def _load_clusters() -> tuple[AxiomCluster, ...]:
    parts = _HEADER.split(U_SOURCE)
    out = []
    # split yields [prefix, name, glyph, body, name, glyph, body, ...]
    for name, glyph, body in zip(parts[1::3], parts[2::3], parts[3::3]):
        decls, rules = [], []
        for st in parse(body).statements:
            match st:
                case SymbolDecl(n, ty, dagger):
                    decls.append(Declaration(n, ty, dagger))
                case RuleDecl():
                    rules.append(st.to_rule())
                case _:
                    raise AssertionError(f"unexpected statement in cluster {name}")
        out.append(AxiomCluster(name, tuple(decls), tuple(rules), glyph))
    return tuple(out)


@lru_cache(maxsize=1)
def theory_u() -> Theory:
    th = theory_from_clusters(_load_clusters(), "theory-u")
    assert len(th.signature) == 43 and len(th.rules) == 31, "theory U is corrupt"
    return th


def cluster_histogram(theory: Theory) -> dict[int, int]:
    """Number of clusters by how many rules they carry."""
    hist: dict[int, int] = {}
    for c in theory.clusters:
        hist[len(c.rules)] = hist.get(len(c.rules), 0) + 1
    return dict(sorted(hist.items()))


# --------------------------------------------------------------------------
# named sub-theories

MPL = ("I", "Set", "El", "iota", "Prop", "Prf", "imp", "all")
CONSTRUCTIVE = ("top", "bot", "neg", "and", "or", "ex")
CLASSICAL = ("Prfc", "impc", "andc", "orc", "allc", "exc")
STT = ("o", "arr")
PSUB = ("psub", "pair", "pairD", "fst", "snd")
PRENEX = ("Scheme", "Els", "up", "SchemeAll", "PropAll")
COC = ("Prop", "Prf", "Set", "El", "o", "impd", "pi", "all", "arrd")


@dataclass(frozen=True)
class NamedSubTheory:
    name: str
    clusters: tuple[str, ...]
    citation: str
    # expected number of clusters, checked by verify_catalog
    size: int

    @property
    def constants(self) -> frozenset[str]:
        u = theory_u()
        return frozenset(d.name for c in self.clusters for d in u.cluster(c).declarations)


def _entry(name, clusters, citation, size=None):
    clusters = tuple(dict.fromkeys(clusters))
    return NamedSubTheory(name, clusters, citation, len(clusters) if size is None else size)


# coc-with-iota, minimal-subtheory and coc-prenex-polymorphism carry the I cluster:
# the iota rule rewrites to I, so without it they would not be fragments.
CATALOG: tuple[NamedSubTheory, ...] = (
    _entry("minimal-predicate-logic", MPL, "Minimal predicate logic", 8),
    _entry("constructive-predicate-logic", MPL + CONSTRUCTIVE, "Constructive predicate logic", 14),
    _entry("ecumenical-predicate-logic", MPL + CONSTRUCTIVE + CLASSICAL, "Ecumenical predicate logic", 20),
    _entry("minimal-stt", MPL + STT, "Minimal simple type theory", 10),
    _entry("constructive-stt", MPL + CONSTRUCTIVE + STT, "Constructive simple type theory", 16),
    _entry("ecumenical-stt", MPL + CONSTRUCTIVE + CLASSICAL + STT, "Ecumenical simple type theory", 22),
    _entry("stt-predicate-subtyping", MPL + STT + PSUB, "Simple type theory with predicate subtyping", 15),
    _entry("stt-prenex-polymorphism", MPL + STT + PRENEX, "Simple type theory with prenex polymorphism", 15),
    _entry(
        "stt-psub-prenex",
        MPL + STT + PSUB + PRENEX,
        "Simple type theory with predicate subtyping and prenex polymorphism",
        20,
    ),
    _entry("calculus-of-constructions", COC, "Calculus of constructions", 9),
    _entry("coc-with-iota", ("I",) + COC + ("iota",), "Calculus of constructions with a type of individuals", 11),
    _entry("minimal-subtheory", ("I",) + COC + ("iota", "imp", "arr"), "Minimal sub-theory", 13),
    _entry(
        "coc-object-dependent-types",
        COC + ("Set1", "Ty", "set1c", "tarrd"),
        "Calculus of constructions with object-level dependent types",
        13,
    ),
    _entry(
        "coc-prenex-polymorphism",
        ("I",) + COC + ("iota",) + PRENEX,
        "Calculus of constructions with prenex predicative polymorphism",
        16,
    ),
    _entry("theory-u", tuple(c.name for c in _load_clusters()), "The theory U", 43),
)


def catalog_entry(name: str, catalog=None) -> NamedSubTheory:
    for e in catalog or CATALOG:
        if e.name == name:
            return e
    raise UnknownSubTheory(name)


def induced_theory(clusters, name: str = "") -> Theory:
    """The (signature, rules) pair made of the given clusters of U, in U's order.

    No closure condition is checked here; see ``fragments.is_fragment``.
    """
    u = theory_u()
    wanted = set(clusters)
    unknown = wanted - {c.name for c in u.clusters}
    if unknown:
        raise UnknownSubTheory(f"no such cluster(s): {sorted(unknown)}")
    chosen = tuple(c for c in u.clusters if c.name in wanted)
    names = {d.name for c in chosen for d in c.declarations}
    rule_names = {r.name for c in chosen for r in c.rules}
    return Theory(
        u.signature.restrict(names),
        tuple(r for r in u.rules if r.name in rule_names),
        chosen,
        name,
    )


def subtheory(name: str, catalog=None) -> Theory:
    if name == "theory-u":
        return theory_u()
    e = catalog_entry(name, catalog)
    return induced_theory(e.clusters, e.name)


# --------------------------------------------------------------------------
# verification


@dataclass
class EntryReport:
    name: str
    size_ok: bool
    fragment_ok: bool
    violations: list = field(default_factory=list)
    orthogonal: bool = False
    preservation: list = field(default_factory=list)
    error: str = ""

    @property
    def ok(self) -> bool:
        return (
            not self.error
            and self.size_ok
            and self.fragment_ok
            and self.orthogonal
            and all(p.verdict for p in self.preservation)
        )

    def to_text(self) -> str:
        status = "ok" if self.ok else "FAILED"
        kept = sum(p.verdict for p in self.preservation)
        lines = [
            f"{self.name}: {status} (fragment {'yes' if self.fragment_ok else 'no'}, "
            f"orthogonal {'yes' if self.orthogonal else 'no'}, "
            f"preservation {kept}/{len(self.preservation)})"
        ]
        if self.error:
            lines.append(f"  error: {self.error}")
        lines += [f"  violation: {v}" for v in self.violations]
        lines += [f"  {p.to_text()}" for p in self.preservation if not p.verdict]
        return "\n".join(lines)


@dataclass
class CatalogReport:
    entries: list[EntryReport]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_text(self) -> str:
        n = sum(e.ok for e in self.entries)
        body = "\n".join(e.to_text() for e in self.entries)
        return f"{body}\n{n}/{len(self.entries)} sub-theories confirmed"


def verify_entry(entry: NamedSubTheory) -> EntryReport:
    from .fragments import Violation, is_fragment
    from .kernel import check_rule_preservation
    from .rewrite import check_orthogonality

    size_ok = len(entry.clusters) == entry.size
    rep = EntryReport(entry.name, size_ok, False)
    if not size_ok:
        rep.violations.append(
            Violation("ClusterCountMismatch", f"{len(entry.clusters)} clusters listed, {entry.size} expected")
        )
    try:
        th = induced_theory(entry.clusters, entry.name)
        ok, violations = is_fragment(theory_u(), th)
        rep.fragment_ok = ok
        rep.violations += violations
        rep.orthogonal = check_orthogonality(th.rules).verdict
        if ok:
            # preservation is checked in the sub-theory itself
            rep.preservation = [check_rule_preservation(th, r) for r in th.rules]
    except KernelError as e:
        rep.error = f"{e.code}: {e}"
    return rep


def verify_catalog(catalog=None) -> CatalogReport:
    return CatalogReport([verify_entry(e) for e in (catalog or CATALOG)])


# --------------------------------------------------------------------------
# export


def manifest_text(theory: Theory | None = None) -> str:
    """A ``.thu`` script that re-creates the theory cluster by cluster.

    A rule that mentions a constant of a later cluster (set-red and tarrd-red
    need Ty) is held back until that constant is declared.
    """
    th = theory or theory_u()
    declared: set[str] = set()
    pending: list[tuple[str, object]] = []
    blocks = []
    for c in th.clusters:
        declared |= {d.name for d in c.declarations}
        lines = [f"// cluster {c.name} {c.glyph or c.name}"]
        lines += [f"{'dagger ' if d.dagger else ''}symbol {d.name} : {format_term(d.type)};" for d in c.declarations]
        pending += [(c.name, r) for r in c.rules]
        ready = [(owner, r) for owner, r in pending if r.constants() <= declared]
        pending = [p for p in pending if p not in ready]
        for owner, r in ready:
            if owner != c.name:
                lines.append(f"// from cluster {owner}")
            lines.append(format_rule(r))
        blocks.append("\n".join(lines))
    if pending:
        raise KernelError(f"rules mention undeclared constants: {[r.name for _, r in pending]}")
    return "\n\n".join(blocks) + "\n"


def manifest_records(theory: Theory | None = None) -> list[dict]:
    th = theory or theory_u()
    out = []
    for c in th.clusters:
        out.append(
            {
                "cluster": c.name,
                "glyph": c.glyph,
                "declarations": [
                    {"name": d.name, "type": format_term(d.type), "dagger": d.dagger} for d in c.declarations
                ],
                "rules": [format_rule(r) for r in c.rules],
            }
        )
    return out


def manifest_json(theory: Theory | None = None) -> str:
    return "\n".join(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in manifest_records(theory))
