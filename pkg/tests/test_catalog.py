import json

import pytest

from thu.catalog import (
    CATALOG,
    NamedSubTheory,
    catalog_entry,
    cluster_histogram,
    induced_theory,
    manifest_json,
    manifest_text,
    subtheory,
    verify_catalog,
    verify_entry,
)
from thu.errors import UnknownSubTheory
from thu.signature import Signature, append_declaration
from thu.syntax import SymbolDecl, parse

# cluster counts of the published axiom lists
LISTED = {
    "minimal-predicate-logic": 8,
    "constructive-predicate-logic": 14,
    "ecumenical-predicate-logic": 20,
    "minimal-stt": 10,
    "constructive-stt": 16,
    "ecumenical-stt": 22,
    "stt-predicate-subtyping": 15,
    "stt-prenex-polymorphism": 15,
    "stt-psub-prenex": 20,
    "calculus-of-constructions": 9,
    "coc-with-iota": 10,
    "minimal-subtheory": 12,
    "coc-object-dependent-types": 13,
    "coc-prenex-polymorphism": 15,
    "theory-u": 43,
}
# these lists omit the I cluster although iota-red rewrites to I
NEED_I = {"coc-with-iota", "minimal-subtheory", "coc-prenex-polymorphism"}


def test_census(U):
    assert len(U.signature) == 43 and len(U.rules) == 31
    assert cluster_histogram(U) == {0: 14, 1: 27, 2: 2}
    assert len(U.clusters) == 43


def test_fifteen_entries():
    assert [e.name for e in CATALOG] == list(LISTED)


@pytest.mark.parametrize("name", list(LISTED))
def test_entry_sizes(name):
    e = catalog_entry(name)
    if name in NEED_I:
        assert "I" in e.clusters
        assert len(set(e.clusters) - {"I"}) == LISTED[name]
    else:
        assert len(e.clusters) == e.size == LISTED[name]


def test_minimal_predicate_logic():
    th = subtheory("minimal-predicate-logic")
    assert len(th.clusters) == 8
    assert th.rule_names == {"iota-red", "imp-red", "all-red"}


def test_calculus_of_constructions():
    th = subtheory("calculus-of-constructions")
    assert [c.name for c in th.clusters] == ["Set", "El", "Prop", "Prf", "all", "o", "arrd", "impd", "pi"]


def test_stt_prenex_polymorphism():
    assert len(subtheory("stt-prenex-polymorphism").clusters) == 15


def test_unknown_entry():
    with pytest.raises(UnknownSubTheory):
        subtheory("nope")
    with pytest.raises(UnknownSubTheory):
        induced_theory(["nope"])


def test_verify_catalog():
    rep = verify_catalog()
    assert rep.ok, rep.to_text()
    assert rep.to_text().endswith("15/15 sub-theories confirmed")


def test_tampered_drop_top():
    e = catalog_entry("constructive-predicate-logic")
    bad = NamedSubTheory(e.name, tuple(c for c in e.clusters if c != "top"), e.citation, e.size)
    rep = verify_entry(bad)
    assert not rep.ok
    assert [v.kind for v in rep.violations] == ["ClusterCountMismatch"]


def test_tampered_positive_without_top():
    e = catalog_entry("minimal-stt")
    bad = NamedSubTheory("tampered", e.clusters + ("I", "zero", "succ", "positive"), "", 14)
    rep = verify_entry(bad)
    assert not rep.fragment_ok and not rep.ok
    assert any(v.kind == "RhsOutsideSignature" and "positive-red2" in v.detail for v in rep.violations)


def test_inclusion_lattice():
    c = {e.name: e.constants for e in CATALOG}
    assert c["minimal-predicate-logic"] < c["constructive-predicate-logic"] < c["ecumenical-predicate-logic"]
    assert c["minimal-stt"] < c["constructive-stt"] < c["ecumenical-stt"]
    for ext in ["constructive-stt", "stt-predicate-subtyping", "stt-prenex-polymorphism", "stt-psub-prenex"]:
        assert c["minimal-stt"] < c[ext]
    assert c["calculus-of-constructions"] < c["coc-with-iota"] < c["minimal-subtheory"]
    assert all(s <= c["theory-u"] for s in c.values())


@pytest.mark.parametrize("name", list(LISTED))
def test_entries_load_in_dependency_order(name):
    th = subtheory(name)
    sig = Signature()
    for d in th.signature:
        sig = append_declaration(sig, d.name, d.type, d.dagger)
    assert sig == th.signature


def test_manifest_is_stable_and_rebuilds_u(U):
    text = manifest_text()
    assert text == manifest_text()
    decls = [s for s in parse(text).statements if isinstance(s, SymbolDecl)]
    assert [(d.name, d.type) for d in decls] == [(d.name, d.type) for d in U.signature]


def test_manifest_records():
    recs = [json.loads(line) for line in manifest_json().splitlines()]
    assert len(recs) == 43
    top = next(r for r in recs if r["cluster"] == "top")
    assert top["declarations"] == [{"name": "top", "type": "Prop", "dagger": False}]
    assert top["rules"] == ["rule top-red Prf top --> !z:Prop. Prf z -> Prf z;"]
