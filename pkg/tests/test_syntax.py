import glob
import os

import pytest

from conftest import CORPUS
from thu.catalog import U_SOURCE, manifest_text
from thu.errors import ParseError
from thu.syntax import (
    Check,
    Classify,
    Conv,
    Infer,
    Normalize,
    Require,
    RuleDecl,
    SymbolDecl,
    format_script,
    format_term,
    parse,
    parse_term,
    tokenize,
)
from thu.term import ANON, TYPE, Abs, App, Const, Prod, Var, arrow

I = Const("I")


def test_symbol_decl_arrow():
    (st,) = parse("symbol succ : I -> I;").statements
    assert st == SymbolDecl("succ", arrow(I, I))
    assert isinstance(st.type, Prod) and st.type.domain == I and st.type.body == I


def test_rule_decl_matches_u(U):
    (st,) = parse("rule prf-imp Prf (imp x y) --> Prf x -> Prf y with x:Prop, y:Prop;").statements
    assert isinstance(st, RuleDecl) and st.name == "prf-imp" and st.annotated
    r = st.to_rule(U.signature)
    ref = U.rule("imp-red")
    assert (r.lhs, r.rhs, r.meta_ctx) == (ref.lhs, ref.rhs, ref.meta_ctx)


def test_rule_without_annotations_guesses_variables(U):
    (st,) = parse("rule Prf (imp x y) --> Prf x -> Prf y;").statements
    assert st.name is None and not st.annotated
    r = st.to_rule(U.signature, default_name="r1")
    assert r.lhs == U.rule("imp-red").lhs and r.name == "r1"


def test_type_of_all(U):
    assert parse_term("!x : Set. (El x -> Prop) -> Prop") == U.signature.type_of("all")


def test_application_is_left_associative_and_arrow_right():
    assert parse_term("f a b") == App(App(Const("f"), Const("a")), Const("b"))
    assert parse_term("A -> B -> C") == arrow(Const("A"), arrow(Const("B"), Const("C")))


def test_binders_scope_over_body_only():
    t = parse_term("\\x:I. x")
    assert isinstance(t, Abs) and t.binder == "x"
    assert parse_term("\\x:x. x").domain == Const("x")  # x is not bound in its own domain


def test_commands():
    src = """
    #REQUIRE theory-u;  // comment
    #CHECK zero : I;
    #INFER zero;
    #NORMALIZE El iota;
    #CONV I == El iota;
    #CLASSIFY zero : I;
    """
    kinds = [type(s) for s in parse(src).statements]
    assert kinds == [Require, Check, Infer, Normalize, Conv, Classify]


def test_positions_are_recorded():
    sts = parse("symbol I : TYPE;\n  #CHECK I : TYPE;").statements
    assert sts[0].pos == (1, 1) and sts[1].pos == (2, 3)


@pytest.mark.parametrize(
    "src, line, col",
    [
        ("symbol I : TYPE", 1, 16),
        ("symbol : TYPE;", 1, 8),
        ("#CHECK zero : ;", 1, 15),
        ("symbol I : TYPE;\n#FOO x;", 2, 1),
        ("rule --> x;", 1, 6),
        ("symbol a : (I;", 1, 14),
    ],
)
def test_syntax_errors_carry_positions(src, line, col):
    with pytest.raises(ParseError) as e:
        parse(src)
    assert (e.value.line, e.value.column) == (line, col)
    assert e.value.code == "SyntaxError"


def test_printer_freshens_shadowed_binders():
    t = parse_term("\\x:I. \\x:I. x")
    assert format_term(t) == "\\x:I. \\x1:I. x1"


def test_printer_avoids_captured_constants():
    # a binder printed as x would capture the constant x
    t = Abs("x", I, App(Const("f"), Const("x")))
    s = format_term(t)
    assert s != "\\x:I. f x"
    assert parse_term(s) == t


def test_printer_arrow_for_unused_binder():
    assert format_term(Prod(ANON, I, I)) == "I -> I"
    assert format_term(parse_term("!x:Set. El x -> Prop")) == "!x:Set. El x -> Prop"
    assert format_term(TYPE) == "TYPE"


def _roundtrip(src):
    once = format_script(parse(src))
    assert format_script(parse(once)) == once
    assert parse(once) == parse(src)


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CORPUS, "*.thu"))), ids=os.path.basename)
def test_roundtrip_corpus(path):
    with open(path, encoding="utf-8") as fh:
        _roundtrip(fh.read())


def test_roundtrip_theory_u():
    _roundtrip(U_SOURCE)
    _roundtrip(manifest_text())


def test_tokenizer_keeps_hyphenated_rule_names():
    toks = [t.text for t in tokenize("rule iota-red El iota --> I;")]
    assert toks[:3] == ["rule", "iota-red", "El"]
