import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thu.catalog import subtheory
from thu.encoders import (
    COC_RENAMING,
    COC_SPEC,
    LAMBDA_PI_SPEC,
    And,
    Atom,
    Exists,
    FalseF,
    Fn,
    Forall,
    ForallElim,
    ForallIntro,
    Hyp,
    Imp,
    ImpElim,
    ImpIntro,
    Neg,
    Or,
    PLLanguage,
    PTSSpec,
    PVar,
    TrueF,
    encode_pl_formula,
    encode_pl_language,
    encode_pl_sequent,
    encode_pts,
    parse_pts_spec,
    pts_signature_isomorphic,
    transcribe,
)
from thu.errors import ArityMismatch, DuplicateSymbol, NonFunctionalSpec, UnknownSymbol
from thu.fragments import classify
from thu.kernel import check, check_rule_preservation
from thu.rewrite import check_orthogonality
from thu.signature import Context
from thu.syntax import format_term, parse_term
from thu.term import Const

ARITH = PLLanguage(functions=(("zero", 0), ("succ", 1)), predicates=(("positive", 1),))
PROP = Const("Prop")


def pos(t):
    return Atom("positive", (t,))


def num(n):
    t = Fn("zero")
    for _ in range(n):
        t = Fn("succ", (t,))
    return t


def test_encode_language():
    ctx = encode_pl_language(ARITH)
    assert [(x, format_term(a)) for x, a in ctx] == [("zero", "I"), ("succ", "I -> I"), ("positive", "I -> Prop")]
    assert encode_pl_language(PLLanguage()) == Context()
    ctx = encode_pl_language(PLLanguage(predicates=(("P", 2),)))
    assert format_term(ctx.lookup("P")) == "I -> I -> Prop"


def test_encode_language_duplicate():
    with pytest.raises(DuplicateSymbol):
        encode_pl_language(PLLanguage(functions=(("f", 1),), predicates=(("f", 1),)))


def test_encode_formula_examples(U):
    ctx = encode_pl_language(ARITH)
    a = encode_pl_formula(ARITH, pos(num(2)))
    assert format_term(a) == "positive (succ (succ zero))"
    check(U, ctx, a, PROP)
    b = encode_pl_formula(ARITH, Imp(pos(num(2)), pos(num(2))))
    assert format_term(b) == "imp (positive (succ (succ zero))) (positive (succ (succ zero)))"
    check(U, ctx, b, PROP)
    c = encode_pl_formula(ARITH, Forall("z", pos(PVar("z"))))
    assert format_term(c) == "all iota (\\z:I. positive z)"
    check(U, ctx, c, PROP)


def test_encode_formula_errors():
    with pytest.raises(UnknownSymbol):
        encode_pl_formula(ARITH, Atom("even", (num(0),)))
    with pytest.raises(ArityMismatch):
        encode_pl_formula(ARITH, Atom("positive", ()))
    with pytest.raises(ArityMismatch):
        encode_pl_formula(ARITH, pos(Fn("succ", ())))


def test_sequent_hypothesis_projection(U):
    A = pos(num(2))
    ctx, goal = encode_pl_sequent(ARITH, [A], A)
    assert [x for x, _ in ctx][-1] == "a1"
    check(U, ctx, parse_term("a1", ["a1"]), goal)


def test_sequent_identity(U):
    A = pos(num(2))
    ctx, goal = encode_pl_sequent(ARITH, [], Imp(A, A))
    check(U, ctx, parse_term("\\x:Prf (positive (succ (succ zero))). x", ["positive", "succ", "zero"]), goal)


def test_sequent_forall(U):
    ctx, goal = encode_pl_sequent(ARITH, [], Forall("z", Imp(pos(PVar("z")), pos(PVar("z")))))
    check(U, ctx, parse_term("\\z:I. \\x:Prf (positive z). x", ["positive"]), goal)


def test_sequent_free_variables_come_before_hypotheses():
    ctx, _ = encode_pl_sequent(ARITH, [pos(PVar("y"))], pos(PVar("x")))
    assert [x for x, _ in ctx] == ["zero", "succ", "positive", "y", "x", "a1"]


# natural deduction proofs and their transcription

ND_LIBRARY = [
    # A => A
    ([], Imp(pos(num(1)), pos(num(1))), ImpIntro("h", pos(num(1)), Hyp("h"))),
    # A, A => B |- B
    ([pos(num(0)), Imp(pos(num(0)), pos(num(1)))], pos(num(1)), ImpElim(Hyp("a2"), Hyp("a1"))),
    # forall z. P z |- P 3
    ([Forall("z", pos(PVar("z")))], pos(num(3)), ForallElim(Hyp("a1"), num(3))),
    # forall z. P z => P z
    (
        [],
        Forall("z", Imp(pos(PVar("z")), pos(PVar("z")))),
        ForallIntro("z", ImpIntro("h", pos(PVar("z")), Hyp("h"))),
    ),
    # (A => B) => (B => C) => A => C
    (
        [],
        Imp(Imp(pos(num(0)), pos(num(1))), Imp(Imp(pos(num(1)), pos(num(2))), Imp(pos(num(0)), pos(num(2))))),
        ImpIntro(
            "f",
            Imp(pos(num(0)), pos(num(1))),
            ImpIntro(
                "g",
                Imp(pos(num(1)), pos(num(2))),
                ImpIntro("x", pos(num(0)), ImpElim(Hyp("g"), ImpElim(Hyp("f"), Hyp("x")))),
            ),
        ),
    ),
    # forall z. P z => P (s z), P x |- P (s (s x))
    (
        [Forall("z", Imp(pos(PVar("z")), pos(Fn("succ", (PVar("z"),))))), pos(PVar("x"))],
        pos(Fn("succ", (Fn("succ", (PVar("x"),)),))),
        ImpElim(
            ForallElim(Hyp("a1"), Fn("succ", (PVar("x"),))),
            ImpElim(ForallElim(Hyp("a1"), PVar("x")), Hyp("a2")),
        ),
    ),
]


@pytest.mark.parametrize("hyps, goal, proof", ND_LIBRARY)
def test_transcription_is_accepted(U, hyps, goal, proof):
    ctx, target = encode_pl_sequent(ARITH, hyps, goal)
    check(U, ctx, transcribe(ARITH, proof), target)


def test_first_order_proof_classifies_as_minimal_predicate_logic(U):
    hyps, goal, proof = ND_LIBRARY[3]
    ctx, target = encode_pl_sequent(ARITH, hyps, goal)
    rep = classify(U, ctx, transcribe(ARITH, proof), target)
    assert rep.smallest == "minimal-predicate-logic"
    assert rep.exact_entry == "minimal-predicate-logic"
    assert rep.recheck.startswith("ok")


# random formulas

LANG = PLLanguage(functions=(("c", 0), ("f", 1), ("g", 2)), predicates=(("P", 1), ("R", 2), ("Q", 0)))


def pl_terms(vars_):
    leaves = st.sampled_from([Fn("c")] + [PVar(v) for v in vars_])
    return st.recursive(
        leaves,
        lambda sub: st.one_of(st.builds(lambda a: Fn("f", (a,)), sub), st.builds(lambda a, b: Fn("g", (a, b)), sub, sub)),
        max_leaves=4,
    )


def formulas(vars_=("x", "y")):
    t = pl_terms(vars_)
    atoms = st.one_of(
        st.builds(lambda a: Atom("P", (a,)), t),
        st.builds(lambda a, b: Atom("R", (a, b)), t, t),
        st.just(Atom("Q")),
        st.just(TrueF()),
        st.just(FalseF()),
    )
    return st.recursive(
        atoms,
        lambda sub: st.one_of(
            st.builds(Imp, sub, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Neg, sub),
            st.builds(Forall, st.sampled_from(["x", "z"]), sub),
            st.builds(Exists, st.sampled_from(["y", "w"]), sub),
        ),
        max_leaves=6,
    )


@settings(max_examples=300, deadline=None)
@given(formulas(), st.booleans())
def test_encoded_formulas_are_propositions(U, f, classical):
    ctx, target = encode_pl_sequent(LANG, [], f, classical)
    A = encode_pl_formula(LANG, f, classical)
    check(U, ctx, A, PROP)
    assert target.arg == A


# pure type systems


def test_coc_encoding():
    th = encode_pts(COC_SPEC)
    assert (len(th.signature), len(th.rules)) == (9, 5)
    assert pts_signature_isomorphic(th, subtheory("calculus-of-constructions"), COC_RENAMING)


def test_coc_encoding_needs_the_right_renaming():
    th = encode_pts(COC_SPEC)
    swapped = dict(COC_RENAMING, Pi_box_star_star="pi", Pi_star_box_box="all")
    assert not pts_signature_isomorphic(th, subtheory("calculus-of-constructions"), swapped)


def test_identity_renaming():
    th = encode_pts(COC_SPEC)
    assert pts_signature_isomorphic(th, encode_pts(COC_SPEC), {})


def test_lambda_pi_encoding():
    th = encode_pts(LAMBDA_PI_SPEC)
    assert (len(th.signature), len(th.rules)) == (7, 3)


def test_non_functional_spec():
    with pytest.raises(NonFunctionalSpec):
        encode_pts(PTSSpec(("*", "□", "△"), (("*", "□"), ("*", "△")), ()))
    with pytest.raises(NonFunctionalSpec):
        encode_pts(PTSSpec(("*", "□"), (), (("*", "*", "*"), ("*", "*", "□"))))


def test_parse_pts_spec():
    spec = parse_pts_spec("sorts: * box; axioms: *:box; rules: *,*,* *,box,box")
    assert spec == PTSSpec(("*", "box"), (("*", "box"),), (("*", "*", "*"), ("*", "box", "box")))
    assert len(encode_pts(spec).signature) == 7


@st.composite
def functional_specs(draw):
    n = draw(st.integers(1, 4))
    sorts = [f"s{i}" for i in range(n)]
    axioms = {}
    for s in sorts:
        if draw(st.booleans()):
            axioms[s] = draw(st.sampled_from(sorts))
    rules = {}
    for s1 in sorts:
        for s2 in sorts:
            if draw(st.integers(0, 2)) == 0:
                rules[(s1, s2)] = draw(st.sampled_from(sorts))
    return PTSSpec(tuple(sorts), tuple(axioms.items()), tuple((a, b, c) for (a, b), c in rules.items()))


@settings(max_examples=60, deadline=None)
@given(functional_specs())
def test_encoded_pts_is_a_theory(spec):
    th = encode_pts(spec)
    assert check_orthogonality(th.rules).verdict
    assert all(check_rule_preservation(th, r).verdict for r in th.rules)
    n = len(spec.sorts)
    assert len(th.signature) == 2 * n + len(spec.axioms) + len(spec.rules)
