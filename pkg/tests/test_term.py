from thu.syntax import parse_term
from thu.term import (
    BVar,
    Const,
    Prod,
    Var,
    abstract,
    alpha_eq,
    app,
    arrow,
    const_of,
    free_vars,
    instantiate,
    lam,
    pi,
    subst,
)

I = Const("I")
ZERO = Const("zero")


def T(src, *vs):
    return parse_term(src, vs)


def test_subst_direct_hit():
    assert subst(Var("x"), "x", ZERO) == ZERO


def test_subst_shadowed_binder_untouched():
    t = lam("x", I, Var("x"))
    assert subst(t, "x", ZERO) == t


def test_subst_leaves_beta_redex_unreduced():
    t = pi("z", app(Const("El"), Var("a")), app(Const("Prf"), app(Var("p"), Var("z"))))
    u = lam("w", I, app(Const("positive"), Var("w")))
    want = pi("z", app(Const("El"), Var("a")), app(Const("Prf"), app(u, Var("z"))))
    assert subst(t, "p", u) == want


def test_subst_avoids_capture():
    # \y:I. x  with x := y  must not capture the free y
    t = lam("y", I, Var("x"))
    r = subst(t, "x", Var("y"))
    assert free_vars(r) == {"y"}
    assert not alpha_eq(r, lam("y", I, Var("y")))


def test_alpha_eq_examples():
    assert alpha_eq(lam("x", I, Var("x")), lam("y", I, Var("y")))
    assert not alpha_eq(lam("x", I, Var("x")), lam("x", I, ZERO))
    a = T("!x : Set. (El x -> Prop) -> Prop")
    b = T("!a : Set. (El a -> Prop) -> Prop")
    assert alpha_eq(a, b) and a == b and hash(a) == hash(b)


def test_const_of_examples():
    assert const_of(T("\\p:Prop. \\x:Prf p. x")) == {"Prop", "Prf"}
    assert const_of(Var("x")) == frozenset()
    assert const_of(T("El iota")) == {"El", "iota"}


def test_free_vars_examples():
    assert free_vars(T("\\x:I. x")) == frozenset()
    assert free_vars(T("Prf (p z)", "p", "z")) == {"p", "z"}
    assert free_vars(T("!z:El x. Prf (p z)", "x", "p")) == {"x", "p"}


def test_arrow_is_product_with_unused_binder():
    t = arrow(I, I)
    assert isinstance(t, Prod) and t.body == I
    assert t == T("!x:I. I")


def test_open_close_inverse():
    body = abstract(app(Var("f"), Var("x")), "x")
    assert body == app(Var("f"), BVar(0))
    assert instantiate(body, Var("x")) == app(Var("f"), Var("x"))
