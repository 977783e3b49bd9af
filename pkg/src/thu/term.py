"""Terms of the lambda-Pi calculus.

Terms are kept in locally nameless form: variables bound by a product or an
abstraction are de Bruijn indices (``BVar``), free variables are names
(``Var``).  Binder names are only display hints and never take part in
equality or hashing, so two alpha-equivalent terms compare equal.

Use :func:`pi`, :func:`lam` and :func:`arrow` to build binders from named
bodies; they abstract the name for you.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Union


@dataclass(frozen=True, slots=True)
class Const:
    name: str

    def __repr__(self):
        return f"Const({self.name!r})"


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, slots=True)
class BVar:
    index: int


@dataclass(frozen=True, slots=True)
class Sort:
    name: str  # "TYPE" or "KIND"

    def __repr__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Prod:
    binder: str = field(compare=False)
    domain: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class Abs:
    binder: str = field(compare=False)
    domain: "Term"
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Const, Var, BVar, Sort, Prod, Abs, App]

TYPE = Sort("TYPE")
KIND = Sort("KIND")

# Hint used for the binder of a non-dependent product.
ANON = "_"


# --------------------------------------------------------------------------
# de Bruijn plumbing


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every loose index ``>= cutoff``."""
    if d == 0:
        return t
    match t:
        case BVar(i):
            return BVar(i + d) if i >= cutoff else t
        case App(f, a):
            return App(shift(f, d, cutoff), shift(a, d, cutoff))
        case Prod(x, a, b):
            return Prod(x, shift(a, d, cutoff), shift(b, d, cutoff + 1))
        case Abs(x, a, b):
            return Abs(x, shift(a, d, cutoff), shift(b, d, cutoff + 1))
        case _:
            return t


def is_locally_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case BVar(i):
            return i < depth
        case App(f, a):
            return is_locally_closed(f, depth) and is_locally_closed(a, depth)
        case Prod(_, a, b) | Abs(_, a, b):
            return is_locally_closed(a, depth) and is_locally_closed(b, depth + 1)
        case _:
            return True


def instantiate(body: Term, u: Term) -> Term:
    """Replace index 0 of ``body`` by ``u`` and drop one binder level."""
    closed = is_locally_closed(u)

    def go(t: Term, depth: int) -> Term:
        match t:
            case BVar(i):
                if i == depth:
                    return u if closed else shift(u, depth)
                if i > depth:
                    return BVar(i - 1)
                return t
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Prod(x, a, b):
                return Prod(x, go(a, depth), go(b, depth + 1))
            case Abs(x, a, b):
                return Abs(x, go(a, depth), go(b, depth + 1))
            case _:
                return t

    return go(body, 0)


def abstract(t: Term, name: str) -> Term:
    """Turn free occurrences of ``name`` into index 0 (the inverse of opening)."""

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(y) if y == name:
                return BVar(depth)
            case BVar(i):
                # loose indices of t must skip the new binder
                return BVar(i + 1) if i >= depth else t
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Prod(x, a, b):
                return Prod(x, go(a, depth), go(b, depth + 1))
            case Abs(x, a, b):
                return Abs(x, go(a, depth), go(b, depth + 1))
            case _:
                return t

    return go(t, 0)


def open_body(t: Prod | Abs, name: str) -> Term:
    return instantiate(t.body, Var(name))


# --------------------------------------------------------------------------
# constructors


def pi(x: str, domain: Term, body: Term) -> Prod:
    return Prod(x, domain, abstract(body, x))


def lam(x: str, domain: Term, body: Term) -> Abs:
    return Abs(x, domain, abstract(body, x))


def arrow(*types: Term) -> Term:
    """``arrow(A, B, C)`` is ``A -> B -> C``."""
    *doms, result = types
    for d in reversed(doms):
        result = Prod(ANON, d, shift(result, 1))
    return result


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def is_sort(t: Term) -> bool:
    return isinstance(t, Sort)


# --------------------------------------------------------------------------
# queries


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding substitution of the free variable ``x`` by ``u``."""
    return subst_many(t, {x: u})


def subst_many(t: Term, sigma: dict[str, Term]) -> Term:
    if not sigma:
        return t
    closed = {k: is_locally_closed(v) for k, v in sigma.items()}

    def go(t: Term, depth: int) -> Term:
        match t:
            case Var(y) if y in sigma:
                u = sigma[y]
                return u if closed[y] else shift(u, depth)
            case App(f, a):
                return App(go(f, depth), go(a, depth))
            case Prod(x, a, b):
                return Prod(x, go(a, depth), go(b, depth + 1))
            case Abs(x, a, b):
                return Abs(x, go(a, depth), go(b, depth + 1))
            case _:
                return t

    return go(t, 0)


def alpha_eq(t: Term, u: Term) -> bool:
    # binder names are excluded from equality, so this is structural
    return t == u


def const_of(t: Term) -> frozenset[str]:
    out: set[str] = set()
    _collect(t, Const, out)
    return frozenset(out)


def free_vars(t: Term) -> frozenset[str]:
    out: set[str] = set()
    _collect(t, Var, out)
    return frozenset(out)


def _collect(t: Term, kind: type, out: set[str]) -> None:
    stack = [t]
    while stack:
        t = stack.pop()
        match t:
            case App(f, a):
                stack.append(f)
                stack.append(a)
            case Prod(_, a, b) | Abs(_, a, b):
                stack.append(a)
                stack.append(b)
            case Const(n) if kind is Const:
                out.add(n)
            case Var(n) if kind is Var:
                out.add(n)
            case _:
                pass


def size(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + size(f) + size(a)
        case Prod(_, a, b) | Abs(_, a, b):
            return 1 + size(a) + size(b)
        case _:
            return 1


def depth(t: Term) -> int:
    match t:
        case App(f, a):
            return 1 + max(depth(f), depth(a))
        case Prod(_, a, b) | Abs(_, a, b):
            return 1 + max(depth(a), depth(b))
        case _:
            return 1


def contains_kind(t: Term) -> bool:
    match t:
        case Sort("KIND"):
            return True
        case App(f, a):
            return contains_kind(f) or contains_kind(a)
        case Prod(_, a, b) | Abs(_, a, b):
            return contains_kind(a) or contains_kind(b)
        case _:
            return False


def has_binder(t: Term) -> bool:
    match t:
        case Prod() | Abs():
            return True
        case App(f, a):
            return has_binder(f) or has_binder(a)
        case _:
            return False


def subterms(t: Term, pos: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    """Pre-order walk yielding ``(position, subterm)``; leftmost-outermost first."""
    yield pos, t
    match t:
        case App(f, a):
            yield from subterms(f, pos + (0,))
            yield from subterms(a, pos + (1,))
        case Prod(_, a, b) | Abs(_, a, b):
            yield from subterms(a, pos + (0,))
            yield from subterms(b, pos + (1,))


def replace_at(t: Term, pos: tuple[int, ...], u: Term) -> Term:
    if not pos:
        return u
    i, rest = pos[0], pos[1:]
    match t:
        case App(f, a):
            return App(replace_at(f, rest, u), a) if i == 0 else App(f, replace_at(a, rest, u))
        case Prod(x, a, b):
            return Prod(x, replace_at(a, rest, u), b) if i == 0 else Prod(x, a, replace_at(b, rest, u))
        case Abs(x, a, b):
            return Abs(x, replace_at(a, rest, u), b) if i == 0 else Abs(x, a, replace_at(b, rest, u))
    raise IndexError(pos)


def fresh_name(hint: str, avoid) -> str:
    base = hint if hint and hint != ANON else "x"
    if base not in avoid:
        return base
    base = base.rstrip("0123456789") or "x"
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")
