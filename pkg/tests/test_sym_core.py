from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symlog.sym_core import (
    BOTTOM,
    And,
    Atom,
    Inj,
    Lam,
    NegAtom,
    Or,
    Pair,
    SimSubstitution,
    Star,
    SymTypeError,
    Var,
    apply_sim_subst,
    cxty_term,
    cxty_type,
    format_term,
    format_type,
    free_vars,
    neg_type,
    positions,
    subformula_report,
    substitute,
    sym_equiv,
    type_of,
    typecheck_sym,
)
from symlog.sym_syntax import ParseError, parse_sym_context, parse_sym_term, parse_sym_type

from .strategies import sym_types, typed_sym

a, b, c = Atom("a"), Atom("b"), Atom("c")
x, y, z, w = Var("x"), Var("y"), Var("z"), Var("w")


def pi1(var: str, ab: And) -> Lam:
    return Lam("z", neg_type(ab.left), Star(Var(var), Inj(1, neg_type(ab.right), Var("z"))))


# --- types -----------------------------------------------------------------


def test_neg_type_examples():
    assert neg_type(a) == NegAtom("a")
    assert neg_type(And(a, b)) == Or(NegAtom("a"), NegAtom("b"))
    t = Or(a, NegAtom("b"))
    assert neg_type(neg_type(t)) == t


def test_neg_type_rejects_bottom():
    with pytest.raises(ValueError, match="m-types"):
        neg_type(BOTTOM)


def test_cxty_type_examples():
    assert cxty_type(a) == 0
    assert cxty_type(And(a, Or(b, c))) == 2
    assert cxty_type(BOTTOM) == 0


@given(sym_types)
def test_negation_is_involutive(t):
    assert neg_type(neg_type(t)) == t


@given(sym_types)
def test_cxty_symmetric_under_negation(t):
    assert cxty_type(t) == cxty_type(neg_type(t))


@given(sym_types)
def test_type_print_parse_roundtrip(t):
    assert parse_sym_type(format_type(t)) == t


def test_type_syntax():
    assert parse_sym_type("a /\\ b \\/ c") == Or(And(a, b), c)
    assert parse_sym_type("~(a /\\ b)") == Or(NegAtom("a"), NegAtom("b"))
    assert parse_sym_type("#") == BOTTOM


# --- terms -----------------------------------------------------------------


def test_free_vars_examples():
    assert free_vars(x) == {"x"}
    assert free_vars(Lam("x", a, Star(y, x))) == {"y"}
    assert free_vars(Pair(x, Lam("x", a, x))) == {"x"}


def test_cxty_term():
    assert cxty_term(x) == 0
    assert cxty_term(Lam("x", a, Star(y, x))) == 1
    assert cxty_term(Inj(1, a, Pair(x, Lam("u", a, Star(y, Var("u")))))) == 2


def test_alpha_equivalence():
    assert Lam("x", a, Star(y, x)) == Lam("u", a, Star(y, Var("u")))
    assert Lam("x", a, Star(y, x)) != Lam("x", a, Star(y, z))
    assert hash(Lam("x", a, x)) == hash(Lam("q", a, Var("q")))


def test_substitute_examples():
    assert substitute(Star(x, y), "x", Pair(z, z)) == Star(Pair(z, z), y)
    out = substitute(Lam("y", a, x), "x", y)
    assert isinstance(out, Lam) and out.binder != "y"
    assert out == Lam("q", a, y)
    n = Pair(z, w)
    assert substitute(x, "x", n) == n


def test_simultaneous_substitution_swaps():
    m = Star(x, y)
    assert apply_sim_subst(m, {"x": y, "y": x}) == Star(y, x)
    assert apply_sim_subst(m, SimSubstitution((), a)) == m


def test_sim_substitution_validate():
    ctx = {"p": a, "q": b}
    good = SimSubstitution((("x", Pair(Var("p"), Var("q"))),), And(a, b))
    good.validate(ctx)
    with pytest.raises(SymTypeError, match="proper"):
        SimSubstitution((("x", Var("p")),), a).validate(ctx)
    with pytest.raises(SymTypeError):
        SimSubstitution((("x", Pair(Var("p"), Var("q"))),), And(b, a)).validate(ctx)


@given(typed_sym(12), typed_sym(8))
def test_singleton_sim_subst_agrees(sample, other):
    _, m, _ = sample
    _, n, _ = other
    for v in sorted(m.fv):
        assert apply_sim_subst(m, {v: n}) == substitute(m, v, n)


# --- typing ----------------------------------------------------------------


def test_typecheck_projection():
    ab = And(a, b)
    t, d = typecheck_sym({"y": ab}, pi1("y", ab))
    assert t == a
    assert d.rule == "lam" and d.children[0].rule == "star"


def test_typecheck_basic_and_errors():
    assert type_of({"x": a}, x) == a
    with pytest.raises(SymTypeError, match="negation"):
        type_of({"y": a, "z": a}, Star(y, z))
    with pytest.raises(SymTypeError, match="unbound"):
        type_of({}, x)
    with pytest.raises(SymTypeError):
        type_of({"x": a}, Lam("u", a, x))  # body not ⊥
    with pytest.raises(SymTypeError):
        type_of({"y": NegAtom("a"), "x": a}, Pair(Star(y, x), x))  # ⊥ in a pair


def test_injection_types():
    assert type_of({"x": a}, Inj(1, b, x)) == Or(a, b)
    assert type_of({"x": a}, Inj(2, b, x)) == Or(b, a)


@given(typed_sym(20))
def test_generated_terms_typecheck(sample):
    ctx, m, t = sample
    assert type_of(ctx, m) == t


@given(typed_sym(20))
def test_term_print_parse_roundtrip(sample):
    _, m, _ = sample
    assert parse_sym_term(format_term(m)) == m


@given(typed_sym(16), typed_sym(10))
def test_substitution_preserves_types(sample, other):
    ctx, m, t = sample
    for v in sorted(m.fv):
        # replace v by a term of its own type, built from a fresh variable
        n = Var(v + "_r")
        assert type_of({**ctx, n.x: ctx[v]}, substitute(m, v, n)) == t


def test_parse_errors_have_positions():
    with pytest.raises(ParseError, match=r"1:\d+"):
        parse_sym_term("(x * ")
    with pytest.raises(ParseError):
        parse_sym_term("!x")
    with pytest.raises(ParseError, match="twice"):
        parse_sym_context("x:a, x:b")


# --- ~ and subformulas ------------------------------------------------------


def test_sym_equiv_examples():
    p, q, r = Var("p"), Var("q"), Var("r")
    assert sym_equiv(Star(p, q), Star(q, p))
    assert sym_equiv(Lam("x", a, Star(x, y)), Lam("x", a, Star(x, y)))
    assert sym_equiv(Pair(Star(p, q), r), Pair(Star(q, p), r))
    assert not sym_equiv(Pair(p, q), Pair(q, p))


def _swap_all(m):
    kids = [_swap_all(k) for k in m.children]
    if isinstance(m, Star):
        return Star(kids[1], kids[0])
    return m.rebuild(kids) if kids else m


@given(typed_sym(16), typed_sym(8))
def test_sym_equiv_preserved_by_substitution(sample, other):
    _, m, _ = sample
    _, n, _ = other
    m2, n2 = _swap_all(m), _swap_all(n)
    assert sym_equiv(m, m2)
    for v in sorted(m.fv):
        assert sym_equiv(substitute(m, v, n), substitute(m2, v, n2))


@given(typed_sym(12))
def test_sym_equiv_is_an_equivalence(sample):
    _, m, _ = sample
    m2 = _swap_all(m)
    assert sym_equiv(m, m) and sym_equiv(m2, m) and sym_equiv(_swap_all(m2), m)


def test_subformula_report_examples():
    _, d = typecheck_sym({"x": a}, x)
    assert subformula_report(d)
    ab = And(a, b)
    _, d = typecheck_sym({"y": ab}, pi1("y", ab))
    assert subformula_report(d)


def test_positions_preorder():
    m = Star(Pair(x, y), z)
    assert [p for p, _ in positions(m)] == [(), (0,), (0, 0), (0, 1), (1,)]


@given(st.data())
def test_alpha_insensitive_typing(data):
    ctx, m, t = data.draw(typed_sym(16))
    renamed = parse_sym_term(format_term(m).replace("x", "x_"))
    # renaming every bound x-name keeps the type (context names start with v)
    assert type_of(ctx, renamed) == t
    assert free_vars(renamed) == free_vars(m)
