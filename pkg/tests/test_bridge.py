from __future__ import annotations

import pytest
from hypothesis import given

from symlog import bridge as B
from symlog import lmm_core as L
from symlog import sym_core as S
from symlog.lmm_reduction import LmmRedexOccurrence, LmmRule, find_redexes_lmm, one_step_reducts_lmm
from symlog.lmm_syntax import parse_lmm_sequent, parse_lmm_term
from symlog.suites import EXPECTED_F_CHAINS, run_suite
from symlog.sym_reduction import RedexOccurrence, Rule, find_redexes, reduce_at
from symlog.sym_syntax import parse_sym_context, parse_sym_term

from .strategies import sym_types, typed_lmm, typed_sym

a, b = L.Atom("a"), L.Atom("b")
sa, sb = S.Atom("a"), S.Atom("b")


def root(rule):
    return LmmRedexOccurrence((), rule)


# --- translations ------------------------------------------------------------------


def test_type_e_examples():
    assert B.type_e(a) == sa
    assert B.type_e(L.Arrow(a, b)) == S.Or(S.NegAtom("a"), sb)
    assert B.type_e(L.Neg(L.Arrow(a, b))) == S.And(sa, S.NegAtom("b"))
    assert B.type_e(L.Neg(L.Neg(a))) == sa


def test_context_e_examples():
    assert B.context_e(L.LmmSequent({"x": a})) == {"x": sa}
    ctx = B.context_e(L.LmmSequent({}, {"k": L.Arrow(a, b)}))
    assert ctx == {B.rname("k"): S.And(sa, S.NegAtom("b"))}


def test_term_e_examples():
    seq = parse_lmm_sequent("y:a | k:a")
    assert B.term_e(L.Cons(L.LVar("y"), L.RVar("k")), seq) == S.Pair(S.Var("y"), S.Var(B.rname("k")))
    assert B.term_e(L.BarE(L.TildeT(L.LVar("y"))), seq) == S.Var("y")
    v = parse_lmm_term("< mu c:a. < y | c > | k >")
    ve = B.term_e(v, seq)
    assert isinstance(ve, S.Star) and ve.left == S.Var(B.rname("k")) and isinstance(ve.right, S.Lam)
    occ = next(o for o in find_redexes(ve) if o.path == () and o.rule is Rule.BETA_BOT)
    assert reduce_at(ve, occ) == S.Star(S.Var(B.rname("k")), S.Var("y"))


def test_term_f_examples():
    ctx = parse_sym_context("p:~a, q:a")
    m = parse_sym_term("(p * q)")
    assert B.term_f(m, ctx) == L.Cut(L.LVar("q"), L.TildeT(L.LVar("p")))
    lam = parse_sym_term("\\x:a. (p * x)")
    out = B.term_f(lam, ctx)
    assert out == L.BarE(L.MuTilde("x", a, L.Cut(L.LVar("x"), L.TildeT(L.LVar("p")))))


def test_type_f_rejects_bottom():
    with pytest.raises((S.SymTypeError, ValueError, TypeError)):
        B.type_f(S.Bottom())


@given(sym_types)
def test_type_f_respects_negation(t):
    assert B.type_f(S.neg_type(t)) == L.canonicalize_type(L.Neg(B.type_f(t)))


@given(sym_types)
def test_type_e_inverts_type_f(t):
    assert B.type_e(B.type_f(t)) == t


def test_bigT_examples():
    seq = parse_lmm_sequent("y:a | k:a")
    assert B.bigT(L.LVar("y"), seq) == L.LVar("y")
    assert B.bigT(L.BarE(L.RVar("k")), seq) == B.bigT(L.RVar("k"), seq)
    cut = parse_lmm_term("< y | k >")
    assert B.bigT(cut, seq) == L.Cut(L.LVar("y"), L.TildeT(L.LVar(B.rname("k"))))


def test_reserved_names_are_rejected_by_parsers():
    from symlog._lexer import ParseError

    with pytest.raises(ParseError):
        parse_lmm_term("!k")
    with pytest.raises(ParseError):
        parse_sym_term("!k")


# --- typing transport and substitution ------------------------------------------------


@given(typed_lmm(16))
def test_typing_transport_e(sample):
    seq, u = sample
    assert B.check_typing_e(u, seq)


@given(typed_sym(16))
def test_typing_transport_f(sample):
    ctx, m, _ = sample
    assert B.check_typing_f(m, ctx)


def test_substitution_lemmas_examples():
    seq = parse_lmm_sequent("x:a, y:a | k:a")
    t = parse_lmm_term("mu c:a. < y | c >")
    rep = B.check_substitution_lemmas(
        [
            ("e_l", (L.LVar("x"), seq, "x", t)),
            ("e_l", (parse_lmm_term("< x | k >"), seq, "x", t)),
            ("e_r", (parse_lmm_term("< x | k >"), seq, "k", parse_lmm_term("mut z:a. < y | k >"))),
        ]
    )
    assert rep.ok and rep.total == 3
    ctx = parse_sym_context("x:a, p:~a, q:a")
    assert B.check_subst_f(parse_sym_term("(p * x)"), ctx, "x", parse_sym_term("q"))


def test_substitution_lemmas_random():
    res = run_suite("subst_lemmas", 60, seed=11)
    assert res.ok, res.failures[:3]


# --- simulation ----------------------------------------------------------------------


def test_sim_e_mu_is_one_beta_bot():
    seq = parse_lmm_sequent("y:a | k:a")
    v = parse_lmm_term("< mu c:a. < y | c > | k >")
    verdict = B.check_sim_e(v, root(LmmRule.MU), seq)
    assert verdict.ok and verdict.rules == ["beta_bot"]


def test_sim_e_s_l_is_one_eta_bot():
    seq = parse_lmm_sequent("y:a | k:a")
    v = parse_lmm_term("mu c:a. < y | c >")
    verdict = B.check_sim_e(v, root(LmmRule.S_L), seq)
    assert verdict.ok and verdict.rules == ["eta_bot"]


def test_sim_e_cl2_is_an_equivalence():
    seq = parse_lmm_sequent("y:a | k:a")
    v = parse_lmm_term("< bar(k) | tilde(y) >")
    verdict = B.check_sim_e(v, root(LmmRule.CL2), seq)
    assert verdict.ok and verdict.equiv is True and verdict.to_json_obj()["witness"] == {"equiv": True}


@given(typed_lmm(14))
def test_sim_e_random(sample):
    seq, u = sample
    for occ in find_redexes_lmm(u):
        v = B.check_sim_e(u, occ, seq)
        assert v.ok, v.detail
        assert (v.equiv is not None) == (occ.rule.value.startswith("cl"))
        if v.equiv is None:
            assert v.length >= 1


def test_sim_f_beta_chain():
    ctx = parse_sym_context("y:~a, z:a")
    m = parse_sym_term("(\\x:a. (y * x) * z)")
    occ = RedexOccurrence((), Rule.BETA)
    v = B.check_sim_f(m, occ, ctx)
    assert v.ok and v.rules == EXPECTED_F_CHAINS["beta"]


def test_sim_f_beta_bot_chain():
    ctx = parse_sym_context("y:~a, z:a")
    m = parse_sym_term("(y * \\x:~a. (x * z))")
    v = B.check_sim_f(m, RedexOccurrence((), Rule.BETA_BOT), ctx)
    assert v.ok and v.rules == EXPECTED_F_CHAINS["beta_bot"]


PI_CTX = parse_sym_context("p1:a, p2:b, q:~a")


def test_sim_f_pi_chain():
    m = S.Star(S.Pair(S.Var("p1"), S.Var("p2")), S.Inj(1, S.NegAtom("b"), S.Var("q")))
    v = B.check_sim_f(m, RedexOccurrence((), Rule.PI), PI_CTX)
    assert v.ok and v.rules == EXPECTED_F_CHAINS["pi"]
    assert v.trace[-1][2] == L.format_term(L.Cut(L.LVar("q"), L.TildeT(L.LVar("p1"))))


def test_sim_f_pi_bot_counterexample():
    # The f-image of (ι1 Q ⋆ ⟨P1, P2⟩) reduces to (P1 ⋆ Q)ᶠ, not to (Q ⋆ P1)ᶠ:
    # the simulation holds only up to ~ for the dual rule.
    m = S.Star(S.Inj(1, S.NegAtom("b"), S.Var("q")), S.Pair(S.Var("p1"), S.Var("p2")))
    n = reduce_at(m, RedexOccurrence((), Rule.PI_BOT))
    assert n == S.Star(S.Var("q"), S.Var("p1"))
    v = B.check_sim_f(m, RedexOccurrence((), Rule.PI_BOT), PI_CTX)
    assert not v.ok
    swapped = B.term_f(S.Star(S.Var("p1"), S.Var("q")), PI_CTX)
    found = B._bfs(B.term_f(m, PI_CTX), swapped.key, one_step_reducts_lmm, lambda t: t.key, 64)
    assert found


# --- round trips ---------------------------------------------------------------------


def test_roundtrip_fe_examples():
    tr = B.roundtrip_fe(S.Var("x"), {"x": sa})
    assert tr is not None and len(tr) == 0
    ctx = parse_sym_context("p:a, q:b")
    tr = B.roundtrip_fe(parse_sym_term("<p, q>"), ctx)
    assert tr is not None and tr.end == parse_sym_term("<p, q>")
    inj = S.Inj(1, sb, S.Var("p"))
    tr = B.roundtrip_fe(inj, ctx)
    assert tr is not None and tr.end == inj
    assert [r.value for r in tr.rules[:3]] == ["beta_bot", "eta_bot", "beta_bot"]


@given(typed_sym(16))
def test_roundtrip_fe_random(sample):
    ctx, m, _ = sample
    tr = B.roundtrip_fe(m, ctx)
    assert tr is not None and tr.end == m and len(tr) <= 3 * S.cxty_term(m) + 10


def test_roundtrip_ef_examples():
    seq = parse_lmm_sequent("y:a | k:a")
    tr = B.roundtrip_ef(L.LVar("y"), seq)
    assert tr is not None and len(tr) == 0
    tr = B.roundtrip_ef(parse_lmm_term("mut x:a. < x | k >"), seq)
    assert tr is not None and len(tr) == 0
    lam = parse_lmm_term("\\x:a. x")
    tr = B.roundtrip_ef(lam, seq)
    assert tr is not None and tr.end == B.bigT(lam, seq)
    assert [r.value for r in tr.rules[:2]] == ["cl1r", "mutilde"]


@given(typed_lmm(14))
def test_roundtrip_ef_random(sample):
    seq, u = sample
    tr = B.roundtrip_ef(u, seq)
    assert tr is not None and tr.end == B.bigT(u, seq)
