from __future__ import annotations

import json

import pytest
from hypothesis import given

from symlog.postpone import postpone_e, postpone_e_detailed, postpone_triv
from symlog.sym_core import (
    Bottom,
    Atom,
    Inj,
    Lam,
    NegAtom,
    Pair,
    Star,
    Var,
    cxty_term,
    neg_type,
    subterm,
    sym_equiv,
    type_of,
    typecheck_sym,
)
from symlog.sym_reduction import (
    BETAPI,
    BETAPIETA,
    E_RULES,
    STRATEGIES,
    RedexOccurrence,
    ReductionTrace,
    Rule,
    StaleRedexError,
    UsageError,
    ZoomInSequence,
    find_redexes,
    is_normal,
    longest_reduction_betapi,
    normalize,
    reduce_at,
    validate_zoomin,
)
from symlog.sym_syntax import parse_sym_context, parse_sym_term

from .strategies import typed_sym

a, b = Atom("a"), Atom("b")
na = NegAtom("a")
p, q, y, z = Var("p"), Var("q"), Var("y"), Var("z")

BETA_EX = Star(Lam("x", a, Star(y, Var("x"))), z)  # y:~a, z:a
OMEGA = parse_sym_term("(\\x:a. (x * x) * \\x:a. (x * x))")


def occ_of(m, rule, path=()):
    return next(o for o in find_redexes(m, rules=[rule]) if o.path == path)


# --- redexes and contraction -------------------------------------------------


def test_beta_redex_is_found_and_linear():
    occs = find_redexes(BETA_EX, rules=BETAPI)
    assert occs == [RedexOccurrence((), Rule.BETA, linear=True)]
    assert reduce_at(BETA_EX, occs[0]) == Star(y, z)


def test_pi_redex():
    m = Star(Pair(Var("p1"), Var("p2")), Inj(1, b, q))
    assert [(o.path, o.rule) for o in find_redexes(m)] == [((), Rule.PI)]
    m2 = Star(Pair(Var("p1"), Var("p2")), Inj(2, a, q))
    assert reduce_at(m2, occ_of(m2, Rule.PI)) == Star(Var("p2"), q)


def test_pi_bot_and_beta_bot():
    m = Star(Inj(1, b, q), Pair(Var("p1"), Var("p2")))
    assert reduce_at(m, occ_of(m, Rule.PI_BOT)) == Star(q, Var("p1"))
    m = Star(q, Lam("x", a, Star(Var("x"), p)))
    assert reduce_at(m, occ_of(m, Rule.BETA_BOT)) == Star(q, p)


def test_eta_and_side_condition():
    m = Lam("x", a, Star(y, Var("x")))
    assert reduce_at(m, occ_of(m, Rule.ETA)) == y
    assert not find_redexes(Lam("x", a, Star(Var("x"), Var("x"))), rules=E_RULES)
    m = Lam("x", a, Star(Var("x"), y))
    assert reduce_at(m, occ_of(m, Rule.ETA_BOT)) == y


def test_triv_needs_typing():
    with pytest.raises(UsageError):
        find_redexes(BETA_EX, rules=[Rule.TRIV])


def test_triv_occurrence():
    ctx = parse_sym_context("y:a, z:~c, w:c")
    m = parse_sym_term("(y * \\x:a. (z * w))")
    d = typecheck_sym(ctx, m)[1]
    triv = [o for o in find_redexes(m, d) if o.rule is Rule.TRIV]
    assert [(o.path, o.inner) for o in triv] == [((), (1, 0))]
    assert reduce_at(m, triv[0]) == parse_sym_term("(z * w)")


def test_triv_respects_binders():
    ctx = parse_sym_context("y:a, z:~a")
    m = parse_sym_term("(y * \\x:a. (z * x))")
    d = typecheck_sym(ctx, m)[1]
    assert not [o for o in find_redexes(m, d) if o.rule is Rule.TRIV]


def test_stale_occurrence():
    with pytest.raises(StaleRedexError):
        reduce_at(Star(y, z), RedexOccurrence((), Rule.BETA))
    with pytest.raises(StaleRedexError):
        reduce_at(Star(y, z), RedexOccurrence((0, 3), Rule.BETA))


def test_leftmost_outermost_order():
    inner = BETA_EX
    m = Pair(inner, Lam("x", a, Star(inner, Var("x"))))
    paths = [o.path for o in find_redexes(m)]
    assert paths == sorted(paths)


# --- normalization -------------------------------------------------------------


def test_normalize_examples():
    assert len(normalize(Var("x"))) == 0
    m = Star(Pair(Var("p1"), Var("p2")), Inj(1, b, q))
    tr = normalize(m)
    assert len(tr) == 1 and tr.status == "normal" and is_normal(tr.end)


def test_fuel_exhaustion_is_reported():
    tr = normalize(OMEGA, fuel=10)
    assert tr.status == "fuel-exhausted" and len(tr) == 10


def test_seeded_random_is_deterministic():
    ctx = parse_sym_context("y:~a, z:a")
    m = parse_sym_term("(\\x:~a. (x * z) * \\w:a. (y * w))")
    type_of(ctx, m)
    runs = [normalize(m, strategy="random", seed=7).to_json() for _ in range(2)]
    assert runs[0] == runs[1]




def test_trace_json_schema():
    tr = normalize(BETA_EX)
    obj = json.loads(tr.to_json())
    assert obj == [{"rule": "beta", "path": [], "term": "(y * z)"}]
    assert tr.check()


@given(typed_sym(20))
def test_type_preservation(sample):
    ctx, m, t = sample
    d = typecheck_sym(ctx, m)[1]
    for occ in find_redexes(m, d):
        assert type_of(ctx, reduce_at(m, occ)) == t


@given(typed_sym(20))
def test_all_strategies_normalize(sample):
    ctx, m, _ = sample
    d = typecheck_sym(ctx, m)[1]
    for s in STRATEGIES:
        assert normalize(m, d, strategy=s).status == "normal"


@given(typed_sym(20))
def test_eta_alone_decreases_complexity(sample):
    _, m, _ = sample
    tr = normalize(m, rules=E_RULES)
    assert tr.status == "normal" and len(tr) <= cxty_term(m)


@given(typed_sym(20))
def test_triv_alone_decreases_complexity(sample):
    ctx, m, _ = sample
    tr = normalize(m, typecheck_sym(ctx, m)[1], rules=[Rule.TRIV])
    assert tr.status == "normal" and len(tr) <= cxty_term(m)


@given(typed_sym(16))
def test_shape_preservation_under_betapi(sample):
    _, m, _ = sample
    for path in {o.path for o in find_redexes(m, rules=BETAPI)}:
        for occ in find_redexes(m, rules=BETAPI):
            if occ.path != path:
                continue
            n = reduce_at(m, occ)
            if isinstance(n, (Lam, Pair, Inj)):
                assert type(m) is type(n)


def _swap_all(m):
    kids = [_swap_all(k) for k in m.children]
    if isinstance(m, Star):
        return Star(kids[1], kids[0])
    return m.rebuild(kids) if kids else m


@given(typed_sym(14))
def test_sym_equiv_transport(sample):
    _, m, _ = sample
    m2 = _swap_all(m)
    ours = [reduce_at(m, o) for o in find_redexes(m, rules=BETAPIETA)]
    for o in find_redexes(m2, rules=BETAPIETA):
        n2 = reduce_at(m2, o)
        assert any(sym_equiv(n, n2) for n in ours)


# --- longest βπ reduction -----------------------------------------------------


def test_longest_examples():
    assert longest_reduction_betapi(Var("x")).eta == 0
    assert longest_reduction_betapi(BETA_EX).eta == 1
    m = Star(Lam("x", a, Star(y, Var("x"))), Lam("w", na, Star(Var("w"), z)))
    rep = longest_reduction_betapi(m)
    assert rep.status == "normalizing" and rep.eta == 2
    assert rep.witness is not None and len(rep.witness) == 2 and rep.witness.check()


def test_longest_detects_cycles_and_budget():
    assert longest_reduction_betapi(OMEGA).status == "cycle-found"
    big = parse_sym_term("<(\\x:a. (y * x) * z), <(\\x:a. (y * x) * z), (\\x:a. (y * x) * z)>>")
    assert longest_reduction_betapi(big, budget=2).status == "fuel-exhausted"


@given(typed_sym(12))
def test_longest_is_monotone(sample):
    _, m, _ = sample
    em = longest_reduction_betapi(m).eta
    for o in find_redexes(m, rules=BETAPI):
        assert em >= longest_reduction_betapi(reduce_at(m, o)).eta + 1


@given(typed_sym(12))
def test_cut_with_fresh_variable_stays_sn(sample):
    ctx, m, t = sample
    if isinstance(t, Bottom):
        return
    k = Var("fresh_k")
    cut = Star(m, k)
    type_of({**ctx, "fresh_k": neg_type(t)}, cut)
    assert longest_reduction_betapi(cut).status == "normalizing"


# --- postponement --------------------------------------------------------------


def test_postpone_e_canonical_case():
    # (\x. (U3 * x) * U2) ->η (U3 * U2) ->β ...  becomes  ->β0 ->β
    u3 = Lam("y", a, Star(p, Var("y")))
    u = Star(Lam("x", a, Star(u3, Var("x"))), q)
    tr = ReductionTrace(u)
    tr.append(occ_of(u, Rule.ETA, (0,)), Star(u3, q))
    v = tr.end
    tr.append(occ_of(v, Rule.BETA), Star(p, q))
    res = postpone_e_detailed(tr)
    out = res.trace
    assert out.check() and out.start == u and out.end == Star(p, q)
    rules = list(out.rules)
    k = next((i for i, r in enumerate(rules) if r in E_RULES), len(rules))
    assert k >= 1 and all(r in E_RULES for r in rules[k:])
    assert res.bound_ok and len(out) <= len(tr)


def test_postpone_pure_trace_unchanged():
    tr = normalize(BETA_EX)
    out = postpone_e(tr)
    assert out.steps == tr.steps


def test_postpone_shape_errors():
    u = Lam("x", a, Star(y, Var("x")))
    tr = ReductionTrace(u)
    tr.append(occ_of(u, Rule.ETA), y)
    with pytest.raises(UsageError):
        postpone_e(tr)  # no βπ step


def test_postpone_triv_example():
    ctx = parse_sym_context("p:~a, q:a, r:b")
    v = Star(Lam("x", a, Star(p, Var("x"))), q)
    u = Star(Lam("t", b, v), Var("r"))
    d = typecheck_sym(ctx, u)[1]
    triv = next(o for o in find_redexes(u, d, [Rule.TRIV]) if o.inner == (0, 0))
    tr = ReductionTrace(u, ctx=ctx)
    tr.append(triv, v)
    tr.append(occ_of(v, Rule.BETA), Star(p, q))
    out = postpone_triv(tr)
    assert out.check() and out.start == u and out.end == Star(p, q)
    assert Rule.TRIV not in out.rules[:1]


def test_postpone_triv_empty_prefix():
    ctx = parse_sym_context("y:~a, z:a")
    tr = normalize(BETA_EX, typecheck_sym(ctx, BETA_EX)[1])
    assert postpone_triv(tr).steps == tr.steps


# --- zoom-in -------------------------------------------------------------------


def test_zoomin_singleton_and_chain():
    assert validate_zoomin(ZoomInSequence((BETA_EX,)))[0]
    r2 = Star(Lam("y", a, Star(p, Var("y"))), q)
    r1 = Star(Lam("x", na, Star(Var("x"), q)), Lam("y", a, Star(p, Var("y"))))
    assert reduce_at(r1, occ_of(r1, Rule.BETA)) == r2
    structural, minimal = validate_zoomin(ZoomInSequence((r1, r2)))
    assert structural and minimal == "fail"  # typed terms are SN


def test_zoomin_structural_failure():
    structural, _ = validate_zoomin(ZoomInSequence((BETA_EX, Star(p, q))))
    assert not structural


def test_zoomin_omega_is_minimal():
    half = Lam("x", a, Star(Var("x"), Var("x")))
    structural, minimal = validate_zoomin(ZoomInSequence((OMEGA, OMEGA)))
    assert structural and minimal == "pass"
    assert subterm(OMEGA, (0,)) == half
