"""Translations between λ̄μμ̃* and λSym, the T function, and executable
checks for the cross-calculus results.

* ``term_e`` / ``type_e`` / ``context_e``: λ̄μμ̃* to λSym.  An r-variable
  ``a : A`` becomes the λSym variable ``!a : ~A``; names starting with ``!``
  are rejected by the parsers, so they never clash with user names.
* ``term_f`` / ``type_f`` / ``context_f``: λSym to λ̄μμ̃*.  ⊥-typed terms
  become c-terms.
* ``bigT``: the image that ``term_f(term_e(u))`` reduces to.

Every check returns a :class:`SimVerdict`.  Checks try the reduction chain
suggested by the corresponding proof first and fall back to a breadth-first
search bounded by a number of visited terms.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from . import lmm_core as L
from . import sym_core as S
from ._lexer import RESERVED_PREFIX
from ._names import fresh
from .lmm_reduction import (
    CL_RULES,
    LmmRedexOccurrence,
    LmmRule,
    LmmTrace,
    one_step_reducts_lmm,
    reduce_at_lmm,
)
from .sym_reduction import (
    ALL_RULES,
    RedexOccurrence,
    ReductionTrace,
    Rule,
    StaleRedexError,
    find_redexes,
    reduce_at,
)

DEFAULT_SEARCH_BUDGET = 64


def rname(alpha: str) -> str:
    """λSym name standing for the negation of the r-variable `alpha`."""
    return RESERVED_PREFIX + alpha


# ---------------------------------------------------------------------------
# e: λ̄μμ̃* -> λSym


def type_e(a: L.LmmType) -> S.SymType:
    a = L.canonicalize_type(a)
    if isinstance(a, L.Atom):
        return S.Atom(a.name)
    if isinstance(a, L.Neg):
        return S.neg_type(type_e(a.inner))
    return S.Or(S.neg_type(type_e(a.dom)), type_e(a.cod))


def context_e(seq: L.LmmSequent) -> dict[str, S.SymType]:
    """Γᵉ together with ``!a : ~(Aᵉ)`` for each ``a : A`` in Δ."""
    out: dict[str, S.SymType] = {}
    for x, a in seq.gamma.items():
        out[x] = type_e(a)
    for alpha, a in seq.delta.items():
        name = rname(alpha)
        if name in out:
            raise ValueError(f"name collision on {name}")
        out[name] = S.neg_type(type_e(a))
    return out


def proj(i: int, y: str, ytype: S.SymType) -> S.SymTerm:
    """``π_i(y) = \\z. (y * σ_i(z))`` for ``y : A1 /\\ A2``; it has type ``A_i``."""
    if not isinstance(ytype, S.And):
        raise S.SymTypeError(f"projection from a non-conjunction {S.format_type(ytype)}")
    a_i = ytype.left if i == 1 else ytype.right
    other = ytype.right if i == 1 else ytype.left
    z = "z" if y != "z" else "z0"
    return S.Lam(z, S.neg_type(a_i), S.Star(S.Var(y), S.Inj(i, S.neg_type(other), S.Var(z))))


def term_e(u: L.LmmTerm, seq: L.LmmSequent | None = None) -> S.SymTerm:
    """λSym image of a well-typed λ̄μμ̃* term (types are needed for λ-abstractions)."""
    return _e(u, seq or L.LmmSequent())


def _e(u: L.LmmTerm, seq: L.LmmSequent) -> S.SymTerm:
    if isinstance(u, L.LVar):
        return S.Var(u.x)
    if isinstance(u, L.RVar):
        return S.Var(rname(u.alpha))
    if isinstance(u, L.Cut):
        return S.Star(_e(u.e, seq), _e(u.t, seq))
    if isinstance(u, (L.BarE, L.TildeT)):
        return _e(u.children[0], seq)
    if isinstance(u, L.Cons):
        return S.Pair(_e(u.head, seq), _e(u.tail, seq))
    if isinstance(u, L.MuTilde):
        return S.Lam(u.x, type_e(u.ann), _e(u.body, seq.with_l(u.x, u.ann)))
    if isinstance(u, L.Mu):
        inner = seq.with_r(u.alpha, u.ann)
        return S.Lam(rname(u.alpha), S.neg_type(type_e(u.ann)), _e(u.body, inner))
    if isinstance(u, L.Lam):
        inner = seq.with_l(u.x, u.ann)
        b = L.typecheck_lmm(inner, u.body)
        ae, be = type_e(u.ann), type_e(b)
        body = _e(u.body, inner)
        ytype = S.And(ae, S.neg_type(be))
        y = fresh("y", body.fv | {u.x})
        return S.Lam(
            y,
            ytype,
            S.Star(S.Lam(u.x, ae, S.Star(proj(2, y, ytype), body)), proj(1, y, ytype)),
        )
    raise TypeError(f"not a λ̄μμ̃* term: {u!r}")


# ---------------------------------------------------------------------------
# f: λSym -> λ̄μμ̃*


def type_f(a: S.SymType) -> L.LmmType:
    return L.canonicalize_type(_tf(a))


def _tf(a: S.SymType) -> L.LmmType:
    if isinstance(a, S.Atom):
        return L.Atom(a.name)
    if isinstance(a, S.NegAtom):
        return L.Neg(L.Atom(a.name))
    if isinstance(a, S.And):
        return L.Neg(L.Arrow(_tf(a.left), L.Neg(_tf(a.right))))
    if isinstance(a, S.Or):
        return L.Arrow(L.Neg(_tf(a.left)), _tf(a.right))
    raise ValueError("type_f is defined on m-types only (terms of type # become c-terms)")


def context_f(ctx: Mapping[str, S.SymType]) -> L.LmmSequent:
    return L.LmmSequent({x: type_f(a) for x, a in ctx.items()}, {})


def term_f(m: S.SymTerm, ctx: Mapping[str, S.SymType] | None = None) -> L.LmmTerm:
    """λ̄μμ̃* image of a well-typed λSym term (types are needed for left injections)."""
    return _f(m, dict(ctx or {}))


def _f(m: S.SymTerm, ctx: dict[str, S.SymType]) -> L.LmmTerm:
    if isinstance(m, S.Var):
        return L.LVar(m.x)
    if isinstance(m, S.Star):
        return L.Cut(_f(m.right, ctx), L.TildeT(_f(m.left, ctx)))
    if isinstance(m, S.Lam):
        return L.BarE(L.MuTilde(m.binder, type_f(m.ann), _f(m.body, {**ctx, m.binder: m.ann})))
    if isinstance(m, S.Pair):
        return L.BarE(L.Cons(_f(m.p1, ctx), L.TildeT(_f(m.p2, ctx))))
    if isinstance(m, S.Inj):
        a = S.type_of(ctx, m.body)
        nf = _f(m.body, ctx)
        x = fresh("x", nf.fv_l)
        if m.side == 2:
            return L.Lam(x, type_f(S.neg_type(m.other)), nf)
        b = fresh("b", nf.fv_r)
        return L.Lam(
            x, type_f(S.neg_type(a)), L.Mu(b, type_f(m.other), L.Cut(nf, L.TildeT(L.LVar(x))))
        )
    raise TypeError(f"not a λSym term: {m!r}")


# ---------------------------------------------------------------------------
# T


def p_i(i: int, y: str, ytype: S.SymType, ctx: Mapping[str, S.SymType]) -> L.LmmTerm:
    """``p_i(y)``: the f-image of the projection ``π_i(y)``."""
    return term_f(proj(i, y, ytype), {**ctx, y: ytype})


def bigT(u: L.LmmTerm, seq: L.LmmSequent | None = None) -> L.LmmTerm:
    seq = seq or L.LmmSequent()
    return _T(u, seq)


def _T(u: L.LmmTerm, seq: L.LmmSequent) -> L.LmmTerm:
    if isinstance(u, L.LVar):
        return u
    if isinstance(u, L.RVar):
        return L.LVar(rname(u.alpha))
    if isinstance(u, (L.BarE, L.TildeT)):
        return _T(u.children[0], seq)
    if isinstance(u, L.Cut):
        return L.Cut(_T(u.t, seq), L.TildeT(_T(u.e, seq)))
    if isinstance(u, L.Cons):
        return L.BarE(L.Cons(_T(u.head, seq), L.TildeT(_T(u.tail, seq))))
    if isinstance(u, L.MuTilde):
        return L.BarE(L.MuTilde(u.x, u.ann, _T(u.body, seq.with_l(u.x, u.ann))))
    if isinstance(u, L.Mu):
        inner = seq.with_r(u.alpha, u.ann)
        return L.BarE(L.MuTilde(rname(u.alpha), L.Neg(u.ann), _T(u.body, inner)))
    if isinstance(u, L.Lam):
        inner = seq.with_l(u.x, u.ann)
        b = L.typecheck_lmm(inner, u.body)
        ae, be = type_e(u.ann), type_e(b)
        tu = _T(u.body, inner)
        y = fresh("y", _e_fv(u.body) | {u.x})
        ytype = S.And(ae, S.neg_type(be))
        ctx = context_e(seq)
        body = L.Cut(L.subst_l(tu, u.x, p_i(1, y, ytype, ctx)), L.TildeT(p_i(2, y, ytype, ctx)))
        return L.BarE(L.MuTilde(y, L.Neg(L.Arrow(u.ann, b)), body))
    raise TypeError(f"not a λ̄μμ̃* term: {u!r}")


def _e_fv(u: L.LmmTerm) -> frozenset[str]:
    return u.fv_l | {rname(a) for a in u.fv_r}


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class SimVerdict:
    theorem: str
    source_rule: str
    status: str  # "pass" or "fail"
    trace: list[tuple[str, tuple[int, ...], str]] = field(default_factory=list)
    equiv: bool | None = None
    method: str = ""  # "hint", "search", "equiv"
    sample: str = ""
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    @property
    def length(self) -> int:
        return len(self.trace)

    @property
    def rules(self) -> list[str]:
        return [r for r, _, _ in self.trace]

    def to_json_obj(self) -> dict[str, Any]:
        witness: Any
        if self.equiv is not None:
            witness = {"equiv": self.equiv}
        else:
            witness = [{"rule": r, "path": list(p), "term": t} for r, p, t in self.trace]
        out = {"theorem": self.theorem, "sample": self.sample, "status": self.status, "witness": witness}
        if self.detail:
            out["detail"] = self.detail
        return out


def _sym_steps(trace: Iterable[tuple[RedexOccurrence, S.SymTerm]]) -> list:
    return [(o.rule.value, o.path, S.format_term(t)) for o, t in trace]


def _lmm_steps(trace: Iterable[tuple[LmmRedexOccurrence, L.LmmTerm]]) -> list:
    return [(o.rule.value, o.path, L.format_term(t)) for o, t in trace]


def _bfs(
    start: Any,
    goal: Hashable,
    succ: Callable[[Any], list[tuple[Any, Any]]],
    key: Callable[[Any], Hashable],
    budget: int,
) -> list[tuple[Any, Any]] | None:
    """Shortest nonempty path from `start` to a term with key `goal`,
    expanding at most `budget` terms."""
    start_key = key(start)
    parent: dict[Hashable, tuple[Hashable, tuple[Any, Any]]] = {}
    queue = deque([start])
    visited = 0
    while queue and visited < budget:
        cur = queue.popleft()
        visited += 1
        cur_key = key(cur)
        for occ, nxt in succ(cur):
            k = key(nxt)
            if k in parent:
                continue
            parent[k] = (cur_key, (occ, nxt))
            if k == goal:
                path = [parent[k][1]]
                k = cur_key
                while k != start_key:
                    k, step = parent[k]
                    path.append(step)
                return path[::-1]
            if k != start_key:
                queue.append(nxt)
    return None


def _replay_sym(start: S.SymTerm, occs: Sequence[RedexOccurrence]) -> list | None:
    steps, cur = [], start
    for occ in occs:
        try:
            cur = reduce_at(cur, occ)
        except StaleRedexError:
            return None
        steps.append((occ, cur))
    return steps


def _replay_lmm(start: L.LmmTerm, occs: Sequence[LmmRedexOccurrence]) -> list | None:
    steps, cur = [], start
    for occ in occs:
        try:
            cur = reduce_at_lmm(cur, occ)
        except StaleRedexError:
            return None
        steps.append((occ, cur))
    return steps


def _sym_succ(ctx: Mapping[str, S.SymType]) -> Callable[[S.SymTerm], list]:
    def succ(t: S.SymTerm) -> list:
        d = S.typecheck_sym(ctx, t)[1]
        return [(o, reduce_at(t, o)) for o in find_redexes(t, d, ALL_RULES)]

    return succ


# ---------------------------------------------------------------------------
# simulation: λ̄μμ̃* step -> λSym reduction


def e_path(u: L.LmmTerm, path: Sequence[int]) -> tuple[int, ...]:
    """Position in ``term_e(u)`` of the image of the subterm of `u` at `path`."""
    out: tuple[int, ...] = ()
    for i in path:
        if isinstance(u, L.Cut):
            out += (1,) if i == 0 else (0,)
        elif isinstance(u, L.Lam):
            out += (0, 0, 0, 1)
        elif isinstance(u, (L.Mu, L.MuTilde)):
            out += (0,)
        elif isinstance(u, L.Cons):
            out += (i,)
        u = u.children[i]
    return out


def _e_hint(rule: LmmRule, p: tuple[int, ...]) -> list[RedexOccurrence]:
    if rule is LmmRule.MU:
        return [RedexOccurrence(p, Rule.BETA_BOT)]
    if rule is LmmRule.MUTILDE:
        return [RedexOccurrence(p, Rule.BETA)]
    if rule is LmmRule.S_L:
        return [RedexOccurrence(p, Rule.ETA_BOT)]
    if rule is LmmRule.S_R:
        return [RedexOccurrence(p, Rule.ETA)]
    if rule is LmmRule.LAMBDA:
        return [
            RedexOccurrence(p, Rule.BETA_BOT),
            RedexOccurrence(p + (1, 0), Rule.PI),
            RedexOccurrence(p + (1,), Rule.ETA),
            RedexOccurrence(p + (0, 0, 0, 0), Rule.PI),
            RedexOccurrence(p + (0, 0, 0), Rule.ETA),
        ]
    return []


def check_sim_e(
    v: L.LmmTerm,
    occ: LmmRedexOccurrence,
    seq: L.LmmSequent | None = None,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> SimVerdict:
    """A logical step ``v -> w`` gives ``vᵉ ->+ wᵉ``; a complementer step gives ``vᵉ ~ wᵉ``."""
    seq = seq or L.LmmSequent()
    w = reduce_at_lmm(v, occ)
    ve, we = term_e(v, seq), term_e(w, seq)
    verdict = SimVerdict("sim_e", occ.rule.value, "fail", sample=L.format_term(v))
    if occ.rule in CL_RULES:
        verdict.equiv = S.sym_equiv(ve, we)
        verdict.method = "equiv"
        verdict.status = "pass" if verdict.equiv else "fail"
        return verdict
    hint = _replay_sym(ve, _e_hint(occ.rule, e_path(v, occ.path)))
    if hint and hint[-1][1] == we:
        verdict.trace, verdict.method, verdict.status = _sym_steps(hint), "hint", "pass"
        return verdict
    found = _bfs(ve, we.key, _sym_succ(context_e(seq)), lambda t: t.key, search_budget)
    if found:
        verdict.trace, verdict.method, verdict.status = _sym_steps(found), "search", "pass"
    else:
        verdict.method = "search"
        verdict.detail = f"no reduction from {S.format_term(ve)} to {S.format_term(we)} within {search_budget} terms"
    return verdict


# ---------------------------------------------------------------------------
# simulation: λSym step -> λ̄μμ̃* reduction


def f_path(m: S.SymTerm, path: Sequence[int]) -> tuple[int, ...]:
    """Position in ``term_f(m)`` of the image of the subterm of `m` at `path`."""
    out: tuple[int, ...] = ()
    for i in path:
        if isinstance(m, S.Star):
            out += (1, 0) if i == 0 else (0,)
        elif isinstance(m, S.Lam):
            out += (0, 0)
        elif isinstance(m, S.Pair):
            out += (0, 0) if i == 0 else (0, 1, 0)
        elif isinstance(m, S.Inj):
            out += (0, 0, 0) if m.side == 1 else (0,)
        m = m.children[i]
    return out


def _f_hint(redex: S.SymTerm, rule: Rule, q: tuple[int, ...]) -> list[LmmRedexOccurrence]:
    R = LmmRule
    if rule is Rule.BETA:
        return [LmmRedexOccurrence(q + (1,), R.CL1R), LmmRedexOccurrence(q, R.MUTILDE)]
    if rule is Rule.BETA_BOT:
        return [LmmRedexOccurrence(q, R.CL2), LmmRedexOccurrence(q, R.MUTILDE)]
    if rule is Rule.ETA:
        return [LmmRedexOccurrence(q + (0,), R.S_R), LmmRedexOccurrence(q, R.CL1L)]
    if rule in (Rule.PI, Rule.PI_BOT):
        inj = redex.right if rule is Rule.PI else redex.left
        first = LmmRedexOccurrence(q + (1,), R.CL1R) if rule is Rule.PI else LmmRedexOccurrence(q, R.CL2)
        chain = [first, LmmRedexOccurrence(q, R.LAMBDA), LmmRedexOccurrence(q, R.MUTILDE)]
        if inj.side == 1:
            chain.append(LmmRedexOccurrence(q, R.MU))
        return chain
    return []


def check_sim_f(
    m: S.SymTerm,
    occ: RedexOccurrence,
    ctx: Mapping[str, S.SymType] | None = None,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> SimVerdict:
    """A λSym step ``m -> n`` should give ``mᶠ ->+ nᶠ``."""
    ctx = dict(ctx or {})
    n = reduce_at(m, occ)
    mf, nf = term_f(m, ctx), term_f(n, ctx)
    verdict = SimVerdict("sim_f", occ.rule.value, "fail", sample=S.format_term(m))
    redex = S.subterm(m, occ.path)
    hint = _replay_lmm(mf, _f_hint(redex, occ.rule, f_path(m, occ.path)))
    if hint and hint[-1][1] == nf:
        verdict.trace, verdict.method, verdict.status = _lmm_steps(hint), "hint", "pass"
        return verdict
    found = _bfs(mf, nf.key, one_step_reducts_lmm, lambda t: t.key, search_budget)
    if found:
        verdict.trace, verdict.method, verdict.status = _lmm_steps(found), "search", "pass"
    else:
        verdict.method = "search"
        verdict.detail = f"no reduction from {L.format_term(mf)} to {L.format_term(nf)} within {search_budget} terms"
    return verdict


# ---------------------------------------------------------------------------
# round trips


def _fe_hint(m: S.SymTerm, base: tuple[int, ...] = ()) -> list[RedexOccurrence]:
    """Occurrences taking ``term_e(term_f(m))`` back to `m`, innermost-last."""
    if isinstance(m, S.Var):
        return []
    if isinstance(m, S.Inj):
        if m.side == 1:
            head = [
                RedexOccurrence(base + (0, 0, 0), Rule.BETA_BOT),
                RedexOccurrence(base + (0, 0), Rule.ETA_BOT),
                RedexOccurrence(base + (0,), Rule.BETA_BOT),
                RedexOccurrence(base, Rule.ETA_BOT),
            ]
        else:
            head = [
                RedexOccurrence(base + (0, 0, 0), Rule.BETA),
                RedexOccurrence(base + (0,), Rule.BETA),
                RedexOccurrence(base, Rule.ETA_BOT),
            ]
        return head + _fe_hint(m.body, base + (0,))
    out: list[RedexOccurrence] = []
    for i, c in enumerate(m.children):
        out += _fe_hint(c, base + (i,))
    return out


def roundtrip_fe(
    m: S.SymTerm, ctx: Mapping[str, S.SymType] | None = None, budget: int | None = None
) -> ReductionTrace | None:
    """A reduction ``term_e(term_f(m)) ->* m`` of at most `budget` steps
    (default ``3*cxty(m) + 10``), or ``None``."""
    ctx = dict(ctx or {})
    budget = 3 * S.cxty_term(m) + 10 if budget is None else budget
    start = term_e(term_f(m, ctx), context_f(ctx))
    steps = _replay_sym(start, _fe_hint(m))
    if steps is not None and (steps[-1][1] if steps else start) == m and len(steps) <= budget:
        return ReductionTrace(start, steps, ctx=ctx)
    if start == m:
        return ReductionTrace(start, [], ctx=ctx)
    found = _bfs(start, m.key, _sym_succ(ctx), lambda t: t.key, DEFAULT_SEARCH_BUDGET * 16)
    if found is not None and len(found) <= budget:
        return ReductionTrace(start, found, ctx=ctx)
    return None


def _ef_hint(u: L.LmmTerm, seq: L.LmmSequent, base: tuple[int, ...] = ()) -> list[LmmRedexOccurrence]:
    if isinstance(u, (L.LVar, L.RVar)):
        return []
    if isinstance(u, (L.BarE, L.TildeT)):
        return _ef_hint(u.children[0], seq, base)
    if isinstance(u, L.Cut):
        return _ef_hint(u.t, seq, base + (0,)) + _ef_hint(u.e, seq, base + (1, 0))
    if isinstance(u, L.Cons):
        return _ef_hint(u.head, seq, base + (0, 0)) + _ef_hint(u.tail, seq, base + (0, 1, 0))
    if isinstance(u, L.MuTilde):
        return _ef_hint(u.body, seq.with_l(u.x, u.ann), base + (0, 0))
    if isinstance(u, L.Mu):
        return _ef_hint(u.body, seq.with_r(u.alpha, u.ann), base + (0, 0))
    if isinstance(u, L.Lam):
        head = [
            LmmRedexOccurrence(base + (0, 0, 1), LmmRule.CL1R),
            LmmRedexOccurrence(base + (0, 0), LmmRule.MUTILDE),
        ]
        return head + _ef_hint(u.body, seq.with_l(u.x, u.ann), base + (0, 0, 0))
    raise TypeError(f"not a λ̄μμ̃* term: {u!r}")


def roundtrip_ef(
    u: L.LmmTerm, seq: L.LmmSequent | None = None, budget: int = 10**4
) -> LmmTrace | None:
    """A reduction ``term_f(term_e(u)) ->* bigT(u)``, or ``None``."""
    seq = seq or L.LmmSequent()
    start = term_f(term_e(u, seq), context_e(seq))
    target = bigT(u, seq)
    steps = _replay_lmm(start, _ef_hint(u, seq))
    if steps is not None and (steps[-1][1] if steps else start) == target and len(steps) <= budget:
        return LmmTrace(start, steps, seq=seq)
    if start == target:
        return LmmTrace(start, [], seq=seq)
    found = _bfs(start, target.key, one_step_reducts_lmm, lambda t: t.key, DEFAULT_SEARCH_BUDGET * 16)
    if found is not None and len(found) <= budget:
        return LmmTrace(start, found, seq=seq)
    return None


# ---------------------------------------------------------------------------
# typing transport and substitution lemmas


def check_typing_e(u: L.LmmTerm, seq: L.LmmSequent) -> bool:
    """Γ ▷ t:A | Δ gives Γᵉ,(Δᵉ)⊥ ⊢ tᵉ : Aᵉ; r-terms get ``~(Aᵉ)``, c-terms ``#``."""
    a = L.typecheck_lmm(seq, u)
    got = S.type_of(context_e(seq), term_e(u, seq))
    if u.sort == L.C:
        return isinstance(got, S.Bottom)
    want = type_e(a) if u.sort == L.L else S.neg_type(type_e(a))
    return got == want


def check_typing_f(m: S.SymTerm, ctx: Mapping[str, S.SymType]) -> bool:
    """Γ ⊢ M:A gives Γᶠ ▷ Mᶠ : Aᶠ; for ``A = #`` the image is a well-typed c-term."""
    a = S.type_of(ctx, m)
    mf = term_f(m, ctx)
    got = L.typecheck_lmm(context_f(ctx), mf)
    if isinstance(a, S.Bottom):
        return mf.sort == L.C and got is None
    return mf.sort == L.L and got == type_f(a)


def check_subst_e_l(u: L.LmmTerm, seq: L.LmmSequent, x: str, t: L.LmmTerm) -> bool:
    """``(u[x:=t])ᵉ = uᵉ[x:=tᵉ]``; `u` is typed under `seq` (which declares `x`)."""
    outer = L.LmmSequent({k: v for k, v in seq.gamma.items() if k != x}, seq.delta)
    lhs = term_e(L.subst_l(u, x, t), outer)
    rhs = S.substitute(term_e(u, seq), x, term_e(t, outer))
    return lhs == rhs


def check_subst_e_r(u: L.LmmTerm, seq: L.LmmSequent, alpha: str, e: L.LmmTerm) -> bool:
    """``(u[a:=e])ᵉ = uᵉ[!a:=eᵉ]``."""
    outer = L.LmmSequent(seq.gamma, {k: v for k, v in seq.delta.items() if k != alpha})
    lhs = term_e(L.subst_r(u, alpha, e), outer)
    rhs = S.substitute(term_e(u, seq), rname(alpha), term_e(e, outer))
    return lhs == rhs


def check_subst_f(m: S.SymTerm, ctx: Mapping[str, S.SymType], x: str, n: S.SymTerm) -> bool:
    """``(M[x:=N])ᶠ = Mᶠ[x:=Nᶠ]``."""
    outer = {k: v for k, v in ctx.items() if k != x}
    lhs = term_f(S.substitute(m, x, n), outer)
    rhs = L.subst_l(term_f(m, ctx), x, term_f(n, outer))
    return lhs == rhs


@dataclass
class SubstReport:
    total: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_substitution_lemmas(samples: Iterable[tuple[str, tuple]]) -> SubstReport:
    """Run a batch of substitution checks.

    Each sample is ``(kind, args)`` with kind ``"e_l"``, ``"e_r"`` or ``"f"``
    and args as for :func:`check_subst_e_l`, :func:`check_subst_e_r` or
    :func:`check_subst_f`.
    """
    fns = {"e_l": check_subst_e_l, "e_r": check_subst_e_r, "f": check_subst_f}
    report = SubstReport()
    for kind, args in samples:
        report.total += 1
        if not fns[kind](*args):
            report.failures.append(f"{kind}: {args[0]}")
    return report
