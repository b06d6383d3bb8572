"""Seeded generation of well-typed terms for both calculi, shrinking, and
constructors for the reduction traces used by the postponement suites.

Terms are generated by building a random typing derivation top-down, so
every output typechecks by construction (and is re-checked anyway).
"""

from __future__ import annotations

import random
from collections.abc import Callable, Mapping
from dataclasses import dataclass

from . import lmm_core as L
from . import sym_core as S
from .sym_reduction import (
    BETAPI,
    BETAPIETA,
    RedexOccurrence,
    ReductionTrace,
    Rule,
    find_redexes,
    reduce_at,
)

MAX_RETRIES = 1000


class GeneratorError(RuntimeError):
    """The generator hit its retry bound; this indicates a generator bug."""


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 20
    atom_pool: tuple[str, ...] = ("a", "b", "c")
    bottom_bias: float = 0.3
    type_depth: int = 2
    c_fraction: float = 0.4  # share of λ̄μμ̃* samples rooted at a cut
    redex_bias: float = 0.35  # chance that a λSym cut is built as a β/β⊥/π/π⊥ redex

    def __post_init__(self) -> None:
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        if not self.atom_pool:
            raise ValueError("atom_pool must be nonempty")

    def with_seed(self, seed: int) -> GenConfig:
        return GenConfig(
            seed,
            self.max_size,
            tuple(self.atom_pool),
            self.bottom_bias,
            self.type_depth,
            self.c_fraction,
            self.redex_bias,
        )


# ---------------------------------------------------------------------------
# λSym


class _SymGen:
    def __init__(self, cfg: GenConfig, rng: random.Random) -> None:
        self.cfg = cfg
        self.rng = rng
        self.ctx: dict[str, S.SymType] = {}
        self.n = 0

    def name(self, stem: str) -> str:
        self.n += 1
        while f"{stem}{self.n}" in self.ctx:
            self.n += 1
        return f"{stem}{self.n}"

    def rand_type(self, depth: int | None = None) -> S.SymType:
        depth = self.cfg.type_depth if depth is None else depth
        if depth == 0 or self.rng.random() < 0.45:
            atom = self.rng.choice(self.cfg.atom_pool)
            return S.Atom(atom) if self.rng.random() < 0.5 else S.NegAtom(atom)
        ctor = S.And if self.rng.random() < 0.5 else S.Or
        return ctor(self.rand_type(depth - 1), self.rand_type(depth - 1))

    def var(self, goal: S.SymType, scope: Mapping[str, S.SymType]) -> S.SymTerm:
        cands = [x for x, a in scope.items() if a == goal]
        cands += [x for x, a in self.ctx.items() if a == goal and x not in scope]
        if cands and self.rng.random() < 0.75:
            return S.Var(self.rng.choice(sorted(cands)))
        x = self.name("v")
        self.ctx[x] = goal
        return S.Var(x)

    def split(self, size: int) -> tuple[int, int]:
        left = self.rng.randint(1, size - 2)
        return left, size - 1 - left

    def term(
        self, goal: S.SymType, scope: dict[str, S.SymType], size: int, intro: bool = False
    ) -> S.SymTerm:
        rng = self.rng
        if isinstance(goal, S.Bottom):
            if size < 3:
                raise _DeadEnd
            a = self.rand_type()
            ls, rs = self.split(size)
            if rng.random() < self.cfg.redex_bias:
                # make one side an introduction form so the cut is a redex
                if rng.random() < 0.5:
                    return S.Star(self.term(S.neg_type(a), scope, ls, True), self.term(a, scope, rs))
                return S.Star(self.term(S.neg_type(a), scope, ls), self.term(a, scope, rs, True))
            return S.Star(self.term(S.neg_type(a), scope, ls), self.term(a, scope, rs))
        if intro:
            if size >= 4 and (rng.random() < 0.5 or not isinstance(goal, (S.And, S.Or))):
                return self._lam(goal, scope, size)
            if isinstance(goal, S.And) and size >= 3:
                return self._pair(goal, scope, size)
            if isinstance(goal, S.Or) and size >= 2:
                return self._inj(goal, scope, size)
        options = ["var"]
        if size >= 4:
            options += ["lam", "lam"]
        if isinstance(goal, S.And) and size >= 3:
            options += ["pair", "pair"]
        if isinstance(goal, S.Or) and size >= 2:
            options += ["inj", "inj"]
        if size >= 2 and len(options) > 1 and rng.random() < 0.85:
            options.remove("var")
        choice = rng.choice(options)
        if choice == "var":
            return self.var(goal, scope)
        if choice == "pair":
            return self._pair(goal, scope, size)
        if choice == "inj":
            return self._inj(goal, scope, size)
        return self._lam(goal, scope, size)

    def _pair(self, goal: S.And, scope: dict[str, S.SymType], size: int) -> S.SymTerm:
        ls, rs = self.split(size)
        return S.Pair(self.term(goal.left, scope, ls), self.term(goal.right, scope, rs))

    def _inj(self, goal: S.Or, scope: dict[str, S.SymType], size: int) -> S.SymTerm:
        side = self.rng.choice((1, 2))
        body_t, other = (goal.left, goal.right) if side == 1 else (goal.right, goal.left)
        return S.Inj(side, other, self.term(body_t, scope, size - 1))

    def _lam(self, goal: S.SymType, scope: dict[str, S.SymType], size: int) -> S.SymTerm:
        x = self.name("x")
        ann = S.neg_type(goal)
        return S.Lam(x, ann, self.term(S.BOTTOM, {**scope, x: ann}, size - 1))


class _DeadEnd(Exception):
    pass


def gen_sym(cfg: GenConfig) -> tuple[dict[str, S.SymType], S.SymTerm, S.SymType]:
    """A random ``(ctx, term, type)`` with ``ctx |- term : type`` and
    ``term.size <= cfg.max_size``."""
    rng = random.Random(cfg.seed)
    for _ in range(MAX_RETRIES):
        g = _SymGen(cfg, rng)
        size = rng.randint(1, cfg.max_size)
        bottom = size >= 3 and rng.random() < cfg.bottom_bias
        goal = S.BOTTOM if bottom else g.rand_type()
        try:
            m = g.term(goal, {}, size)
        except _DeadEnd:
            continue
        got = S.type_of(g.ctx, m)
        if got != goal or m.size > cfg.max_size:
            raise GeneratorError(f"generated {S.format_term(m)} does not have type {S.format_type(goal)}")
        return g.ctx, m, goal
    raise GeneratorError("gen_sym exceeded its retry bound")


def gen_sym_of_type(cfg: GenConfig, goal: S.SymType, ctx: Mapping[str, S.SymType] | None = None) -> tuple[dict[str, S.SymType], S.SymTerm]:
    """A random term of the given type; `ctx` seeds (and is extended into) the context."""
    rng = random.Random(cfg.seed)
    for _ in range(MAX_RETRIES):
        g = _SymGen(cfg, rng)
        g.ctx = dict(ctx or {})
        size = rng.randint(3 if isinstance(goal, S.Bottom) else 1, max(cfg.max_size, 3))
        try:
            m = g.term(goal, {}, size)
        except _DeadEnd:
            continue
        if S.type_of(g.ctx, m) != goal:
            raise GeneratorError("gen_sym_of_type produced an ill-typed term")
        return g.ctx, m
    raise GeneratorError("gen_sym_of_type exceeded its retry bound")


# ---------------------------------------------------------------------------
# λ̄μμ̃*


class _LmmGen:
    def __init__(self, cfg: GenConfig, rng: random.Random) -> None:
        self.cfg = cfg
        self.rng = rng
        self.gamma: dict[str, L.LmmType] = {}
        self.delta: dict[str, L.LmmType] = {}
        self.n = 0

    def name(self, stem: str) -> str:
        self.n += 1
        while f"{stem}{self.n}" in self.gamma or f"{stem}{self.n}" in self.delta:
            self.n += 1
        return f"{stem}{self.n}"

    def rand_type(self, depth: int | None = None) -> L.LmmType:
        depth = self.cfg.type_depth if depth is None else depth
        r = self.rng.random()
        if depth == 0 or r < 0.4:
            return L.Atom(self.rng.choice(self.cfg.atom_pool))
        if r < 0.55:
            return L.Neg(self.rand_type(depth - 1))
        return L.Arrow(self.rand_type(depth - 1), self.rand_type(depth - 1))

    def pick(self, goal: L.LmmType, scope: Mapping[str, L.LmmType], glob: dict[str, L.LmmType], stem: str) -> str:
        cands = [x for x, a in scope.items() if L.type_eq(a, goal)]
        cands += [x for x, a in glob.items() if L.type_eq(a, goal) and x not in scope]
        if cands and self.rng.random() < 0.75:
            return self.rng.choice(sorted(cands))
        x = self.name(stem)
        glob[x] = goal
        return x

    def cterm(self, gs: dict, ds: dict, size: int) -> L.LmmTerm:
        if size < 3:
            raise _DeadEnd
        a = self.rand_type()
        ls = self.rng.randint(1, size - 2)
        return L.Cut(self.lterm(a, gs, ds, ls), self.rterm(a, gs, ds, size - 1 - ls))

    def _options(self, goal: L.LmmType, size: int, arrow_min: int) -> list[str]:
        c = L.canonicalize_type(goal)
        options = ["var"]
        if isinstance(c, L.Arrow) and size >= arrow_min:
            options += ["arrow", "arrow"]
        if size >= 4:
            options.append("mu")
        if size >= 2:
            options.append("neg")
        if size >= 2 and len(options) > 1 and self.rng.random() < 0.85:
            options.remove("var")
        return options

    def lterm(self, goal: L.LmmType, gs: dict, ds: dict, size: int) -> L.LmmTerm:
        choice = self.rng.choice(self._options(goal, size, 2))
        if choice == "var":
            return L.LVar(self.pick(goal, gs, self.gamma, "x"))
        if choice == "arrow":
            c = L.canonicalize_type(goal)
            x = self.name("y")
            return L.Lam(x, c.dom, self.lterm(c.cod, {**gs, x: c.dom}, ds, size - 1))
        if choice == "mu":
            alpha = self.name("b")
            return L.Mu(alpha, goal, self.cterm(gs, {**ds, alpha: goal}, size - 1))
        return L.BarE(self.rterm(L.neg(goal), gs, ds, size - 1))

    def rterm(self, goal: L.LmmType, gs: dict, ds: dict, size: int) -> L.LmmTerm:
        choice = self.rng.choice(self._options(goal, size, 3))
        if choice == "var":
            return L.RVar(self.pick(goal, ds, self.delta, "k"))
        if choice == "arrow":
            c = L.canonicalize_type(goal)
            hs = self.rng.randint(1, size - 2)
            return L.Cons(self.lterm(c.dom, gs, ds, hs), self.rterm(c.cod, gs, ds, size - 1 - hs))
        if choice == "mu":
            x = self.name("y")
            return L.MuTilde(x, goal, self.cterm({**gs, x: goal}, ds, size - 1))
        return L.TildeT(self.lterm(L.neg(goal), gs, ds, size - 1))


def gen_lmm(cfg: GenConfig, sort: str | None = None) -> tuple[L.LmmSequent, L.LmmTerm]:
    """A random well-typed λ̄μμ̃* term with its sequent; the root sort is
    `sort` if given, else a cut with probability ``cfg.c_fraction``."""
    rng = random.Random(cfg.seed)
    for _ in range(MAX_RETRIES):
        g = _LmmGen(cfg, rng)
        size = rng.randint(1, cfg.max_size)
        s = sort
        if s is None:
            s = "c" if size >= 3 and rng.random() < cfg.c_fraction else rng.choice("lr")
        try:
            if s == "c":
                u = g.cterm({}, {}, size)
            elif s == "l":
                u = g.lterm(g.rand_type(), {}, {}, size)
            else:
                u = g.rterm(g.rand_type(), {}, {}, size)
        except _DeadEnd:
            continue
        seq = L.LmmSequent(g.gamma, g.delta)
        L.typecheck_lmm(seq, u)
        if u.size > cfg.max_size:
            raise GeneratorError("gen_lmm exceeded max_size")
        return seq, u
    raise GeneratorError("gen_lmm exceeded its retry bound")


# ---------------------------------------------------------------------------
# shrinking


def _sym_candidates(m: S.SymTerm, ctx: dict[str, S.SymType] | None) -> list[tuple[S.SymTerm, dict]]:
    out: list[tuple[S.SymTerm, dict]] = []
    types = S.typecheck_sym(ctx, m)[1].types_by_path() if ctx is not None else {}
    names = S.all_names(m) | set(ctx or ())
    for path, sub in S.positions(m):
        if isinstance(sub, S.Var):
            continue
        # replace by a fresh variable
        if ctx is None:
            v = _fresh(names, "v")
            out.append((S.replace_at(m, path, S.Var(v)), None))
        elif not isinstance(types[path], S.Bottom):
            v = _fresh(names, "v")
            out.append((S.replace_at(m, path, S.Var(v)), {**ctx, v: types[path]}))
        elif sub.size > 3:
            v1, v2 = _fresh(names, "v"), _fresh(names | {_fresh(names, "v")}, "v")
            a = S.Atom("a")
            out.append(
                (S.replace_at(m, path, S.Star(S.Var(v1), S.Var(v2))), {**ctx, v1: S.neg_type(a), v2: a})
            )
        # replace by a descendant (drops wrappers such as pairs and injections)
        for _, desc in S.positions(sub):
            if desc is not sub:
                out.append((S.replace_at(m, path, desc), ctx))
    return out


def _fresh(names: set[str], stem: str) -> str:
    i = 0
    while f"{stem}{i}" in names:
        i += 1
    return f"{stem}{i}"


def shrink(
    term: S.SymTerm,
    fails: Callable[[S.SymTerm], bool],
    ctx: Mapping[str, S.SymType] | None = None,
) -> tuple[S.SymTerm, dict[str, S.SymType] | None]:
    """Greedily shrink a λSym term on which `fails` holds.

    With `ctx`, every candidate must typecheck (subterms are replaced by
    fresh variables of the same type, which are added to the context) and the
    returned context types the result at the original type.  Without `ctx`, shrinking is
    untyped.  The result is a local minimum: no candidate shrink of it fails.
    """
    cur = term
    cur_ctx = dict(ctx) if ctx is not None else None
    goal = S.type_of(cur_ctx, cur) if cur_ctx is not None else None
    changed = True
    while changed:
        changed = False
        cands = sorted(_sym_candidates(cur, cur_ctx), key=lambda c: (c[0].size, c[0].key))
        for cand, cctx in cands:
            if cand.size >= cur.size:
                continue
            if cctx is not None:
                try:
                    if S.type_of(cctx, cand) != goal:
                        continue
                except S.SymTypeError:
                    continue
                cctx = {x: a for x, a in cctx.items() if x in cand.fv or x in (ctx or {})}
            if fails(cand):
                cur, cur_ctx, changed = cand, cctx, True
                break
    return cur, cur_ctx


# ---------------------------------------------------------------------------
# traces for the postponement suites


def _occ(term: S.SymTerm, path: tuple, rule: Rule, typing=None, inner=None) -> RedexOccurrence:
    for o in find_redexes(term, typing, [rule]):
        if o.path == path and (inner is None or o.inner == inner):
            return o
    raise GeneratorError(f"expected a {rule.value} redex at {path}")


def eta_expand(m: S.SymTerm, path: tuple, ty: S.SymType, bottom_side: bool) -> S.SymTerm:
    """Replace ``P : ty`` at `path` by ``\\x. (P * x)`` (or ``\\x. (x * P)``)."""
    p = S.subterm(m, path)
    x = _fresh(set(p.fv) | S.all_names(p), "e")
    body = S.Star(S.Var(x), p) if bottom_side else S.Star(p, S.Var(x))
    return S.replace_at(m, path, S.Lam(x, S.neg_type(ty), body))


def anti_triv(m: S.SymTerm, path: tuple, q: str, a: S.SymType, flip: bool) -> S.SymTerm:
    """Replace ``P : #`` at `path` by ``(\\z:a. P * q)`` (or ``(q * \\z:a. P)``)."""
    p = S.subterm(m, path)
    z = _fresh(set(p.fv) | S.all_names(p) | {q}, "t")
    lam = S.Lam(z, a, p)
    return S.replace_at(m, path, S.Star(S.Var(q), lam) if flip else S.Star(lam, S.Var(q)))


def _principal_steps(
    start: S.SymTerm, rules, n: int, rng: random.Random
) -> list[tuple[RedexOccurrence, S.SymTerm]]:
    steps, cur = [], start
    for _ in range(n):
        occs = find_redexes(cur, rules=rules)
        if not occs:
            break
        o = rng.choice(occs)
        cur = reduce_at(cur, o)
        steps.append((o, cur))
    return steps


def _base_with_redex(cfg: GenConfig, rng: random.Random, rules) -> tuple[dict, S.SymTerm]:
    for _ in range(MAX_RETRIES):
        ctx, m, _ = gen_sym(cfg.with_seed(rng.getrandbits(63)))
        if find_redexes(m, rules=rules):
            return ctx, m
    raise GeneratorError("no base term with a principal redex")


def gen_e_trace(cfg: GenConfig, prefix: int, principal: int = 1) -> tuple[dict, ReductionTrace]:
    """A typed trace ``U ->e^prefix V ->βπ^{<=principal} W`` (at least one βπ step).

    U is obtained from V by `prefix` random η / η⊥ expansions.
    """
    rng = random.Random(cfg.seed)
    ctx, v = _base_with_redex(cfg, rng, BETAPI)
    expansions: list[tuple[tuple, Rule]] = []
    cur = v
    for _ in range(prefix):
        d = S.typecheck_sym(ctx, cur)[1]
        spots = [(p, t.type) for p, t in d.nodes() if not isinstance(t.type, S.Bottom)]
        path, ty = rng.choice(spots)
        bottom_side = rng.random() < 0.5
        cur = eta_expand(cur, path, ty, bottom_side)
        expansions.append((path, Rule.ETA_BOT if bottom_side else Rule.ETA))
    trace = ReductionTrace(cur, [], ctx=ctx)
    for path, rule in reversed(expansions):
        o = _occ(trace.end, path, rule)
        trace.append(o, reduce_at(trace.end, o))
    assert trace.end == v
    for o, t in _principal_steps(v, BETAPI, principal, rng):
        trace.append(o, t)
    return ctx, trace


def gen_triv_trace(cfg: GenConfig, prefix: int, principal: int = 1) -> tuple[dict, ReductionTrace]:
    """A typed trace ``U ->Triv^prefix V ->βπη^{<=principal} W`` (at least one step
    after the prefix).  U is obtained from V by wrapping ⊥-typed subterms
    ``P`` as ``(\\z. P * q)`` or ``(q * \\z. P)`` with fresh context variables q."""
    rng = random.Random(cfg.seed)
    for _ in range(MAX_RETRIES):
        ctx, v = _base_with_redex(cfg, rng, BETAPIETA)
        d = S.typecheck_sym(ctx, v)[1]
        if prefix == 0 or any(isinstance(t.type, S.Bottom) for _, t in d.nodes()):
            break
    else:
        raise GeneratorError("no base term with a ⊥-typed subterm")
    ctx = dict(ctx)
    wraps: list[tuple[tuple, tuple]] = []
    cur = v
    for _ in range(prefix):
        d = S.typecheck_sym(ctx, cur)[1]
        spots = [p for p, t in d.nodes() if isinstance(t.type, S.Bottom)]
        path = rng.choice(spots)
        q = _fresh(set(ctx) | S.all_names(cur), "q")
        a = S.Atom(rng.choice(cfg.atom_pool))
        ctx[q] = a
        flip = rng.random() < 0.5
        cur = anti_triv(cur, path, q, a, flip)
        wraps.append((path, (1, 0) if flip else (0, 0)))
    trace = ReductionTrace(cur, [], ctx=ctx)
    for path, inner in reversed(wraps):
        d = S.typecheck_sym(ctx, trace.end)[1]
        o = _occ(trace.end, path, Rule.TRIV, d, inner)
        trace.append(o, reduce_at(trace.end, o))
    assert trace.end == v
    for o, t in _principal_steps(v, BETAPIETA, principal, rng):
        trace.append(o, t)
    return ctx, trace


def gen_lmm_of_type(
    cfg: GenConfig, sort: str, goal: L.LmmType, seq: L.LmmSequent | None = None
) -> tuple[L.LmmSequent, L.LmmTerm]:
    """A random l-term (``sort="l"``) or r-term (``"r"``) of type `goal`;
    `seq` seeds (and is extended into) the returned sequent."""
    rng = random.Random(cfg.seed)
    for _ in range(MAX_RETRIES):
        g = _LmmGen(cfg, rng)
        if seq is not None:
            g.gamma, g.delta = dict(seq.gamma), dict(seq.delta)
        size = rng.randint(1, cfg.max_size)
        gen = g.lterm if sort == "l" else g.rterm
        try:
            u = gen(goal, {}, {}, size)
        except _DeadEnd:
            continue
        out = L.LmmSequent(g.gamma, g.delta)
        if not L.type_eq(L.typecheck_lmm(out, u), goal):
            raise GeneratorError("gen_lmm_of_type produced an ill-typed term")
        return out, u
    raise GeneratorError("gen_lmm_of_type exceeded its retry bound")
