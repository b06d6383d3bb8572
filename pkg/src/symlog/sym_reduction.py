"""Reduction for λSym: redex discovery, contraction, normalization and the
longest-reduction oracle for the β/β⊥/π/π⊥ fragment.

Redex occurrences are addressed by paths of child indices (see
:func:`symlog.sym_core.subterm`).  Enumeration order is pre-order, i.e.
leftmost-outermost first, which makes traces reproducible.
"""

from __future__ import annotations

import json
import os
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .sym_core import (
    Bottom,
    Inj,
    Lam,
    Pair,
    Path,
    Star,
    SymContext,
    SymDerivation,
    SymTerm,
    Var,
    count_free,
    cxty_term,
    format_term,
    positions,
    replace_at,
    substitute,
    subterm,
    typecheck_sym,
)


class Rule(str, Enum):
    BETA = "beta"
    BETA_BOT = "beta_bot"
    ETA = "eta"
    ETA_BOT = "eta_bot"
    PI = "pi"
    PI_BOT = "pi_bot"
    TRIV = "triv"

    def __str__(self) -> str:
        return self.value


BETAPI = frozenset({Rule.BETA, Rule.BETA_BOT, Rule.PI, Rule.PI_BOT})
E_RULES = frozenset({Rule.ETA, Rule.ETA_BOT})
BETAPIETA = BETAPI | E_RULES
ALL_RULES = BETAPIETA | {Rule.TRIV}

_RULE_ORDER = list(Rule)

DEFAULT_FUEL = 10**5
DEFAULT_BUDGET = 10**6


class UsageError(ValueError):
    """An operation was called outside its precondition."""


class StaleRedexError(ValueError):
    """A redex occurrence does not match the term it is applied to."""


@dataclass(frozen=True)
class RedexOccurrence:
    """A rule tag plus the path of the redex.

    `linear` marks β₀/β⊥₀ steps (bound variable occurs at most once).  For
    Triv, `inner` is the path of the kept ⊥-typed subterm relative to `path`.
    """

    path: Path
    rule: Rule
    linear: bool = False
    inner: Path | None = None

    def __str__(self) -> str:
        tag = self.rule.value + ("0" if self.linear else "")
        where = "/".join(map(str, self.path)) or "."
        if self.inner is not None:
            where += " > " + "/".join(map(str, self.inner))
        return f"{tag}@{where}"

    def sort_key(self) -> tuple:
        return (self.path, _RULE_ORDER.index(self.rule), self.inner or ())

    def shifted(self, prefix: Path) -> RedexOccurrence:
        return RedexOccurrence(prefix + self.path, self.rule, self.linear, self.inner)


def rules_from_names(names: Iterable[str]) -> frozenset[Rule]:
    return frozenset(Rule(n) for n in names)


# ---------------------------------------------------------------------------
# matching and contraction


def _match(m: SymTerm, rule: Rule) -> bool:
    if rule is Rule.BETA:
        return isinstance(m, Star) and isinstance(m.left, Lam)
    if rule is Rule.BETA_BOT:
        return isinstance(m, Star) and isinstance(m.right, Lam)
    if rule is Rule.ETA:
        return (
            isinstance(m, Lam)
            and isinstance(m.body, Star)
            and m.body.right == Var(m.binder)
            and m.binder not in m.body.left.fv
        )
    if rule is Rule.ETA_BOT:
        return (
            isinstance(m, Lam)
            and isinstance(m.body, Star)
            and m.body.left == Var(m.binder)
            and m.binder not in m.body.right.fv
        )
    if rule is Rule.PI:
        return isinstance(m, Star) and isinstance(m.left, Pair) and isinstance(m.right, Inj)
    if rule is Rule.PI_BOT:
        return isinstance(m, Star) and isinstance(m.left, Inj) and isinstance(m.right, Pair)
    return False


def _linear(m: SymTerm, rule: Rule) -> bool:
    lam = m.left if rule is Rule.BETA else m.right
    return count_free(lam.body, lam.binder) <= 1


def _contract(m: SymTerm, rule: Rule) -> SymTerm:
    if rule is Rule.BETA:
        return substitute(m.left.body, m.left.binder, m.right)
    if rule is Rule.BETA_BOT:
        return substitute(m.right.body, m.right.binder, m.left)
    if rule is Rule.ETA:
        return m.body.left
    if rule is Rule.ETA_BOT:
        return m.body.right
    if rule is Rule.PI:
        pair, inj = m.left, m.right
        return Star(pair.children[inj.side - 1], inj.body)
    if rule is Rule.PI_BOT:
        inj, pair = m.left, m.right
        return Star(inj.body, pair.children[inj.side - 1])
    raise AssertionError(rule)


def _triv_inner(s: SymTerm, bottom_paths: set[Path], base: Path) -> Iterator[Path]:
    """Relative paths of ⊥-typed proper subterms of `s` not captured by a binder of the context."""

    def walk(node: SymTerm, rel: Path, bound: frozenset[str]) -> Iterator[Path]:
        if rel and base + rel in bottom_paths and not (node.fv & bound):
            yield rel
        if isinstance(node, Lam):
            bound = bound | {node.binder}
        for i, c in enumerate(node.children):
            yield from walk(c, rel + (i,), bound)

    yield from walk(s, (), frozenset())


def _triv_ok(s: SymTerm, inner: Path) -> bool:
    if not inner or not isinstance(s, Star):
        return False
    bound: set[str] = set()
    node = s
    for i in inner:
        if isinstance(node, Lam):
            bound.add(node.binder)
        kids = node.children
        if i >= len(kids):
            return False
        node = kids[i]
    return isinstance(node, Star) and not (node.fv & bound)


def find_redexes(
    m: SymTerm,
    typing: SymDerivation | None = None,
    rules: Iterable[Rule] | None = None,
) -> list[RedexOccurrence]:
    """All redex occurrences of the selected rules, leftmost-outermost first.

    With ``rules=None`` every rule is selected, except Triv when no typing is
    supplied.  Triv needs the typing derivation of `m`.
    """
    if rules is None:
        selected = ALL_RULES if typing is not None else BETAPIETA
    else:
        selected = frozenset(Rule(r) for r in rules)
    bottom_paths: set[Path] = set()
    if Rule.TRIV in selected:
        if typing is None:
            raise UsageError("the Triv rule needs a typing derivation")
        if typing.term != m:
            raise UsageError("typing derivation is for a different term")
        bottom_paths = {p for p, d in typing.nodes() if isinstance(d.type, Bottom)}
    out: list[RedexOccurrence] = []
    for path, s in positions(m):
        for rule in _RULE_ORDER:
            if rule not in selected:
                continue
            if rule is Rule.TRIV:
                if path in bottom_paths:
                    for inner in _triv_inner(s, bottom_paths, path):
                        out.append(RedexOccurrence(path, Rule.TRIV, inner=inner))
            elif _match(s, rule):
                linear = rule in (Rule.BETA, Rule.BETA_BOT) and _linear(s, rule)
                out.append(RedexOccurrence(path, rule, linear))
    return out


def reduce_at(m: SymTerm, occ: RedexOccurrence) -> SymTerm:
    """Contract the redex `occ` in `m`."""
    try:
        s = subterm(m, occ.path)
    except IndexError as exc:
        raise StaleRedexError(str(exc)) from None
    if occ.rule is Rule.TRIV:
        if occ.inner is None or not _triv_ok(s, occ.inner):
            raise StaleRedexError(f"no Triv redex {occ} in {format_term(m)}")
        return replace_at(m, occ.path, subterm(s, occ.inner))
    if not _match(s, occ.rule):
        raise StaleRedexError(f"no {occ.rule.value} redex at {occ} in {format_term(m)}")
    return replace_at(m, occ.path, _contract(s, occ.rule))


def one_step_reducts(
    m: SymTerm, typing: SymDerivation | None = None, rules: Iterable[Rule] | None = None
) -> list[tuple[RedexOccurrence, SymTerm]]:
    return [(occ, reduce_at(m, occ)) for occ in find_redexes(m, typing, rules)]


# ---------------------------------------------------------------------------
# traces


@dataclass
class ReductionTrace:
    start: SymTerm
    steps: list[tuple[RedexOccurrence, SymTerm]] = field(default_factory=list)
    status: str = "normal"  # "normal", "fuel-exhausted" or "partial"
    ctx: SymContext | None = None

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> SymTerm:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def terms(self) -> list[SymTerm]:
        return [self.start] + [t for _, t in self.steps]

    @property
    def rules(self) -> list[Rule]:
        return [occ.rule for occ, _ in self.steps]

    def append(self, occ: RedexOccurrence, result: SymTerm) -> None:
        self.steps.append((occ, result))

    def check(self) -> bool:
        """Replay every step; true iff each result is the stated contractum."""
        cur = self.start
        for occ, result in self.steps:
            try:
                nxt = reduce_at(cur, occ)
            except StaleRedexError:
                return False
            if nxt != result:
                return False
            cur = result
        return True

    def to_json_obj(self) -> list[dict]:
        return [
            {"rule": occ.rule.value, "path": list(occ.path), "term": format_term(t)}
            | ({"inner": list(occ.inner)} if occ.inner is not None else {})
            for occ, t in self.steps
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def __str__(self) -> str:
        lines = [format_term(self.start)]
        lines += [f"  -> [{occ}] {format_term(t)}" for occ, t in self.steps]
        return "\n".join(lines)


def fuel_default() -> int:
    env = os.environ.get("SYMLOG_FUEL")
    return int(env) if env else DEFAULT_FUEL


STRATEGIES = ("leftmost-outermost", "rightmost-innermost", "random")
STRATEGY_ALIASES = {"lo": "leftmost-outermost", "ri": "rightmost-innermost", "seeded-random": "random"}


def _pick(occs: Sequence[RedexOccurrence], strategy: str, rng: random.Random) -> RedexOccurrence:
    if strategy == "leftmost-outermost":
        return occs[0]
    if strategy == "rightmost-innermost":
        return occs[-1]
    return occs[rng.randrange(len(occs))]


def normalize(
    m: SymTerm,
    typing: SymDerivation | None = None,
    strategy: str = "leftmost-outermost",
    fuel: int | None = None,
    seed: int = 0,
    rules: Iterable[Rule] | None = None,
) -> ReductionTrace:
    """Reduce until no selected redex remains or `fuel` steps have been taken.

    Triv is enabled only when `typing` is given; after each step the term is
    re-typechecked under the context of `typing`.
    """
    strategy = STRATEGY_ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}")
    fuel = fuel_default() if fuel is None else fuel
    rng = random.Random(seed)
    ctx = typing.ctx if typing is not None else None
    trace = ReductionTrace(m, ctx=ctx)
    cur, d = m, typing
    for _ in range(fuel):
        occs = find_redexes(cur, d, rules)
        if not occs:
            trace.status = "normal"
            return trace
        occ = _pick(occs, strategy, rng)
        cur = reduce_at(cur, occ)
        trace.append(occ, cur)
        if d is not None:
            d = typecheck_sym(ctx, cur)[1]
    trace.status = "normal" if not find_redexes(cur, d, rules) else "fuel-exhausted"
    return trace


def is_normal(m: SymTerm, typing: SymDerivation | None = None, rules=None) -> bool:
    return not find_redexes(m, typing, rules)


# ---------------------------------------------------------------------------
# longest βπ reduction


@dataclass
class SNReport:
    status: str  # "normalizing", "fuel-exhausted" or "cycle-found"
    eta: int | None
    cxty: int
    witness: ReductionTrace | None = None
    visited: int = 0


def longest_reduction_betapi(m: SymTerm, budget: int = DEFAULT_BUDGET) -> SNReport:
    """η_βπ(m): length of the longest β/β⊥/π/π⊥ reduction from `m`.

    Exhaustive depth-first search over the reduction graph, memoized on
    α-equivalence classes.  `budget` bounds the number of distinct terms
    expanded.  The witness is a longest path (or a path into a cycle).
    """
    memo: dict[str, tuple[int, RedexOccurrence | None, SymTerm | None]] = {}
    on_stack: set[str] = set()
    # frame: [term, successors, next index, best eta, best step]
    stack: list[list] = []

    def push(t: SymTerm) -> None:
        on_stack.add(t.key)
        stack.append([t, one_step_reducts(t, rules=BETAPI), 0, 0, None])

    push(m)
    expanded = 1
    while stack:
        frame = stack[-1]
        t, succs, i = frame[0], frame[1], frame[2]
        if i < len(succs):
            frame[2] += 1
            occ, child = succs[i]
            k = child.key
            if k in on_stack:
                trace = ReductionTrace(m, status="partial")
                for f in stack[:-1]:
                    o, c = f[1][f[2] - 1]
                    trace.append(o, c)
                trace.append(occ, child)
                return SNReport("cycle-found", None, cxty_term(m), trace, expanded)
            if k in memo:
                e = memo[k][0] + 1
                if e > frame[3] or frame[4] is None:
                    frame[3], frame[4] = e, (occ, child)
                continue
            expanded += 1
            if expanded > budget:
                return SNReport("fuel-exhausted", None, cxty_term(m), None, expanded)
            push(child)
            continue
        stack.pop()
        on_stack.discard(t.key)
        best = frame[4]
        memo[t.key] = (frame[3], best[0] if best else None, best[1] if best else None)
        if stack:
            parent = stack[-1]
            occ, child = parent[1][parent[2] - 1]
            e = frame[3] + 1
            if e > parent[3] or parent[4] is None:
                parent[3], parent[4] = e, (occ, child)
    eta, _, _ = memo[m.key]
    witness = ReductionTrace(m)
    cur = m
    while True:
        _, occ, nxt = memo[cur.key]
        if occ is None:
            break
        witness.append(occ, nxt)
        cur = nxt
    return SNReport("normalizing", eta, cxty_term(m), witness, expanded)


# ---------------------------------------------------------------------------
# zoom-in sequences


@dataclass(frozen=True)
class ZoomInSequence:
    redexes: tuple[SymTerm, ...]


def root_contractions(r: SymTerm, rules: Iterable[Rule] = BETAPI) -> list[tuple[RedexOccurrence, SymTerm]]:
    return [(o, reduce_at(r, o)) for o in find_redexes(r, rules=rules) if o.path == ()]


def _sn_verdict(t: SymTerm, budget: int) -> str:
    return longest_reduction_betapi(t, budget).status


def validate_zoomin(seq: ZoomInSequence, sn_budget: int = 10**4) -> tuple[bool, str]:
    """Return ``(structural, minimal)`` for a candidate zoom-in sequence.

    `structural`: every redex after the first is a subterm of a one-step
    contraction of its predecessor.  `minimal`: each redex is ``(P * Q)`` with
    ``P`` and ``Q`` βπ-normalizing and ``(P * Q)`` not; ``"inconclusive"``
    when the budget does not settle it.
    """
    rs = list(seq.redexes)
    structural = all(root_contractions(r) for r in rs)
    for a, b in zip(rs, rs[1:]):
        if not any(any(s == b for _, s in positions(red)) for _, red in root_contractions(a)):
            structural = False
    minimal = "pass"
    for r in rs:
        if not isinstance(r, Star):
            return structural, "fail"
        parts = [_sn_verdict(r.left, sn_budget), _sn_verdict(r.right, sn_budget)]
        if "cycle-found" in parts:
            return structural, "fail"
        whole = _sn_verdict(r, sn_budget)
        if whole == "normalizing":
            return structural, "fail"
        if "fuel-exhausted" in parts or whole == "fuel-exhausted":
            minimal = "inconclusive"
    return structural, minimal
