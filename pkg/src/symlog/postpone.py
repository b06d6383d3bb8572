"""Reordering of reduction traces so that η/η⊥ (resp. Triv) steps come last.

Given ``U ->e* V ->βπ+ W`` we build ``U ->βπ+ V' ->e* W``; given
``U ->Triv* V ->βπη+ W`` we build ``U ->βπη+ V' ->Triv* W``.  Each block of
postponable steps followed by one principal step is rewritten on its own,
first by direct commutation (disjoint redexes, or a principal redex lying
inside the η/Triv site) and otherwise by a bounded search: principal-rule
sequences from the block's start, each followed by a search for a
postponable-only path to the block's end.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .sym_core import SymContext, SymTerm, cxty_term, typecheck_sym
from .sym_reduction import (
    BETAPI,
    BETAPIETA,
    E_RULES,
    RedexOccurrence,
    ReductionTrace,
    Rule,
    StaleRedexError,
    UsageError,
    find_redexes,
    reduce_at,
)

Step = tuple[RedexOccurrence, SymTerm]

DEFAULT_VISIT_CAP = 20_000


class PostponementError(Exception):
    """No reordering was found within the search bounds."""


@dataclass
class SegmentReport:
    """How one block ``postponable^k ; principal`` was rewritten."""

    prefix_len: int
    rule: Rule
    linear: bool
    method: str  # "none", "commute", "inside", "search"
    out_principal: int
    out_postponed: int
    bound_checked: bool = False  # a β₀ block: output length must not exceed input length
    bound_ok: bool = True

    @property
    def out_len(self) -> int:
        return self.out_principal + self.out_postponed


@dataclass
class PostponeResult:
    trace: ReductionTrace
    segments: list[SegmentReport] = field(default_factory=list)

    @property
    def bound_ok(self) -> bool:
        return all(s.bound_ok for s in self.segments)


def _is_prefix(p: tuple, q: tuple) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def _replay(start: SymTerm, occs: Iterable[RedexOccurrence]) -> list[Step] | None:
    steps, cur = [], start
    for occ in occs:
        try:
            cur = reduce_at(cur, occ)
        except StaleRedexError:
            return None
        steps.append((occ, cur))
    return steps


def _relinear(term: SymTerm, occ: RedexOccurrence) -> RedexOccurrence:
    for o in find_redexes(term, rules=[occ.rule]):
        if o.path == occ.path:
            return o
    return occ


# ---------------------------------------------------------------------------
# search


def _reach_by(
    src: SymTerm,
    dst: SymTerm,
    successors: Callable[[SymTerm], list[Step]],
    cap: int,
) -> list[Step] | None:
    """Shortest path from `src` to `dst` along cxty-decreasing steps."""
    target = dst.key
    if src.key == target:
        return []
    floor = cxty_term(dst)
    if cxty_term(src) <= floor:
        return None
    parent: dict[str, tuple[str, Step] | None] = {src.key: None}
    queue = deque([src])
    while queue and len(parent) < cap:
        cur = queue.popleft()
        for occ, nxt in successors(cur):
            k = nxt.key
            if k in parent or cxty_term(nxt) < floor:
                continue
            parent[k] = (cur.key, (occ, nxt))
            if k == target:
                path = []
                while parent[k] is not None:
                    k, step = parent[k]
                    path.append(step)
                return path[::-1]
            if cxty_term(nxt) > floor:
                queue.append(nxt)
    return None


def _search(
    start: SymTerm,
    end: SymTerm,
    principal: Callable[[SymTerm], list[Step]],
    postponed: Callable[[SymTerm, SymTerm], list[Step] | None],
    max_principal: int,
    cap: int,
) -> tuple[list[Step], list[Step]] | None:
    """Shortest ``principal+ ; postponed*`` path from `start` to `end`."""
    best: tuple[list[Step], list[Step]] | None = None
    frontier: list[tuple[SymTerm, list[Step]]] = [(start, [])]
    seen = {start.key}
    for depth in range(1, max_principal + 1):
        if best is not None and depth >= len(best[0]) + len(best[1]):
            break
        nxt_frontier = []
        for term, path in frontier:
            for step in principal(term):
                k = step[1].key
                if k in seen:
                    continue
                seen.add(k)
                if len(seen) > cap:
                    return best
                p = path + [step]
                nxt_frontier.append((step[1], p))
                tail = postponed(step[1], end)
                if tail is not None and (best is None or len(p) + len(tail) < len(best[0]) + len(best[1])):
                    best = (p, tail)
        frontier = nxt_frontier
    return best


# ---------------------------------------------------------------------------
# generic block rewriting


def _block_direct(
    start: SymTerm,
    block: list[Step],
    principal_step: Step,
    inner_offset: Callable[[RedexOccurrence], tuple | None],
) -> tuple[str, list[Step], list[Step]] | None:
    """Commute a single postponable step past the principal step without search."""
    if len(block) != 1:
        return None
    (eocc, _), (pocc, end) = block[0], principal_step
    if not _is_prefix(eocc.path, pocc.path) and not _is_prefix(pocc.path, eocc.path):
        first = _replay(start, [pocc])
        if first is not None:
            first = [(_relinear(start, pocc), first[0][1])]
            second = _replay(first[0][1], [eocc])
            if second is not None and second[-1][1] == end:
                return "commute", first, second
    if _is_prefix(eocc.path, pocc.path):
        offset = inner_offset(eocc)
        if offset is not None:
            moved = RedexOccurrence(eocc.path + offset + pocc.path[len(eocc.path):], pocc.rule)
            first = _replay(start, [moved])
            if first is not None:
                first = [(_relinear(start, moved), first[0][1])]
                second = _replay(first[0][1], [eocc])
                if second is not None and second[-1][1] == end:
                    return "inside", first, second
    return None


def _rewrite(
    trace: ReductionTrace,
    postponable: frozenset[Rule],
    principal_rules: frozenset[Rule],
    principal_succ: Callable[[SymTerm, Callable[[RedexOccurrence], bool]], list[Step]],
    postponed_reach: Callable[[SymTerm, SymTerm], list[Step] | None],
    inner_offset: Callable[[RedexOccurrence], tuple | None],
    check_linear_bound: bool,
    visit_cap: int,
) -> PostponeResult:
    rules = trace.rules
    k = 0
    while k < len(rules) and rules[k] in postponable:
        k += 1
    if any(r not in principal_rules for r in rules[k:]):
        raise UsageError("trace must be postponable steps followed by principal steps only")
    if k == 0:
        return PostponeResult(ReductionTrace(trace.start, list(trace.steps), ctx=trace.ctx), [])
    if k == len(rules):
        raise UsageError("trace needs at least one principal step after the postponable prefix")

    done: list[Step] = []
    pending: list[Step] = list(trace.steps[:k])
    base = trace.start  # term after `done`
    reports: list[SegmentReport] = []
    for step in trace.steps[k:]:
        occ, end = step
        if not pending:
            done.append(step)
            base = end
            continue
        n_in = len(pending) + 1
        linear_block = check_linear_bound and occ.linear and occ.rule in (Rule.BETA, Rule.BETA_BOT)
        found = _block_direct(base, pending, step, inner_offset)
        method = found[0] if found else "search"
        result = found[1:] if found else None
        if linear_block and result is not None:
            first, second = result
            if not (all(o.linear for o, _ in first) and len(first) + len(second) <= n_in):
                result = None
        if result is None and linear_block:
            result = _search(
                base,
                end,
                lambda t: principal_succ(t, lambda o: o.linear and o.rule in (Rule.BETA, Rule.BETA_BOT)),
                postponed_reach,
                n_in,
                visit_cap,
            )
            method = "search"
            if result is not None and len(result[0]) + len(result[1]) > n_in:
                result = None
        bound_ok = result is not None
        if result is None:
            result = _search(
                base,
                end,
                lambda t: principal_succ(t, lambda o: True),
                postponed_reach,
                2 * n_in + cxty_term(base),
                visit_cap,
            )
            method = "search"
        if result is None:
            raise PostponementError(
                f"no reordering of a {n_in}-step block ending with {occ} within bounds"
            )
        first, second = result
        reports.append(
            SegmentReport(
                len(pending), occ.rule, occ.linear, method, len(first), len(second),
                bound_checked=linear_block, bound_ok=bound_ok or not linear_block,
            )
        )
        done.extend(first)
        pending = list(second)
        base = first[-1][1]
    out = ReductionTrace(trace.start, done + pending, status=trace.status, ctx=trace.ctx)
    return PostponeResult(out, reports)


# ---------------------------------------------------------------------------
# η / η⊥


def _e_offset(occ: RedexOccurrence) -> tuple:
    # λx.(P * x): P sits at (0, 0); λx.(x * P): P sits at (0, 1)
    return (0, 0) if occ.rule is Rule.ETA else (0, 1)


def _betapi_succ(t: SymTerm, accept: Callable[[RedexOccurrence], bool]) -> list[Step]:
    return [(o, reduce_at(t, o)) for o in find_redexes(t, rules=BETAPI) if accept(o)]


def _e_succ(t: SymTerm) -> list[Step]:
    return [(o, reduce_at(t, o)) for o in find_redexes(t, rules=E_RULES)]


def postpone_e_detailed(trace: ReductionTrace, visit_cap: int = DEFAULT_VISIT_CAP) -> PostponeResult:
    return _rewrite(
        trace,
        E_RULES,
        BETAPI,
        _betapi_succ,
        lambda a, b: _reach_by(a, b, _e_succ, visit_cap),
        _e_offset,
        check_linear_bound=True,
        visit_cap=visit_cap,
    )


def postpone_e(trace: ReductionTrace, visit_cap: int = DEFAULT_VISIT_CAP) -> ReductionTrace:
    """Turn an ``e* ; βπ+`` trace into a ``βπ+ ; e*`` trace with the same endpoints."""
    return postpone_e_detailed(trace, visit_cap).trace


# ---------------------------------------------------------------------------
# Triv


def _triv_offset(occ: RedexOccurrence) -> tuple | None:
    return occ.inner


def _triv_succ(ctx: SymContext) -> Callable[[SymTerm], list[Step]]:
    def succ(t: SymTerm) -> list[Step]:
        d = typecheck_sym(ctx, t)[1]
        return [(o, reduce_at(t, o)) for o in find_redexes(t, d, rules=[Rule.TRIV])]

    return succ


def _betapieta_succ(t: SymTerm, accept: Callable[[RedexOccurrence], bool]) -> list[Step]:
    return [(o, reduce_at(t, o)) for o in find_redexes(t, rules=BETAPIETA) if accept(o)]


def postpone_triv_detailed(
    trace: ReductionTrace, ctx: SymContext | None = None, visit_cap: int = DEFAULT_VISIT_CAP
) -> PostponeResult:
    ctx = ctx if ctx is not None else trace.ctx
    if ctx is None:
        raise UsageError("Triv postponement needs the typing context of the trace")
    typecheck_sym(ctx, trace.start)
    succ = _triv_succ(ctx)
    return _rewrite(
        trace,
        frozenset({Rule.TRIV}),
        BETAPIETA,
        _betapieta_succ,
        lambda a, b: _reach_by(a, b, succ, visit_cap),
        _triv_offset,
        check_linear_bound=False,
        visit_cap=visit_cap,
    )


def postpone_triv(
    trace: ReductionTrace, ctx: SymContext | None = None, visit_cap: int = DEFAULT_VISIT_CAP
) -> ReductionTrace:
    """Turn a ``Triv* ; βπη+`` trace into a ``βπη+ ; Triv*`` trace with the same endpoints."""
    return postpone_triv_detailed(trace, ctx, visit_cap).trace
