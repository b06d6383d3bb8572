"""Reduction for λ̄μμ̃*: the five cut-elimination rules plus the three
complementer rules.

The calculus is not confluent: a cut ``<mu a. p | mut x. q>`` is both a μ-
and a μ̃-redex.  Strategies therefore take an explicit `overlap` policy.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .lmm_core import (
    BarE,
    Cons,
    Cut,
    Lam,
    LmmSequent,
    LmmTerm,
    LVar,
    Mu,
    MuTilde,
    Path,
    RVar,
    TildeT,
    format_term,
    positions,
    replace_at,
    subst_l,
    subst_r,
    subterm,
)
from .sym_reduction import STRATEGIES, StaleRedexError, UsageError, STRATEGY_ALIASES, fuel_default


class LmmRule(str, Enum):
    LAMBDA = "lambda"
    MU = "mu"
    MUTILDE = "mutilde"
    S_L = "s_l"
    S_R = "s_r"
    CL1L = "cl1l"
    CL1R = "cl1r"
    CL2 = "cl2"

    def __str__(self) -> str:
        return self.value


_ORDER = list(LmmRule)
LMM_ALL = frozenset(LmmRule)
CL_RULES = frozenset({LmmRule.CL1L, LmmRule.CL1R, LmmRule.CL2})
LOGICAL_RULES = LMM_ALL - CL_RULES
OVERLAPS = ("mutilde", "mu", "random")


@dataclass(frozen=True)
class LmmRedexOccurrence:
    path: Path
    rule: LmmRule

    def __str__(self) -> str:
        return f"{self.rule.value}@{'/'.join(map(str, self.path)) or '.'}"


def _match(u: LmmTerm, rule: LmmRule) -> bool:
    if rule is LmmRule.LAMBDA:
        return isinstance(u, Cut) and isinstance(u.t, Lam) and isinstance(u.e, Cons)
    if rule is LmmRule.MU:
        return isinstance(u, Cut) and isinstance(u.t, Mu)
    if rule is LmmRule.MUTILDE:
        return isinstance(u, Cut) and isinstance(u.e, MuTilde)
    if rule is LmmRule.S_L:
        return (
            isinstance(u, Mu)
            and u.body.e == RVar(u.alpha)
            and u.alpha not in u.body.t.fv_r
        )
    if rule is LmmRule.S_R:
        return (
            isinstance(u, MuTilde)
            and u.body.t == LVar(u.x)
            and u.x not in u.body.e.fv_l
        )
    if rule is LmmRule.CL1L:
        return isinstance(u, BarE) and isinstance(u.e, TildeT)
    if rule is LmmRule.CL1R:
        return isinstance(u, TildeT) and isinstance(u.t, BarE)
    if rule is LmmRule.CL2:
        return isinstance(u, Cut) and isinstance(u.t, BarE) and isinstance(u.e, TildeT)
    return False


def _contract(u: LmmTerm, rule: LmmRule) -> LmmTerm:
    if rule is LmmRule.LAMBDA:
        lam, cons = u.t, u.e
        return Cut(cons.head, MuTilde(lam.x, lam.ann, Cut(lam.body, cons.tail)))
    if rule is LmmRule.MU:
        return subst_r(u.t.body, u.t.alpha, u.e)
    if rule is LmmRule.MUTILDE:
        return subst_l(u.e.body, u.e.x, u.t)
    if rule is LmmRule.S_L:
        return u.body.t
    if rule is LmmRule.S_R:
        return u.body.e
    if rule is LmmRule.CL1L:
        return u.e.t
    if rule is LmmRule.CL1R:
        return u.t.e
    if rule is LmmRule.CL2:
        return Cut(u.e.t, u.t.e)
    raise AssertionError(rule)


def find_redexes_lmm(u: LmmTerm, rules: Iterable[LmmRule] | None = None) -> list[LmmRedexOccurrence]:
    """All redex occurrences, leftmost-outermost first; at one node in rule order."""
    selected = LMM_ALL if rules is None else frozenset(LmmRule(r) for r in rules)
    out = []
    for path, s in positions(u):
        for rule in _ORDER:
            if rule in selected and _match(s, rule):
                out.append(LmmRedexOccurrence(path, rule))
    return out


def reduce_at_lmm(u: LmmTerm, occ: LmmRedexOccurrence) -> LmmTerm:
    try:
        s = subterm(u, occ.path)
    except IndexError as exc:
        raise StaleRedexError(str(exc)) from None
    if not _match(s, occ.rule):
        raise StaleRedexError(f"no {occ.rule.value} redex at {occ} in {format_term(u)}")
    return replace_at(u, occ.path, _contract(s, occ.rule))


def one_step_reducts_lmm(u: LmmTerm, rules=None) -> list[tuple[LmmRedexOccurrence, LmmTerm]]:
    return [(o, reduce_at_lmm(u, o)) for o in find_redexes_lmm(u, rules)]


@dataclass
class LmmTrace:
    start: LmmTerm
    steps: list[tuple[LmmRedexOccurrence, LmmTerm]] = field(default_factory=list)
    status: str = "normal"
    seq: LmmSequent | None = None

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> LmmTerm:
        return self.steps[-1][1] if self.steps else self.start

    @property
    def rules(self) -> list[LmmRule]:
        return [o.rule for o, _ in self.steps]

    def append(self, occ: LmmRedexOccurrence, result: LmmTerm) -> None:
        self.steps.append((occ, result))

    def check(self) -> bool:
        cur = self.start
        for occ, result in self.steps:
            try:
                cur = reduce_at_lmm(cur, occ)
            except StaleRedexError:
                return False
            if cur != result:
                return False
        return True

    def to_json_obj(self) -> list[dict]:
        return [
            {"rule": o.rule.value, "path": list(o.path), "term": format_term(t)}
            for o, t in self.steps
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def __str__(self) -> str:
        lines = [format_term(self.start)]
        lines += [f"  -> [{o}] {format_term(t)}" for o, t in self.steps]
        return "\n".join(lines)


def _resolve_overlap(
    occs: Sequence[LmmRedexOccurrence], overlap: str, rng: random.Random
) -> list[LmmRedexOccurrence]:
    """Drop one side of every μ/μ̃ double match according to `overlap`."""
    by_path: dict[Path, set[LmmRule]] = {}
    for o in occs:
        by_path.setdefault(o.path, set()).add(o.rule)
    drop: set[tuple[Path, LmmRule]] = set()
    for path, rules in by_path.items():
        if {LmmRule.MU, LmmRule.MUTILDE} <= rules:
            if overlap == "mu":
                loser = LmmRule.MUTILDE
            elif overlap == "mutilde":
                loser = LmmRule.MU
            else:
                loser = rng.choice([LmmRule.MU, LmmRule.MUTILDE])
            drop.add((path, loser))
    return [o for o in occs if (o.path, o.rule) not in drop]


def normalize_lmm(
    u: LmmTerm,
    strategy: str = "leftmost-outermost",
    fuel: int | None = None,
    seed: int = 0,
    overlap: str = "mutilde",
    rules: Iterable[LmmRule] | None = None,
) -> LmmTrace:
    """Reduce to normal form; μ/μ̃ critical pairs are resolved by `overlap`
    (``"mutilde"`` — the default — prefers μ̃, ``"mu"`` prefers μ,
    ``"random"`` flips a seeded coin)."""
    strategy = STRATEGY_ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}")
    if overlap not in OVERLAPS:
        raise UsageError(f"unknown overlap policy {overlap!r}")
    fuel = fuel_default() if fuel is None else fuel
    rng = random.Random(seed)
    trace = LmmTrace(u)
    cur = u
    for _ in range(fuel):
        occs = _resolve_overlap(find_redexes_lmm(cur, rules), overlap, rng)
        if not occs:
            trace.status = "normal"
            return trace
        if strategy == "leftmost-outermost":
            occ = occs[0]
        elif strategy == "rightmost-innermost":
            occ = occs[-1]
        else:
            occ = occs[rng.randrange(len(occs))]
        cur = reduce_at_lmm(cur, occ)
        trace.append(occ, cur)
    trace.status = "normal" if not find_redexes_lmm(cur, rules) else "fuel-exhausted"
    return trace


def critical_pair_example() -> tuple[LmmSequent, LmmTerm]:
    """``<mu a:A. <y | b> | mut x:A. <z | c>>``: μ gives ``<y | b>``, μ̃ gives ``<z | c>``."""
    from .lmm_core import Atom

    A = Atom("a")
    seq = LmmSequent({"y": A, "z": A}, {"b": A, "c": A})
    u = Cut(Mu("al", A, Cut(LVar("y"), RVar("b"))), MuTilde("x", A, Cut(LVar("z"), RVar("c"))))
    return seq, u
