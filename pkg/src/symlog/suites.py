"""Named property suites over generated samples.

Each suite takes ``(samples, seed, max_size)`` and returns a
:class:`SuiteResult`.  The suites back both the ``verify`` command and the
acceptance tests.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field

from . import bridge as B
from . import lmm_core as L
from . import sym_core as S
from .lmm_reduction import LmmRule, critical_pair_example, find_redexes_lmm, normalize_lmm
from .postpone import PostponementError, postpone_e_detailed, postpone_triv_detailed
from .sym_reduction import (
    BETAPI,
    STRATEGIES,
    UsageError,
    find_redexes,
    longest_reduction_betapi,
    normalize,
    reduce_at,
)
from .testgen import (
    GenConfig,
    gen_e_trace,
    gen_lmm,
    gen_lmm_of_type,
    gen_sym,
    gen_sym_of_type,
    gen_triv_trace,
)

MAX_FAILURES_KEPT = 5


@dataclass
class SuiteResult:
    name: str
    samples: int = 0
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    details: Counter = field(default_factory=Counter)
    verdicts: list[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, what: str = "") -> None:
        self.samples += 1
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES_KEPT:
                self.failures.append(what)

    def summary(self, timing: bool = True) -> str:
        line = f"{self.name}: {self.passed}/{self.samples} passed, {self.failed} failed"
        if timing:
            line += f" ({self.elapsed:.1f}s)"
        if self.details:
            line += " " + ", ".join(f"{k}={v}" for k, v in sorted(self.details.items()))
        return line

    def to_json_obj(self) -> dict:
        return {
            "suite": self.name,
            "samples": self.samples,
            "passed": self.passed,
            "failed": self.failed,
            "failures": self.failures,
            "details": dict(sorted(self.details.items())),
        }


def _seeds(seed: int) -> Callable[[], int]:
    rng = random.Random(seed)
    return lambda: rng.getrandbits(63)


def _cfg(next_seed: Callable[[], int], max_size: int) -> GenConfig:
    return GenConfig(seed=next_seed(), max_size=max_size)


# ---------------------------------------------------------------------------
# λSym


def suite_type_preservation(samples: int, seed: int = 0, max_size: int = 30) -> SuiteResult:
    res = SuiteResult("type_preservation")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, a = gen_sym(_cfg(nxt, max_size))
        d = S.typecheck_sym(ctx, m)[1]
        bad = []
        for occ in find_redexes(m, d):
            n = reduce_at(m, occ)
            try:
                b = S.type_of(ctx, n)
            except S.SymTypeError as exc:
                bad.append(f"{occ}: {exc}")
                continue
            if b != a:
                bad.append(f"{occ}: type {S.format_type(b)}")
            res.details["steps"] += 1
        res.record(not bad, f"{S.format_term(m)}: {bad[:1]}")
    return res


def suite_sn(samples: int, seed: int = 0, max_size: int = 40, fuel: int = 10**5) -> SuiteResult:
    """Every strategy normalizes every sample (all seven rules) within `fuel`."""
    res = SuiteResult("sn")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        d = S.typecheck_sym(ctx, m)[1]
        statuses = []
        for strategy in STRATEGIES:
            tr = normalize(m, d, strategy=strategy, fuel=fuel, seed=seed)
            statuses.append(tr.status)
            res.details["steps"] += len(tr)
        res.record(all(s == "normal" for s in statuses), f"{S.format_term(m)}: {statuses}")
    return res


def suite_longest(samples: int, seed: int = 0, max_size: int = 15, budget: int = 10**6) -> SuiteResult:
    """The βπ longest-path oracle completes (finite, acyclic) on typed terms."""
    res = SuiteResult("longest")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        rep = longest_reduction_betapi(m, budget)
        res.details["max_eta"] = max(res.details["max_eta"], rep.eta or 0)
        res.record(rep.status == "normalizing", f"{S.format_term(m)}: {rep.status}")
    return res


def suite_subst_closure(samples: int, seed: int = 0, max_size: int = 12, budget: int = 10**6) -> SuiteResult:
    """``M[x:=N]`` has a finite βπ longest path for typed M, N with N : type of x."""
    res = SuiteResult("subst_closure")
    nxt = _seeds(seed)
    while res.samples < samples:
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        free = sorted(m.fv)
        if not free:
            continue
        x = random.Random(nxt()).choice(free)
        outer = {k: v for k, v in ctx.items() if k != x}
        ctx2, n = gen_sym_of_type(_cfg(nxt, max_size), ctx[x], outer)
        if x in ctx2:
            continue
        rep = longest_reduction_betapi(S.substitute(m, x, n), budget)
        res.record(rep.status == "normalizing", f"{S.format_term(m)} [{x}:={S.format_term(n)}]: {rep.status}")
    return res


def suite_monotonicity(samples: int, seed: int = 0, max_size: int = 12, budget: int = 10**6) -> SuiteResult:
    """Every βπ step ``M -> N`` has ``eta(M) >= eta(N) + 1``."""
    res = SuiteResult("monotonicity")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        em = longest_reduction_betapi(m, budget)
        bad = []
        for occ in find_redexes(m, rules=BETAPI):
            en = longest_reduction_betapi(reduce_at(m, occ), budget)
            res.details["steps"] += 1
            if em.eta is None or en.eta is None or em.eta < en.eta + 1:
                bad.append(f"{occ}: {em.eta} vs {en.eta}")
        res.record(not bad, f"{S.format_term(m)}: {bad[:1]}")
    return res


def suite_subformula(samples: int, seed: int = 0, max_size: int = 20) -> SuiteResult:
    """Derivations of normal forms only mention subformulas of the context
    and conclusion types."""
    res = SuiteResult("subformula")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        nf = normalize(m, S.typecheck_sym(ctx, m)[1]).end
        d = S.typecheck_sym(ctx, nf)[1]
        res.record(S.subformula_report(d), f"{S.format_context(ctx)} |- {S.format_term(nf)}")
    return res


def _postpone_suite(name: str, samples: int, seed: int, max_size: int, triv: bool) -> SuiteResult:
    res = SuiteResult(name)
    nxt = _seeds(seed)
    for i in range(samples):
        prefix = i % 4
        cfg = _cfg(nxt, max_size)
        ctx, tr = gen_triv_trace(cfg, prefix) if triv else gen_e_trace(cfg, prefix)
        try:
            out = postpone_triv_detailed(tr, ctx) if triv else postpone_e_detailed(tr)
        except (PostponementError, UsageError) as exc:
            res.details["not_found"] += 1
            res.record(False, f"{exc}\n{tr}")
            continue
        t = out.trace
        ok_ends = t.check() and t.start == tr.start and t.end == tr.end
        res.details["bound_checked"] += sum(s.bound_checked for s in out.segments)
        if not out.bound_ok:
            res.details["bound_violated"] += 1
        res.record(ok_ends and out.bound_ok, f"endpoints={ok_ends} bound={out.bound_ok}\n{tr}")
    return res


def suite_postpone_e(samples: int, seed: int = 0, max_size: int = 12) -> SuiteResult:
    return _postpone_suite("postpone_e", samples, seed, max_size, triv=False)


def suite_postpone_triv(samples: int, seed: int = 0, max_size: int = 12) -> SuiteResult:
    return _postpone_suite("postpone_triv", samples, seed, max_size, triv=True)


# ---------------------------------------------------------------------------
# bridge


def suite_sim_e(samples: int, seed: int = 0, max_size: int = 16) -> SuiteResult:
    """Logical steps give nonempty λSym traces; complementer steps give ``~``."""
    res = SuiteResult("sim_e")
    nxt = _seeds(seed)
    while res.samples < samples:
        seq, u = gen_lmm(_cfg(nxt, max_size))
        occs = find_redexes_lmm(u)
        if not occs:
            continue
        rng = random.Random(nxt())
        rule = rng.choice(sorted({o.rule for o in occs}))
        occ = rng.choice([o for o in occs if o.rule is rule])
        v = B.check_sim_e(u, occ, seq)
        res.verdicts.append(v.to_json_obj())
        res.details[f"{rule.value}:{v.status}"] += 1
        if occ.rule in (LmmRule.CL1L, LmmRule.CL1R, LmmRule.CL2):
            ok = v.ok and v.equiv is True
        else:
            ok = v.ok and v.length >= 1
        res.record(ok, f"{occ} in {L.format_term(u)}: {v.detail}")
    return res


# the chains named in the simulation proof
EXPECTED_F_CHAINS = {
    "beta": ["cl1r", "mutilde"],
    "beta_bot": ["cl2", "mutilde"],
    "pi": ["cl1r", "lambda", "mutilde", "mu"],
}


def suite_sim_f(samples: int, seed: int = 0, max_size: int = 16) -> SuiteResult:
    """Every λSym step ``M -> N`` gives ``Mᶠ ->+ Nᶠ``; for β, β⊥ and π the
    witness must be exactly the chain named in the proof."""
    res = SuiteResult("sim_f")
    nxt = _seeds(seed)
    while res.samples < samples:
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        d = S.typecheck_sym(ctx, m)[1]
        occs = find_redexes(m, d)
        if not occs:
            continue
        rng = random.Random(nxt())
        rule = rng.choice(sorted({o.rule for o in occs}))
        occ = rng.choice([o for o in occs if o.rule is rule])
        v = B.check_sim_f(m, occ, ctx)
        res.verdicts.append(v.to_json_obj())
        want = EXPECTED_F_CHAINS.get(rule.value)
        chain_ok = want is None or v.rules == want
        res.details[f"{rule.value}:{v.status}"] += 1
        if v.ok and not chain_ok:
            res.details[f"{rule.value}:chain={'+'.join(v.rules)}"] += 1
        res.record(v.ok and chain_ok, f"{occ} in {S.format_term(m)}: {v.rules} {v.detail}")
    return res


def suite_roundtrip_fe(samples: int, seed: int = 0, max_size: int = 20) -> SuiteResult:
    res = SuiteResult("roundtrip_fe")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        tr = B.roundtrip_fe(m, ctx)
        ok = tr is not None and tr.check() and tr.end == m and len(tr) <= 3 * S.cxty_term(m) + 10
        res.record(ok, S.format_term(m))
    return res


def suite_roundtrip_ef(samples: int, seed: int = 0, max_size: int = 20) -> SuiteResult:
    res = SuiteResult("roundtrip_ef")
    nxt = _seeds(seed)
    for _ in range(samples):
        seq, u = gen_lmm(_cfg(nxt, max_size))
        tr = B.roundtrip_ef(u, seq)
        ok = tr is not None and tr.check() and tr.end == B.bigT(u, seq)
        res.record(ok, L.format_term(u))
    return res


def suite_typing_e(samples: int, seed: int = 0, max_size: int = 20) -> SuiteResult:
    res = SuiteResult("typing_e")
    nxt = _seeds(seed)
    for _ in range(samples):
        seq, u = gen_lmm(_cfg(nxt, max_size))
        try:
            ok = B.check_typing_e(u, seq)
        except S.SymTypeError:
            ok = False
            res.details["type_error"] += 1
        res.record(ok, L.format_term(u))
    return res


def suite_typing_f(samples: int, seed: int = 0, max_size: int = 20) -> SuiteResult:
    res = SuiteResult("typing_f")
    nxt = _seeds(seed)
    for _ in range(samples):
        ctx, m, _ = gen_sym(_cfg(nxt, max_size))
        try:
            ok = B.check_typing_f(m, ctx)
        except L.LmmTypeError:
            ok = False
            res.details["type_error"] += 1
        res.record(ok, S.format_term(m))
    return res


def suite_subst_lemmas(samples: int, seed: int = 0, max_size: int = 12) -> SuiteResult:
    """Both translations commute with substitution (l-, r- and λSym variables)."""
    res = SuiteResult("subst_lemmas")
    nxt = _seeds(seed)
    kinds = ("e_l", "e_r", "f")
    while res.samples < samples:
        kind = kinds[res.samples % 3]
        rng = random.Random(nxt())
        if kind == "f":
            ctx, m, _ = gen_sym(_cfg(nxt, max_size))
            if not m.fv:
                continue
            x = rng.choice(sorted(m.fv))
            outer = {k: v for k, v in ctx.items() if k != x}
            ctx2, n = gen_sym_of_type(_cfg(nxt, max_size), ctx[x], outer)
            if x in ctx2:  # the generator reused the name for a new variable
                continue
            ok = B.check_subst_f(m, {**ctx2, x: ctx[x]}, x, n)
            what = f"{S.format_term(m)} [{x}:={S.format_term(n)}]"
        else:
            seq, u = gen_lmm(_cfg(nxt, max_size))
            side = u.fv_l if kind == "e_l" else u.fv_r
            if not side:
                continue
            x = rng.choice(sorted(side))
            if kind == "e_l":
                outer = L.LmmSequent({k: v for k, v in seq.gamma.items() if k != x}, seq.delta)
                seq2, t = gen_lmm_of_type(_cfg(nxt, max_size), "l", seq.gamma[x], outer)
                if x in seq2.gamma:
                    continue
                full = L.LmmSequent({**seq2.gamma, x: seq.gamma[x]}, seq2.delta)
                ok = B.check_subst_e_l(u, full, x, t)
            else:
                outer = L.LmmSequent(seq.gamma, {k: v for k, v in seq.delta.items() if k != x})
                seq2, t = gen_lmm_of_type(_cfg(nxt, max_size), "r", seq.delta[x], outer)
                if x in seq2.delta:
                    continue
                full = L.LmmSequent(seq2.gamma, {**seq2.delta, x: seq.delta[x]})
                ok = B.check_subst_e_r(u, full, x, t)
            what = f"{L.format_term(u)} [{x}:={L.format_term(t)}]"
        res.details[kind] += 1
        res.record(ok, what)
    return res


def suite_critical_pair(samples: int = 1, seed: int = 0, max_size: int = 0) -> SuiteResult:
    """The μ/μ̃ overlap yields two distinct normal forms (non-confluence)."""
    res = SuiteResult("critical_pair")
    if samples <= 0:
        return res
    _, u = critical_pair_example()
    by_mu = normalize_lmm(u, overlap="mu").end
    by_mutilde = normalize_lmm(u, overlap="mutilde").end
    res.record(by_mu != by_mutilde, f"{L.format_term(by_mu)} vs {L.format_term(by_mutilde)}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "type_preservation": suite_type_preservation,
    "sn": suite_sn,
    "longest": suite_longest,
    "subst_closure": suite_subst_closure,
    "monotonicity": suite_monotonicity,
    "subformula": suite_subformula,
    "postpone_e": suite_postpone_e,
    "postpone_triv": suite_postpone_triv,
    "sim_e": suite_sim_e,
    "sim_f": suite_sim_f,
    "roundtrip_fe": suite_roundtrip_fe,
    "roundtrip_ef": suite_roundtrip_ef,
    "typing_e": suite_typing_e,
    "typing_f": suite_typing_f,
    "subst_lemmas": suite_subst_lemmas,
    "critical_pair": suite_critical_pair,
}


def run_suite(name: str, samples: int, seed: int = 0, max_size: int | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    start = time.perf_counter()
    res = fn(samples, seed) if max_size is None else fn(samples, seed, max_size)
    res.elapsed = time.perf_counter() - start
    return res
