"""Command-line interface: ``symlog <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 parse/type/usage error,
3 fuel or budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from collections.abc import Sequence
from pathlib import Path

from . import bridge as B
from . import lmm_core as L
from . import sym_core as S
from ._lexer import ParseError
from .lmm_reduction import OVERLAPS, LmmTrace, normalize_lmm
from .lmm_syntax import parse_lmm_sequent, parse_lmm_term
from .suites import SUITES, run_suite
from .sym_reduction import (
    DEFAULT_BUDGET,
    STRATEGIES,
    STRATEGY_ALIASES,
    ReductionTrace,
    UsageError,
    find_redexes,
    longest_reduction_betapi,
    normalize,
    reduce_at,
    rules_from_names,
)
from .sym_syntax import parse_sym_context, parse_sym_term
from .testgen import GenConfig, gen_lmm, gen_sym

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


def _read_arg(text: str | None) -> str:
    """``@path`` reads a file, ``-`` reads stdin, anything else is literal."""
    if text is None or text == "-":
        return sys.stdin.read()
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _sym_input(args) -> tuple[dict, S.SymTerm]:
    ctx = parse_sym_context(_read_arg(args.ctx)) if args.ctx else {}
    return ctx, parse_sym_term(_read_arg(args.term))


def _lmm_input(args) -> tuple[L.LmmSequent, L.LmmTerm]:
    seq = parse_lmm_sequent(_read_arg(args.ctx)) if args.ctx else L.LmmSequent()
    return seq, parse_lmm_term(_read_arg(args.term))


def _strategy(name: str) -> str:
    name = STRATEGY_ALIASES.get(name, name)
    if name not in STRATEGIES:
        raise UsageError(f"unknown strategy {name!r}")
    return name


def _print_trace(trace: ReductionTrace | LmmTrace, as_json: bool) -> None:
    if as_json:
        print(json.dumps({"status": trace.status, "steps": trace.to_json_obj()}))
    else:
        print(trace)
        print(f"status: {trace.status}, {len(trace)} step(s)")


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    if args.calc == "sym":
        ctx, m = _sym_input(args)
        print(S.format_type(S.type_of(ctx, m)))
        return EXIT_OK
    seq, u = _lmm_input(args)
    a = L.typecheck_lmm(seq, u)
    print("c-judgment OK" if a is None else L.format_type(a))
    return EXIT_OK


def _sym_typing(args, ctx, m):
    if args.untyped:
        return None
    return S.typecheck_sym(ctx, m)[1]


def cmd_reduce(args) -> int:
    strategy = _strategy(args.strategy)
    rng = random.Random(args.seed)
    if args.calc == "sym":
        ctx, m = _sym_input(args)
        d = _sym_typing(args, ctx, m)
        rules = rules_from_names(args.rules.split(",")) if args.rules else None
        trace = ReductionTrace(m, ctx=ctx if d else None, status="partial")
        cur = m
        for _ in range(args.steps):
            occs = find_redexes(cur, d, rules)
            if not occs:
                trace.status = "normal"
                break
            if strategy == "leftmost-outermost":
                occ = occs[0]
            elif strategy == "rightmost-innermost":
                occ = occs[-1]
            else:
                occ = occs[rng.randrange(len(occs))]
            cur = reduce_at(cur, occ)
            trace.append(occ, cur)
            if d is not None:
                d = S.typecheck_sym(ctx, cur)[1]
        else:
            if not find_redexes(cur, d, rules):
                trace.status = "normal"
    else:
        seq, u = _lmm_input(args)
        L.typecheck_lmm(seq, u)
        full = normalize_lmm(u, strategy=strategy, fuel=args.steps, seed=args.seed, overlap=args.overlap)
        trace = LmmTrace(u, full.steps, status="normal" if full.status == "normal" else "partial", seq=seq)
    _print_trace(trace, args.json)
    return EXIT_OK


def cmd_normalize(args) -> int:
    strategy = _strategy(args.strategy)
    if args.calc == "sym":
        ctx, m = _sym_input(args)
        d = _sym_typing(args, ctx, m)
        rules = rules_from_names(args.rules.split(",")) if args.rules else None
        trace = normalize(m, d, strategy=strategy, fuel=args.fuel, seed=args.seed, rules=rules)
    else:
        seq, u = _lmm_input(args)
        L.typecheck_lmm(seq, u)
        trace = normalize_lmm(u, strategy=strategy, fuel=args.fuel, seed=args.seed, overlap=args.overlap)
    if args.text:
        _print_trace(trace, False)
    else:
        print(json.dumps({"status": trace.status, "steps": trace.to_json_obj()}))
    return EXIT_BUDGET if trace.status == "fuel-exhausted" else EXIT_OK


def cmd_translate(args) -> int:
    if args.dir == "f":
        ctx, m = _sym_input(args)
        S.type_of(ctx, m)
        out = L.format_term(B.term_f(m, ctx))
        out_ctx = str(B.context_f(ctx))
    else:
        seq, u = _lmm_input(args)
        L.typecheck_lmm(seq, u)
        if args.dir == "e":
            out = S.format_term(B.term_e(u, seq))
            out_ctx = S.format_context(B.context_e(seq))
        else:
            out = L.format_term(B.bigT(u, seq))
            out_ctx = None
    if args.json:
        print(json.dumps({"dir": args.dir, "term": out, "context": out_ctx}))
    else:
        print(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if args.strict and args.samples > 0 and args.seed is None:
        raise UsageError("--strict requires an explicit --seed when --samples > 0")
    seed = 0 if args.seed is None else args.seed
    res = run_suite(args.suite, args.samples, seed, args.max_size)
    if args.json:
        for v in res.verdicts:
            print(json.dumps(v))
        print(json.dumps(res.to_json_obj()))
    else:
        print(res.summary(timing=False))
        for f in res.failures:
            print("  FAIL " + f.replace("\n", "\n       "))
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_longest(args) -> int:
    ctx, m = _sym_input(args)
    if not args.untyped:
        S.type_of(ctx, m)
    rep = longest_reduction_betapi(m, args.budget)
    if args.json:
        obj = {"status": rep.status, "eta": rep.eta, "cxty": rep.cxty, "visited": rep.visited}
        if rep.witness is not None:
            obj["witness"] = rep.witness.to_json_obj()
        print(json.dumps(obj))
    else:
        print(rep.eta if rep.status == "normalizing" else rep.status)
    if rep.status == "fuel-exhausted":
        return EXIT_BUDGET
    return EXIT_OK if rep.status == "normalizing" else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.strict and args.samples > 0 and args.seed is None:
        raise UsageError("--strict requires an explicit --seed when --samples > 0")
    seeds = random.Random(0 if args.seed is None else args.seed)
    for _ in range(args.samples):
        cfg = GenConfig(seed=seeds.getrandbits(63), max_size=args.max_size)
        if args.calc == "sym":
            ctx, m, _ = gen_sym(cfg)
            line = S.format_term(m)
            if args.show_ctx:
                line = f"{S.format_context(ctx)} |- {line}"
        else:
            seq, u = gen_lmm(cfg)
            line = L.format_term(u)
            if args.show_ctx:
                line = f"{seq} |- {line}"
        if args.json:
            print(json.dumps({"term": line}))
        else:
            print(line)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symlog", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, calc: bool = True, term: bool = True) -> None:
        if calc:
            sp.add_argument("--calc", choices=("sym", "lmm"), default="sym")
        if term:
            sp.add_argument("term", nargs="?", default="-", help="term, @file, or - for stdin")
            sp.add_argument("--ctx", help="context bindings (sym: 'x:A, ...'; lmm: 'x:A | a:B'), or @file")
        sp.add_argument("--json", action="store_true", help="emit JSON")

    sp = sub.add_parser("check", help="parse and typecheck a term")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    for name, fn, helptext in (
        ("reduce", cmd_reduce, "print a reduction trace of at most --steps steps"),
        ("normalize", cmd_normalize, "normalize and print the trace as JSON"),
    ):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("--strategy", default="leftmost-outermost",
                        help="leftmost-outermost (lo), rightmost-innermost (ri) or seeded-random")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--overlap", choices=OVERLAPS, default="mutilde", help="lmm: μ/μ̃ priority")
        sp.add_argument("--rules", help="sym: comma-separated rule names to enable")
        sp.add_argument("--untyped", action="store_true", help="sym: skip typing (disables triv)")
        if name == "reduce":
            sp.add_argument("--steps", type=int, default=1)
        else:
            sp.add_argument("--fuel", type=int, default=None, help="default: $SYMLOG_FUEL or 100000")
            sp.add_argument("--text", action="store_true", help="print the trace as text instead of JSON")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("translate", help="translate a term (e: lmm->sym, f: sym->lmm, T: lmm->lmm)")
    common(sp, calc=False)
    sp.add_argument("--dir", choices=("e", "f", "T"), required=True)
    sp.set_defaults(fn=cmd_translate)

    sp = sub.add_parser("verify", help="run a named property suite")
    common(sp, calc=False, term=False)
    sp.add_argument("--suite", required=True, help=", ".join(SUITES))
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--max-size", type=int, default=None)
    sp.add_argument("--strict", action="store_true", help="require an explicit --seed")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("longest", help="length of the longest βπ reduction")
    common(sp, calc=False)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--untyped", action="store_true")
    sp.set_defaults(fn=cmd_longest)

    sp = sub.add_parser("gen", help="emit random well-typed terms, one per line")
    common(sp, term=False)
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--max-size", type=int, default=20)
    sp.add_argument("--show-ctx", action="store_true", help="prefix each term with its context")
    sp.add_argument("--strict", action="store_true", help="require an explicit --seed")
    sp.set_defaults(fn=cmd_gen)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (S.SymTypeError, L.LmmTypeError, L.SortError) as exc:
        print(f"type error: {exc}", file=sys.stderr)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
