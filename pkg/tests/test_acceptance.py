"""Acceptance criteria at their stated sizes.

Each test records a ``CRITERION n: PASS|FAIL ...`` line; the lines are
printed in the terminal summary (see conftest.py) and when this module is
run directly with ``python -m tests.test_acceptance``.
"""

from __future__ import annotations

import time

import pytest

from symlog.suites import SuiteResult, run_suite

SEED = 0
RESULTS: dict[int, str] = {}

# criterion -> (title, [(suite, samples, max_size)], time limit in seconds or None)
CRITERIA: dict[int, tuple[str, list[tuple[str, int, int | None]], float | None]] = {
    1: ("type preservation", [("type_preservation", 1000, 30)], 60.0),
    2: ("strong normalization", [("sn", 500, 40), ("longest", 200, 15)], None),
    3: ("substitution closure", [("subst_closure", 200, 12)], None),
    4: ("eta/Triv postponement", [("postpone_e", 150, 12), ("postpone_triv", 150, 12)], None),
    5: ("simulation e", [("sim_e", 500, None)], None),
    6: ("simulation f", [("sim_f", 500, None)], None),
    7: ("round trips", [("roundtrip_fe", 500, None), ("roundtrip_ef", 500, None)], None),
    8: ("typing transport", [("typing_e", 500, None), ("typing_f", 500, None)], None),
    9: ("subformula property", [("subformula", 200, None)], None),
    10: ("non-confluence witness", [("critical_pair", 1, None)], None),
    11: ("oracle monotonicity", [("monotonicity", 200, 12)], None),
}


def evaluate(n: int) -> tuple[bool, str, list[SuiteResult]]:
    title, suites, limit = CRITERIA[n]
    start = time.perf_counter()
    results = [run_suite(name, samples, SEED, size) for name, samples, size in suites]
    elapsed = time.perf_counter() - start
    ok = all(r.ok for r in results) and (limit is None or elapsed < limit)
    parts = "; ".join(r.summary(timing=False) for r in results)
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {title} [{parts}] ({elapsed:.1f} s)"
    return ok, line, results


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, line, results = evaluate(n)
    RESULTS[n] = line
    print(line)
    failures = [f for r in results for f in r.failures[:3]]
    assert ok, line + "\n" + "\n".join(failures)


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(evaluate(n)[1], flush=True)
