from __future__ import annotations

import json

import pytest

from symlog.cli import EXIT_BUDGET, EXIT_ERROR, EXIT_FAIL, EXIT_OK, run

BETA = "(\\x:a. (y * x) * z)"
OMEGA = "(\\x:a. (x * x) * \\x:a. (x * x))"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_prints_bottom(capsys):
    code, out, _ = call(capsys, "check", "--calc", "sym", BETA, "--ctx", "y:~a, z:a")
    assert code == EXIT_OK and out.strip() == "#"


def test_check_lmm(capsys):
    code, out, _ = call(capsys, "check", "--calc", "lmm", "< y | k >", "--ctx", "y:a | k:a")
    assert code == EXIT_OK and out.strip() == "c-judgment OK"
    code, out, _ = call(capsys, "check", "--calc", "lmm", "\\x:a. x")
    assert out.strip() == "a -> a"


def test_translate_f(capsys):
    code, out, _ = call(capsys, "translate", "--dir", "f", "(p * q)", "--ctx", "p:~a, q:a")
    assert code == EXIT_OK and out.strip() == "< q | tilde(p) >"


def test_translate_e_and_T_json(capsys):
    code, out, _ = call(capsys, "translate", "--dir", "e", "< y | k >", "--ctx", "y:a | k:a", "--json")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["dir"] == "e" and obj["term"] == "(!k * y)"
    code, out, _ = call(capsys, "translate", "--dir", "T", "< y | k >", "--ctx", "y:a | k:a")
    assert out.strip() == "< y | tilde(!k) >"


def test_verify_zero_samples(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "sim_f", "--samples", "0")
    assert code == EXIT_OK and "0/0" in out


def test_verify_small_suite_json(capsys):
    code, out, _ = call(capsys, "verify", "--suite", "typing_e", "--samples", "5", "--seed", "1", "--json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_OK and len(lines) >= 1


def test_verify_strict_needs_seed(capsys):
    code, _, err = call(capsys, "verify", "--suite", "sn", "--samples", "3", "--strict")
    assert code == EXIT_ERROR and "--seed" in err


def test_unknown_suite(capsys):
    assert call(capsys, "verify", "--suite", "nope", "--samples", "1")[0] == EXIT_ERROR


def test_parse_error_has_position(capsys):
    code, _, err = call(capsys, "check", "(x * )")
    assert code == EXIT_ERROR and "1:6" in err


def test_type_error(capsys):
    code, _, err = call(capsys, "check", "(x * y)", "--ctx", "x:a, y:a")
    assert code == EXIT_ERROR and "type error" in err


def test_reduce_and_normalize(capsys):
    code, out, _ = call(capsys, "reduce", BETA, "--ctx", "y:~a, z:a", "--steps", "1", "--json")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["steps"][0]["rule"] == "beta" and obj["steps"][0]["term"] == "(y * z)"
    code, out, _ = call(capsys, "normalize", BETA, "--ctx", "y:~a, z:a")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["status"] == "normal"


def test_normalize_fuel_exhaustion(capsys):
    code, out, _ = call(capsys, "normalize", OMEGA, "--untyped", "--fuel", "5")
    assert code == EXIT_BUDGET and json.loads(out)["status"] == "fuel-exhausted"


def test_normalize_lmm_overlap(capsys):
    src = "< mu c:a. < y | b > | mut x:a. < z | k > >"
    ctx = "y:a, z:a | b:a, k:a"
    _, mu_out, _ = call(capsys, "normalize", "--calc", "lmm", src, "--ctx", ctx, "--overlap", "mu", "--text")
    _, mut_out, _ = call(capsys, "normalize", "--calc", "lmm", src, "--ctx", ctx, "--text")
    assert mu_out != mut_out


def test_longest(capsys):
    code, out, _ = call(capsys, "longest", BETA, "--ctx", "y:~a, z:a")
    assert code == EXIT_OK and out.strip() == "1"
    code, out, _ = call(capsys, "longest", OMEGA, "--untyped")
    assert code == EXIT_FAIL and out.strip() == "cycle-found"


def test_gen_is_deterministic(capsys):
    _, a, _ = call(capsys, "gen", "--samples", "5", "--seed", "3", "--show-ctx")
    _, b, _ = call(capsys, "gen", "--samples", "5", "--seed", "3", "--show-ctx")
    assert a == b and len(a.splitlines()) == 5
    _, c, _ = call(capsys, "gen", "--calc", "lmm", "--samples", "3", "--seed", "3")
    assert len(c.splitlines()) == 3


def test_context_from_file(capsys, tmp_path):
    f = tmp_path / "ctx.txt"
    f.write_text("y:~a, z:a")
    t = tmp_path / "term.txt"
    t.write_text(BETA)
    code, out, _ = call(capsys, "check", f"@{t}", "--ctx", f"@{f}")
    assert code == EXIT_OK and out.strip() == "#"


def test_missing_file_is_an_error(capsys):
    assert call(capsys, "check", "@/nonexistent/file")[0] == EXIT_ERROR


def test_bad_arguments(capsys):
    assert call(capsys, "frobnicate")[0] == EXIT_ERROR
    assert call(capsys, "reduce", BETA, "--untyped", "--strategy", "sideways")[0] == EXIT_ERROR
