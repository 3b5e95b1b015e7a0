"""Acceptance criteria 1-9 at full sample counts.

Each test prints one ``[criterion k] PASS|FAIL`` line to the terminal before
asserting, so the lines survive pytest's output capture.
"""
import json
import time
from fractions import Fraction

import pytest

from hkcheck.report import SuiteConfig, replay_failure, run_suite

pytestmark = pytest.mark.acceptance


@pytest.fixture
def emit(capsys):
    def _emit(k: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'}  {title}  {detail}".rstrip())
        return ok

    return _emit


def _failed_checks(reports):
    return sorted({f["check"] for r in reports for f in r.failures})


def _summary(reports):
    return "; ".join(
        f"n={r.config['n']} r={r.config['rank']} {r.config['backend']} "
        f"{r.counts['pass']}/{r.counts['fail']}/{r.counts['degenerate']}"
        for r in reports
    )


@pytest.fixture(scope="module")
def lemma52_reports():
    t0 = time.perf_counter()
    reports = [
        run_suite(SuiteConfig("lemma52", n=n, rank=r, samples=200, seed=0, backend="exact"))
        for n in (2, 3)
        for r in (2, 3, 4)
    ]
    return reports, time.perf_counter() - t0


def test_criterion_1_lemma26(emit):
    t0 = time.perf_counter()
    reports = [
        run_suite(SuiteConfig("lemma26", n=n, samples=500, seed=0, backend=bk, tolerance=1e-9))
        for n in (1, 2, 3)
        for bk in ("exact", "float")
    ]
    elapsed = time.perf_counter() - t0
    ok = all(r.passed and r.counts["pass"] == 500 for r in reports) and elapsed <= 30.0
    emit(1, "Lambda_L(eta) = 0 on invariant 2-forms", ok, f"{elapsed:.1f}s (limit 30s) [{_summary(reports)}] failed={_failed_checks(reports)}")
    assert ok


def test_criterion_2_lemma52_positivity(emit, lemma52_reports):
    reports, elapsed = lemma52_reports
    ok = all(r.passed and r.counts["pass"] == 200 for r in reports) and elapsed <= 300.0
    emit(2, "r2 ^ omega^{N-3} codim-1 positive; sum A_kk = 0; A_kk = -A_k+1,k+1", ok, f"{elapsed:.1f}s (limit 300s) [{_summary(reports)}] failed={_failed_checks(reports)}")
    assert ok


def test_criterion_3_b_c_cross_check(emit, lemma52_reports):
    reports, _ = lemma52_reports
    bc = {"b_formula", "c_ii", "basis_bridge", "c_ii_ym"}
    failed = set(_failed_checks(reports))
    discrepancy = {r.config["n"]: r.constants.get("b_direct_over_formula") for r in reports}
    positivity_ok = "codim1_positive" not in failed
    ok = not (failed & bc) and positivity_ok and all(v == 1 for v in discrepancy.values())
    emit(3, "B_ii direct == formula, C_ii >= 0 three ways", ok, f"discrepancy constants {discrepancy} failed={sorted(failed & bc)}")
    assert ok


def test_criterion_4_lemma72(emit):
    reports = [run_suite(SuiteConfig("lemma72", n=n, samples=500, seed=0)) for n in (1, 2, 3)]
    ok = all(r.passed and r.counts["pass"] == 500 for r in reports)
    emit(4, "weight split == K-type split; K20 roundtrip; real structure", ok, f"[{_summary(reports)}] failed={_failed_checks(reports)}")
    assert ok


def test_criterion_5_lemma74(emit):
    reports = [run_suite(SuiteConfig("lemma74", n=n, samples=200, seed=0)) for n in (1, 2, 3)]
    rerun = [run_suite(SuiteConfig("lemma74", n=n, samples=20, seed=99)) for n in (1, 2, 3)]
    c = [r.constants["c_n"] for r in reports]
    stable = c == [r.constants["c_n"] for r in rerun]
    positive = all(Fraction(v) > 0 for v in c)
    consts = [r.constants["degree_identity_constant"] for r in reports]
    same_const = consts == [r.constants["degree_identity_constant"] for r in rerun]
    ok = (
        all(r.passed and r.counts["pass"] == 200 for r in reports)
        and c[0] == "1/1"
        and positive
        and stable
        and same_const
    )
    emit(5, "c_1 = 1; c_n > 0 and stable; E^(N-1,N-1) ~ omega^(N-1); one degree constant", ok, f"c_n={c} degree constants={consts} failed={_failed_checks(reports)}")
    assert ok


def test_criterion_6_lemma92(emit):
    reports = [run_suite(SuiteConfig("lemma92", n=n, samples=500, seed=0)) for n in (1, 2, 3)]
    ok = all(r.passed and r.counts["pass"] == 500 for r in reports)
    emit(6, "eta_+ positive and nonzero; -K(eta) positive", ok, f"[{_summary(reports)}] failed={_failed_checks(reports)}")
    assert ok


def test_criterion_7_sec9(emit):
    reports = [run_suite(SuiteConfig("sec9", n=n, rank=3, samples=200, seed=0)) for n in (1, 2, 3)]
    ok = all(r.passed and r.counts["pass"] == 200 for r in reports)
    emit(7, "Theta' identity; i Tr(A ^ A_perp) >= 0; degree drop > 0 iff A != 0", ok, f"[{_summary(reports)}] failed={_failed_checks(reports)}")
    assert ok


def test_criterion_8_hodge_riemann(emit):
    reports = [run_suite(SuiteConfig("hodge_riemann", n=n, rank=r, samples=100, seed=0)) for n in (1, 2, 3) for r in (2, 3)]
    ratios = {(r.config["n"], r.config["rank"]): r.constants["ratio"] for r in reports}
    per_n = {}
    for (n, _), v in ratios.items():
        per_n.setdefault(n, set()).add(v)
    single = all(len(v) == 1 for v in per_n.values())
    positive = all(Fraction(v) > 0 for v in ratios.values())
    conv = {r.config["n"]: (r.constants["expected_value"], r.constants["convention_constant"]) for r in reports}
    ok = all(r.passed and r.counts["pass"] == 100 for r in reports) and single and positive
    emit(8, "Hodge-Riemann ratio one positive rational per N", ok, f"ratios={ {n: sorted(v) for n, v in per_n.items()} } (expected value, convention constant)={conv}")
    assert ok


def test_criterion_9_fault_injection(emit):
    caught = []
    for suite in ("conventions", "lemma72", "lemma52"):
        rep = run_suite(SuiteConfig(suite, n=2, rank=2, samples=5, seed=0, fault_inject=True))
        if rep.passed:
            continue
        failure = json.loads(rep.to_json())["failures"][0]
        ok, _ = replay_failure(failure, rep.config)
        if not ok:
            caught.append(f"{suite}:{failure['check']}")
    ok = bool(caught)
    emit(9, "--fault-inject caught with a replayable counterexample", ok, f"caught by {caught}")
    assert ok
