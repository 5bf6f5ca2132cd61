"""Acceptance criteria 1-9: each runs at its stated scale and time limit and logs one PASS/FAIL line."""
import json
import time
from pathlib import Path

import pytest

from ggk.cli import main
from ggk.gentle_core import pair_from_json
from ggk.verify import (
    check_cross_duality,
    check_dual_involution,
    check_int_dim,
    check_koszul,
    check_morphisms,
    check_resolutions,
    check_smoothing,
    check_strong_formality,
    collect_threads,
    koszul_corpus,
)

from conftest import ACCEPTANCE_LINES

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
SEED = 2026

EXPECTED_ARROWS = {
    ("a1", "1", "2"), ("a2", "2", "3"), ("a3", "4", "3"), ("a4", "4", "6"),
    ("a5", "5", "2"), ("a6", "6", "5"), ("a7", "6", "7"), ("a8", "1", "7"),
}
EXPECTED_RELATIONS = {("a4", "a6"), ("a5", "a2")}
EXPECTED_DUAL_RELATIONS = {("a2*", "a1*"), ("a5*", "a6*"), ("a7*", "a4*")}


def _log(number, name, ok, detail, seconds, limit):
    status = "PASS" if ok and seconds < limit else "FAIL"
    ACCEPTANCE_LINES.append(f"{status} criterion {number} ({name}): {detail}, {seconds:.2f}s (limit {limit}s)")


def _run_criterion(number, limit, check, minimum):
    result = check()
    _log(number, result.name, result.passed and result.checked >= minimum,
         f"{result.checked} instances, {len(result.mismatches)} mismatches", result.seconds, limit)
    assert result.passed, result.mismatches[:3]
    assert all(m for m in result.mismatches)  # a failing criterion carries a reproducer
    assert result.checked >= minimum
    assert result.seconds < limit
    return result


def _cli_json(capsys, *argv):
    assert main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def test_criterion_1_fixture_reproduction(capsys):
    start = time.perf_counter()
    primal = _cli_json(capsys, "from-dissection", str(FIXTURES / "paper-surface.json"))
    dual = _cli_json(capsys, "dual", str(FIXTURES / "paper-surface.json"))
    seconds = time.perf_counter() - start
    pair_from_json(primal)
    arrows = {(a["id"], a["from"], a["to"]) for a in primal["arrows"]}
    checks = [
        primal["vertices"] == [str(i) for i in range(1, 8)],
        arrows == EXPECTED_ARROWS,
        {a["degree"] for a in primal["arrows"]} == {0},
        {tuple(r) for r in primal["relations"]} == EXPECTED_RELATIONS,
        {(a["id"], a["from"], a["to"]) for a in dual["arrows"]} == {(i + "*", t, s) for i, s, t in EXPECTED_ARROWS},
        {tuple(r) for r in dual["relations"]} == EXPECTED_DUAL_RELATIONS,
        {a["degree"] for a in dual["arrows"]} == {1},
    ]
    _log(1, "fixture reproduction", all(checks), f"{sum(checks)}/{len(checks)} exact matches", seconds, 1)
    assert all(checks)
    assert seconds < 1


def test_criterion_2_dual_involution():
    _run_criterion(2, 5, lambda: check_dual_involution(SEED, count=100, max_vertices=12), 100)


def test_criterion_3_resolutions():
    # the fixture plus 50 random pairs, every vertex
    _run_criterion(3, 30, lambda: check_resolutions(SEED, count=50), 7 + 50)


def test_criterion_4_strong_formality():
    _run_criterion(4, 30, lambda: check_strong_formality(SEED, count=50), 51)


def test_criterion_5_intersections_equal_dimensions():
    _run_criterion(5, 60, lambda: check_int_dim(SEED, fixture_pairs=30, random_pairs=100), 120)


def test_criterion_6_smoothing():
    threads = collect_threads(SEED, 12)
    assert len(threads) >= 10
    assert {len(t.strings) for _, t in threads} == {2, 3, 4}
    _run_criterion(6, 60, lambda: check_smoothing(SEED, count=12, probes=5), 10)


def test_criterion_7_koszul_dimensions():
    corpus = koszul_corpus(SEED, 24)
    assert sum(len(eta) == 1 for _, _, eta in corpus) >= 5
    _run_criterion(7, 60, lambda: check_koszul(SEED, count=24), 20)


def test_criterion_8_cross_duality():
    _run_criterion(8, 60, lambda: check_cross_duality(SEED, count=24), 20)


def test_criterion_9_morphism_algebra():
    # check_morphisms reports a mismatch when fewer than 10 composable triples exist
    _run_criterion(9, 10, lambda: check_morphisms(SEED, min_triples=10), 10)


@pytest.mark.parametrize("seed", [0, 7])
def test_criteria_over_prime_field(seed):
    from ggk.verify import run_suite

    report = run_suite("all", seed, "p")
    assert report.passed, [r.line() for r in report.results if not r.passed]
