"""Acceptance gate: every structural identity at its stated tolerance.

Runs the full randomized residual suite (fixed seed, 20 trials per
criterion, matrices up to 8-by-8, all four reference weights) and asserts
each criterion individually, printing one pass/fail line per criterion.
Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import pytest

from hardybeta.acceptance import CRITERIA, RunConfig, run_suite


@pytest.fixture(scope="module")
def suite_results():
    cfg = RunConfig(seed=7, trials=20)
    results = run_suite(cfg)
    for res in results:
        print(res.line())
    return {r.number: r for r in results}


@pytest.mark.parametrize("number,name", [
    (1, "stein-identity"),
    (2, "gamma-gramian-duality"),
    (3, "cholesky-colligation"),
    (4, "kernel-identities"),
    (5, "inner-family"),
    (6, "scalar-golden-blaschke"),
    (7, "integer-alpha-identity"),
    (8, "model-roundtrip"),
    (9, "coincidence"),
    (10, "functional-model-checks"),
    (11, "system-transfer-consistency"),
    (12, "contractive-multiplier"),
])
def test_criterion(suite_results, number, name):
    res = suite_results[number]
    assert res.name == name
    assert res.passed, res.line()


def test_every_criterion_covered(suite_results):
    assert len(CRITERIA) == 12
    assert sorted(suite_results) == list(range(1, 13))
