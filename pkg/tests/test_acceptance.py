"""Acceptance criteria 1-9, one line each on stdout (run with ``-s`` to see them)."""
import pytest

from torsionlab.acceptance import CRITERIA, run_all


@pytest.fixture(scope="module")
def results():
    res = run_all()
    print()
    for r in res:
        print(r.line())
    return {r.number: r for r in res}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(results, number):
    r = results[number]
    assert r.passed, r.line()


def test_total_time_under_a_minute(results):
    assert sum(r.seconds for r in results.values()) < 60
