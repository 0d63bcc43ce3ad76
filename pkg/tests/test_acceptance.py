"""Acceptance battery: runs every criterion at its stated tolerance.

One pass/fail line per criterion is printed (visible with `pytest -s`,
or through `jcsim verify`, which drives the same checks).
"""

import pytest

from jcsim.acceptance import run_all_criteria


@pytest.fixture(scope="module")
def results():
    return run_all_criteria()


@pytest.mark.parametrize("number", range(1, 11))
def test_criterion(results, number):
    result = results[number - 1]
    print(f"{'PASS' if result.passed else 'FAIL'}  criterion {result.number}: {result.name}")
    for line in result.lines:
        print(f"      {line}")
    assert result.passed, f"criterion {number} ({result.name}) failed:\n" + "\n".join(result.lines)
