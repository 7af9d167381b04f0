"""Acceptance criteria, one test and one printed PASS/FAIL line each."""
import pytest

from gmspace.acceptance import RUNNERS


@pytest.mark.parametrize("runner", RUNNERS, ids=[f"criterion_{n}" for n in range(1, len(RUNNERS) + 1)])
def test_criterion(runner, capsys):
    result = runner(0, False)
    with capsys.disabled():
        print("\n" + result.line(timings=True))
    assert result.passed, result.detail
