"""Acceptance gate: every numbered criterion at its pinned tolerance.

Each test runs one criterion end to end via stalab.verify and prints its
pass/fail line with the measured values (visible with pytest -s or in
the captured output of a failure).
"""

import pytest

from stalab import verify


@pytest.mark.parametrize("cid", sorted(verify.CHECKS_BY_ID))
def test_criterion(cid):
    result = verify.CHECKS_BY_ID[cid]()
    print(result.line())
    assert result.passed, result.line()
