"""One test per reproduction criterion; each prints a PASS/FAIL line."""

import pytest

from coalgtower.acceptance import CHECKS, run_check


@pytest.mark.parametrize("number", [n for n, _, _ in CHECKS], ids=[name.replace(" ", "_") for _, name, _ in CHECKS])
def test_criterion(number, capsys):
    result = run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.ok, result.detail
