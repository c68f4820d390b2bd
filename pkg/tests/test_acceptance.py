"""Acceptance criteria 1-12; one pass/fail line per criterion is printed
immediately and repeated in the terminal summary."""
import pytest

from fracorlicz.acceptance import CRITERIA, format_line

LINES = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: "criterion_%d" % c.number)
def test_criterion(criterion, capsys):
    res = criterion()
    line = format_line(res)
    LINES.append(line)
    with capsys.disabled():
        print("\n" + line)
    assert res.ok, line
