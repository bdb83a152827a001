"""Acceptance criteria 1-9, exact checks with wall-clock budgets.

Each criterion prints one PASS/FAIL line (collected into the pytest terminal
summary; run this file directly to see the lines without pytest).
"""

import subprocess
import sys
import time

import pytest

from thompson import acceptance

BUDGETS = {1: 1.0, 2: 10.0, 3: 5.0, 4: 30.0, 5: 20.0, 6: 30.0, 7: 1.0, 8: 10.0}
RESULT_LINES: list[str] = []

DETERMINISM_COMMANDS = [
    ["selftest"],
    ["witness-f", "--conjugator", "x0", "x1^2", "b*x0^-3"],
    ["witness-t", "--conjugator", "rot(1/2)", "x0*rot(3/8)", "b^(rot(1/4))"],
    ["ubiquity", "--depth", "1", "x0", "transplant(x0,[0,1/2])"],
    ["ubiquity", "--depth", "6", "b"],
    ["free-cert", "transplant(x0,[0,3/4])", "transplant(x0,[0,3/4])^(rot(1/2))"],
    ["random", "--leaves", "20", "--seed", "20240601"],
]


def _record(number, name, passed, seconds, budget=None):
    mark = "PASS" if passed else "FAIL"
    limit = f", budget {budget:g}s" if budget else ""
    line = f"[{mark}] criterion {number}: {name} ({seconds:.2f}s{limit})"
    RESULT_LINES.append(line)
    print(line)


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(check):
    cfg = acceptance.AcceptanceConfig()
    start = time.perf_counter()
    result = check(cfg)
    seconds = time.perf_counter() - start
    budget = BUDGETS[result.number]
    ok = result.passed and seconds < budget
    _record(result.number, result.name, ok, seconds, budget)
    assert result.passed, result.detail
    assert seconds < budget, f"took {seconds:.2f}s"


def _cli(argv):
    proc = subprocess.run([sys.executable, "-m", "thompson", *argv],
                          capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_criterion_9_determinism():
    start = time.perf_counter()
    mismatched = []
    for argv in DETERMINISM_COMMANDS:
        first, second = _cli(argv), _cli(argv)
        if first != second or first[0] != 0:
            mismatched.append(argv[0])
    _record(9, "byte-identical CLI output across runs", not mismatched,
            time.perf_counter() - start)
    assert not mismatched


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
