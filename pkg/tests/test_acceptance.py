"""One PASS/FAIL line per acceptance criterion.

Under pytest the lines are collected and printed in the terminal summary;
run this file directly to print them without pytest.
"""
import json
import sys

import pytest

from netorient.suite import CRITERIA, run_acceptance

RESULTS: dict[int, str] = {}


def _line(num: int, passed: bool, detail: dict) -> str:
    return f"{'PASS' if passed else 'FAIL'} criterion {num}: {json.dumps(detail, sort_keys=True)}"


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    report = run_acceptance(only={num})
    (case,) = report.cases
    line = _line(num, case.passed, case.detail)
    RESULTS[num] = line
    print(line)
    assert case.passed, line


if __name__ == "__main__":
    report = run_acceptance()
    for case in report.cases:
        print(_line(int(case.case_id.split("/")[1]), case.passed, case.detail))
    sys.exit(0 if report.passed else 1)
