"""Acceptance criteria at full scale, one test (and one summary line) each.

Run directly (``python3 tests/test_acceptance.py``) to print just the lines.
"""
import subprocess
import sys

import pytest

from finimag.acceptance import CRITERIA, run_criterion

RESULTS = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    r = run_criterion(number, "full", seed=0)
    RESULTS[number] = r
    print(r.line())
    assert r.passed, r.detail


def test_selftest_cli_twice_is_byte_identical():
    cmd = [sys.executable, "-m", "finimag.cli", "selftest", "small", "--json"]
    runs = [subprocess.run(cmd, capture_output=True, text=True, check=False) for _ in range(2)]
    assert [r.returncode for r in runs] == [0, 0]
    assert runs[0].stdout == runs[1].stdout
    assert '"passed": true' in runs[0].stdout


if __name__ == "__main__":
    ok = True
    for k in sorted(CRITERIA):
        r = run_criterion(k, "full")
        print(f"{r.line()} ({r.seconds:.1f}s)", flush=True)
        ok &= r.passed
    sys.exit(0 if ok else 1)
