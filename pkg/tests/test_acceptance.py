"""The twelve acceptance criteria, each at its stated time limit.

Every criterion prints one PASS/FAIL line (collected into the terminal
summary as well, so they show without ``-s``).
"""

import subprocess
import sys
import time

import pytest

from comodlim.selftest import TITLES, CriterionResult, Harness

SEED = 42
# seconds; None where no limit is stated
LIMITS = {1: 10, 2: 30, 3: 60, 4: 30, 5: 60, 6: None, 7: None, 8: None, 9: None, 10: None, 11: None,
          12: 300}
RESULTS: list[str] = []


@pytest.fixture(scope="module")
def harness():
    return Harness(SEED)


def _report(n: int, ok: bool, seconds: float, detail: str) -> None:
    limit = LIMITS[n]
    bound = f" (limit {limit}s)" if limit else ""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d} {TITLES[n]}: {seconds:.2f}s{bound} {detail}".rstrip()
    RESULTS.append(line)
    print(line)


def _run(harness, n: int) -> CriterionResult:
    res = harness.run([n])[0]
    limit = LIMITS[n]
    in_time = limit is None or res.seconds < limit
    detail = f"{res.cases} cases"
    if res.note:
        detail += f"; {res.note}"
    if res.failures:
        detail += f"; {len(res.failures)} failures, first: {res.failures[0]}"
    _report(n, res.passed and in_time, res.seconds, detail)
    assert not res.fatal, res.failures
    assert res.passed, res.failures[:5]
    assert in_time, f"took {res.seconds:.1f}s, limit {limit}s"
    return res


@pytest.mark.parametrize("n", range(1, 12))
def test_criterion(harness, n):
    _run(harness, n)


def test_criterion_12_dsl_and_full_selftest(harness):
    res = harness.run([12])[0]
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "comodlim.cli", "selftest", "--seed", str(SEED)],
                          capture_output=True, text=True, timeout=LIMITS[12] + 60)
    elapsed = time.perf_counter() - start
    ok = res.passed and proc.returncode == 0 and elapsed < LIMITS[12]
    detail = f"corpus {res.cases} files; selftest exit {proc.returncode} in {elapsed:.1f}s"
    _report(12, ok, res.seconds + elapsed, detail)
    assert res.passed, res.failures
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < LIMITS[12]
