"""Shared fixtures: the pipeline artifacts and the full verification report.

Both are expensive (seconds), so they are built once per session and every
test reads from them.  Tests that need fresh objects build their own.
"""

import pathlib
import sys
from time import perf_counter

import pytest

SRC = pathlib.Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from chowcheck import run_pipeline, verify_paper  # noqa: E402


@pytest.fixture(scope="session")
def artifacts():
    """Full pipeline at the default convention, degree bound 12."""
    return run_pipeline()


@pytest.fixture(scope="session")
def report_and_time():
    """One complete verification run plus its wall-clock duration."""
    t0 = perf_counter()
    report = verify_paper()
    return report, perf_counter() - t0


@pytest.fixture(scope="session")
def report(report_and_time):
    return report_and_time[0]


@pytest.fixture(scope="session")
def claim_rows(report):
    return {row["id"]: row for row in report["claims"]}
