from __future__ import annotations

import random

import pytest

from irrsched.samples import example_timetable, no_balanced_cycle_timetable

_acceptance: dict[int, list[tuple[str, str]]] = {}


@pytest.fixture
def fix8():
    return example_timetable()


@pytest.fixture
def no_cycle8():
    return no_balanced_cycle_timetable()


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    crit = int(name.split("_")[2])
    _acceptance.setdefault(crit, []).append((name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_acceptance):
        parts = _acceptance[crit]
        # a skipped part (missing external data) neither passes nor fails
        ran = [outcome for _, outcome in parts if outcome != "skipped"]
        verdict = "SKIP" if not ran else "PASS" if all(o == "passed" for o in ran) else "FAIL"
        detail = ", ".join(f"{n.split('_', 3)[3]}={o}" for n, o in parts)
        tr.write_line(f"criterion {crit}: {verdict}  ({detail})")
