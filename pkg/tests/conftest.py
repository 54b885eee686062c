import os
from pathlib import Path

import pytest

from halgeo import library
from halgeo.cli import run

ROOT = Path(__file__).resolve().parent.parent
ALGEBRAS = ROOT / "algebras"
SYSTEMS = ROOT / "systems"


@pytest.fixture
def lib():
    return library.get


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.delenv("HALGEO_CAP", raising=False)
    monkeypatch.chdir(ROOT)

    def call(*argv):
        return run([str(a) for a in argv])
    return call


# one summary line per acceptance criterion
_criteria = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::test_criterion_", 1)[1]
    if report.when == "call" or report.outcome != "passed":
        prev = _criteria.get(name, "PASS")
        _criteria[name] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria):
        num, _, label = name.partition("_")
        terminalreporter.write_line("criterion %2d %-28s %s" % (int(num), label.replace("_", " "),
                                                                _criteria[name]))
