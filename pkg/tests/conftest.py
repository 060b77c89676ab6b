import json
import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

TIMING_ENV = "RERADMIMO_EXAMPLE_TIMING"


def pytest_configure(config):
    config.addinivalue_line("markers", "example: worked input/output example with a stated tolerance")
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criterion")
    config._example_times = {}


def pytest_runtest_logreport(report):
    # setup + call time of example-marked tests, for the unit-suite runtime budget
    if "example" in report.keywords and report.when in ("setup", "call"):
        times = pytest_runtest_logreport.config._example_times
        entry = times.setdefault(report.nodeid, {"seconds": 0.0, "outcome": "passed"})
        entry["seconds"] += report.duration
        if report.outcome != "passed":
            entry["outcome"] = report.outcome


def pytest_sessionstart(session):
    pytest_runtest_logreport.config = session.config


def pytest_sessionfinish(session):
    path = os.environ.get(TIMING_ENV)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(session.config._example_times, fh)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
