import re

import numpy as np
import pytest
from hypothesis import settings

from strata_lab.field import GF
from strata_lab.geometry import stratified_sample
from strata_lab.morphism import LABELS

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

F101 = GF(101)

_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def samples():
    """Five accepted members of every stratum over GF(101)."""
    out = {}
    for label in LABELS:
        children = np.random.SeedSequence(4242).spawn(5)
        out[label] = [stratified_sample(label, c, F101).morphism for c in children]
    return out


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[n] = (m.group(2).replace("_", " "), report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        name, outcome = _criteria[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {name}")
