from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from floral_ehrhart import orthotope_model as om
from floral_ehrhart.sp_core import build_class_table

DATA = Path(str(resources.files("floral_ehrhart") / "data"))


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def table():
    return build_class_table(6)


@pytest.fixture(scope="session")
def table4():
    return build_class_table(4)


@pytest.fixture(scope="session")
def orthogon():
    return om.read_file(str(DATA / "orthogon_19.txt"))


@pytest.fixture(scope="session")
def torus():
    return om.read_file(str(DATA / "torus_28.txt"))


@pytest.fixture(scope="session")
def checkerboard():
    return om.read_file(str(DATA / "checkerboard.txt"))


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): end-to-end acceptance criterion")


_gate: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        previous = _gate.get(number, (title, "PASS"))[1]
        _gate[number] = (title, "FAIL" if failed or previous == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _gate:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_gate):
        title, status = _gate[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}  {title}")
