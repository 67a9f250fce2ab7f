import pytest

from nrcubic.bundle import DiagonalBundle
from nrcubic.function_field import fn, make_curve

F_EXPR = "(x+y+z)^3-6*x*y*z"

_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture(scope="session")
def f_curve():
    return make_curve(F_EXPR, attested=True)


@pytest.fixture(scope="session")
def refv(f_curve):
    return DiagonalBundle(
        (fn(("x", 1), ("z", 2)), fn(("y", 2), ("z", 1)), fn(("x", 1), ("y", 2)), fn((f_curve, 1))),
        "refv",
    )


@pytest.fixture(scope="session")
def lines():
    return tuple(make_curve(v) for v in "xyz")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            _criteria.setdefault(n, (title, "PASS"))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not report.failed:
        return
    for n, (title, status) in list(_criteria.items()):
        if f"criterion_{n}_" in report.nodeid and report.failed:
            _criteria[n] = (title, "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {status} - {title}")
