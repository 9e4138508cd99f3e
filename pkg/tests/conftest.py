import pytest

from mntgen.families import generate
from mntgen.reference import corrected_rows, printed_rows

_ACCEPTANCE: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = marker.args
    entry = _ACCEPTANCE.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if report.passed:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        entry = _ACCEPTANCE[number]
        status = "PASS" if not entry["failed"] else "FAIL"
        line = f"ACCEPTANCE {number:>2} {status}  {entry['title']}  ({entry['passed']} checks passed"
        if entry["failed"]:
            line += f", {len(entry['failed'])} failed: {', '.join(entry['failed'])}"
        terminalreporter.write_line(line + ")")


@pytest.fixture(scope="session")
def generated():
    return {k: generate(k, 6) for k in (3, 4, 6)}


@pytest.fixture(scope="session")
def rows_by_id():
    return {row.id: row for row in corrected_rows()}


@pytest.fixture(scope="session")
def printed_by_id():
    return {row.id: row for row in printed_rows()}


@pytest.fixture(scope="session")
def k6h1(rows_by_id):
    """t = -x + 1, r = x^2 + x + 1, q = x^2 + 1."""
    return rows_by_id["k6-h1-1"].family()
