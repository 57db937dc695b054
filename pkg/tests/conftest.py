import pytest

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.get_closest_marker("criterion"):
        number, title = item.get_closest_marker("criterion").args
        measured = dict(item.user_properties).get("measured")
        _ACCEPTANCE.append((number, title, report.passed, measured))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, measured in sorted(_ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        extra = f"  [{measured}]" if measured is not None else ""
        terminalreporter.write_line(f"{status}  criterion {number:>2}: {title}{extra}")
