import pytest

_ac_results: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(tag, name): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = f"{marker.args[0]} {marker.args[1]}"
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _ac_results.setdefault(key, []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ac_results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ac_results, key=lambda k: int(k.split()[0][2:])):
        verdict = "PASS" if all(_ac_results[key]) else "FAIL"
        terminalreporter.write_line(f"{key}: {verdict}")
