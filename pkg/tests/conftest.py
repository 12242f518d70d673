import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    # One visible pass/fail line per acceptance criterion.
    if report.when == "call" and item.get_closest_marker("acceptance"):
        terminal = item.config.pluginmanager.get_plugin("terminalreporter")
        if terminal is not None:
            verdict = "PASS" if report.passed else "FAIL"
            terminal.write_line(f"ACCEPTANCE {item.name}: {verdict}")
