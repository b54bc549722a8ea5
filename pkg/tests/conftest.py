"""Shared fixtures and the acceptance-summary terminal hook."""
import sys
import os

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE_RESULTS: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for rep in sorted(ACCEPTANCE_RESULTS, key=lambda r: r["criterion"]):
        verdict = "PASS" if rep["passed"] else "FAIL"
        terminalreporter.write_line(
            f"criterion {rep['criterion']:2d} [{rep['name']}]: {verdict} "
            f"({rep['elapsed']:.1f}s)")
