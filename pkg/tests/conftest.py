import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        line, failures, notes = RESULTS[number]
        terminalreporter.write_line(line)
        for f in failures:
            terminalreporter.write_line(f"    failed: {f}")
        for n in notes:
            terminalreporter.write_line(f"    note: {n}")
