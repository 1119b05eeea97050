import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import acc_registry  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if acc_registry.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acc_registry.LINES, key=lambda s: int(s.split()[1][2:])):
            terminalreporter.write_line(line)
