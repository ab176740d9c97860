import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_LINES = []


class Criterion:
    """Collects named checks; prints and records one PASS/FAIL line."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.checks = []

    def check(self, ok, detail):
        self.checks.append((bool(ok), detail))
        return ok

    @property
    def passed(self):
        return bool(self.checks) and all(ok for ok, _ in self.checks)

    def line(self):
        failed = [d for ok, d in self.checks if not ok]
        tail = "; ".join(failed) if failed else "; ".join(d for _, d in self.checks[:4])
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number:>2} ({self.title}): {tail}"

    def finish(self):
        text = self.line()
        print(text)
        _LINES.append(text)
        assert self.passed, text


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for text in sorted(_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(text)
