import time

import pytest

_RESULTS = {}


class AcceptanceRecorder:
    """Collects one pass/fail line per acceptance criterion."""

    def __init__(self, number, title, budget):
        self.number = number
        self.title = title
        self.budget = budget
        self.start = time.perf_counter()
        self.details = []
        self.ok = True

    def check(self, cond, detail):
        self.details.append(("ok " if cond else "FAIL ") + detail)
        self.ok &= bool(cond)
        return bool(cond)

    def finish(self):
        elapsed = time.perf_counter() - self.start
        self.check(elapsed < self.budget, f"runtime {elapsed:.1f}s < {self.budget:g}s")
        status = "PASS" if self.ok else "FAIL"
        line = f"[{status}] criterion {self.number:2d}: {self.title} ({elapsed:.1f}s)"
        _RESULTS[self.number] = (line, self.details)
        print(line)
        for d in self.details:
            print("    " + d)
        failed = [d for d in self.details if d.startswith("FAIL")]
        assert not failed, "; ".join(failed)


@pytest.fixture
def criterion():
    def make(number, title, budget):
        return AcceptanceRecorder(number, title, budget)

    return make


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        line, details = _RESULTS[n]
        terminalreporter.write_line(line)
        for d in details:
            terminalreporter.write_line("    " + d)
