import pytest

from moserkit import catalogue as cat

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def record(number, ok, detail=""):
        ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda x: int(x.split()[1].rstrip(':'))):
            terminalreporter.write_line(line)


@pytest.fixture
def graph():
    return lambda spec: cat.parse_graph(spec).graph
