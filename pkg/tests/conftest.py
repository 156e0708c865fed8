import pytest


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def record(request):
    """Collects one summary line per acceptance criterion."""
    lines = request.config.acceptance_lines

    def add(line):
        lines.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
