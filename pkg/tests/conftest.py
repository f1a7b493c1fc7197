"""Replays the acceptance gate's per-criterion verdict lines in the
terminal summary, where pytest's capture cannot swallow them."""

criterion_lines = []


def pytest_terminal_summary(terminalreporter):
    if criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)
