ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: _order(s)):
        terminalreporter.write_line(line)


def _order(line: str):
    # "[PASS] 4a ..." -> (4, "a")
    tag = line.split("] ", 1)[1].split(" ", 1)[0]
    digits = "".join(ch for ch in tag if ch.isdigit())
    return int(digits or 0), tag
