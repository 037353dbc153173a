"""Shared pytest plumbing: the acceptance criteria summary table."""

CRITERION_RESULTS = {}


def record_criterion(number, description, passed, elapsed, detail=""):
    CRITERION_RESULTS[number] = (description, passed, elapsed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_RESULTS):
        description, passed, elapsed, detail = CRITERION_RESULTS[number]
        verdict = "PASS" if passed else "FAIL"
        line = f"criterion {number} ({description}): {verdict} in {elapsed:.2f}s"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
