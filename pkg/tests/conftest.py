def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(test_acceptance.VERDICTS):
        terminalreporter.write_line(line)
