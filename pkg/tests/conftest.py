def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n].line())
    ok = sum(r.passed for r in RESULTS.values())
    terminalreporter.write_line(f"{ok}/{len(RESULTS)} criteria pass")
