from hypothesis import settings

settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

# criterion number -> (title, passed, seconds, note), filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, seconds, note = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{status} criterion {number:2d}: {title} ({seconds:.2f}s, {note})")
