import pytest

# criterion number -> (title, passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def record_criterion():
    def record(number, title, passed, detail):
        ACCEPTANCE[number] = (title, bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {title}  [{detail}]")
