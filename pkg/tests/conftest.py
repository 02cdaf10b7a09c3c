import pytest

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance check under its criterion number."""

    def record(number: int, ok: bool, detail: str) -> bool:
        ACCEPTANCE.setdefault(number, []).append((bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        failed = [d for ok, d in checks if not ok]
        verdict = "PASS" if not failed else "FAIL"
        shown = failed if failed else [d for _, d in checks]
        detail = "; ".join(shown[:4]) + (f"; ... {len(shown) - 4} more" if len(shown) > 4 else "")
        terminalreporter.write_line(f"criterion {number}: {verdict} ({detail})")
