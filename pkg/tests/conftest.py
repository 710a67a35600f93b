import pytest
from hypothesis import settings

# exact arithmetic makes per-example times uneven; no deadlines
settings.register_profile("unfold", deadline=None)
settings.load_profile("unfold")

_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the end-of-run acceptance summary."""

    def record(name: str, ok: bool, detail: str = "", known: bool = False):
        status = "PASS" if ok else ("FAIL (known, see notes)" if known else "FAIL")
        line = f"{status}  {name}" + (f"  [{detail}]" if detail else "")
        _LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
