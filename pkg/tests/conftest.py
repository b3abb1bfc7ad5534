import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def formula_rows():
    return json.loads((GOLDEN / "formula_rows.json").read_text(encoding="utf-8"))


_CRITERIA = {}


def record_criterion(number, title, passed, detail):
    _CRITERIA[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title} ({detail})")
