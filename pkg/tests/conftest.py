import json
from pathlib import Path

import pytest

GOLDEN = Path(__file__).parent / "golden"
SCHEMAS = Path(__file__).parent.parent / "src" / "twisted_poisson" / "schemas"

_ACCEPTANCE: dict = {}


def load_golden(name):
    return json.loads((GOLDEN / name).read_text())


def load_schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


@pytest.fixture
def acceptance_record():
    def record(number, title, ok, detail=""):
        _ACCEPTANCE[number] = (title, ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        line = f"{'PASS' if ok else 'FAIL'}  [{n:>2}] {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
