import json
import pathlib

import pytest

from coxbunch import bunched as B
from coxbunch.cli import parse_document

FIXTURES = pathlib.Path(__file__).parent / "fixtures"

# lines printed by the acceptance gate, echoed once more in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def load(name):
    """Validated (presentation, bunch) for a fixture file name without suffix."""
    doc = parse_document(json.loads((FIXTURES / f"{name}.json").read_text()))
    return doc.presentation, B.validate_fbunch(doc.presentation, doc.bunch)


@pytest.fixture
def g24_quotient():
    return load("g24_quotient")


@pytest.fixture
def g24_plain():
    return load("g24_plain")


@pytest.fixture
def g24_weighted():
    return load("g24_weighted")


@pytest.fixture(scope="session")
def e6():
    return load("e6_surface")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
