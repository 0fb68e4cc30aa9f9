from pathlib import Path

import pytest

from indepcalc import Dag, Universe

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (description, passed); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def chain():
    return Dag.from_edges("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def collider():
    return Dag.from_edges("abc", [("a", "c"), ("b", "c")])


@pytest.fixture
def collider_plus():
    return Dag.from_edges("abcd", [("a", "c"), ("b", "c"), ("c", "d")])


@pytest.fixture
def detfork():
    return Dag.from_edges(["w", "d", "x", "y"], [("w", "d"), ("d", "x"), ("d", "y")], deterministic=["d"])


@pytest.fixture
def xzyw():
    return Universe(["x", "z", "y", "w"])


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        text, ok = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {text}")
