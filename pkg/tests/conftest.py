from __future__ import annotations

import random

import pytest

from mban.graph import DiGraph, clique_with_loops, hub, rotation


@pytest.fixture
def rot3() -> DiGraph:
    return rotation(3)


@pytest.fixture
def k3() -> DiGraph:
    return clique_with_loops(3)


@pytest.fixture
def hub5() -> DiGraph:
    return hub(5)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
