from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from gyrokit.finite import cyclic, from_table, load_table
from gyrokit.topo import load_model

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parents[1] / "src" / "gyrokit" / "data"

ACCEPTANCE_LINES: list[str] = []

KLEIN4 = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def fixture8():
    return load_table(DATA / "fixture8.json")


@pytest.fixture(scope="session")
def z6():
    return cyclic(6)


@pytest.fixture(scope="session")
def z4():
    return cyclic(4)


@pytest.fixture(scope="session")
def klein4():
    return from_table(KLEIN4)


def model_files() -> list[Path]:
    return sorted(DATA.glob("*-model.json"))


@pytest.fixture(scope="session")
def models():
    return {p.name: load_model(p) for p in model_files()}


def golden(name: str):
    return json.loads((DATA / name).read_text())
