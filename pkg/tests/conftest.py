from __future__ import annotations

from pathlib import Path

import pytest

from intentrunner import default_stub_table
from intentrunner.harness import default_fixture_root

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def stub_table():
    return default_stub_table()


@pytest.fixture(scope="session")
def fixture_root() -> Path:
    return default_fixture_root()


@pytest.fixture(scope="session")
def golden_code(fixture_root) -> str:
    return (fixture_root / "intention-1" / "trial-1.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_trace() -> str:
    return (DATA_DIR / "trace_intention1.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def golden_prompt() -> str:
    return (DATA_DIR / "prompt_intention1.txt").read_text(encoding="utf-8")


def corpus_sources() -> list:
    """All shipped fixture outputs, as (name, extracted code) pairs."""
    from intentrunner.backends import extract_code

    sources = []
    for path in sorted(default_fixture_root().rglob("trial-*.txt")):
        sources.append((f"{path.parent.name}/{path.name}", extract_code(path.read_text())))
    return sources
