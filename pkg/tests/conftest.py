from __future__ import annotations

import os
import shutil

import pytest
from hypothesis import HealthCheck, settings

from changepat.cli import corpus_path
from changepat.vcs import build_fixture_repo

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the pass/fail line of one acceptance criterion."""

    def record(number: int, passed: bool, detail: str) -> None:
        _criteria[number] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        passed, detail = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def corpus_repo(tmp_path):
    """Materialize a bundled snapshot corpus as a git repository."""
    if shutil.which("git") is None:
        pytest.skip("git executable not available")

    def make(name: str):
        repo = tmp_path / name
        build_fixture_repo(corpus_path(name), repo)
        return repo

    return make
