import random
import sys
from pathlib import Path

import pytest

from mmppf.cli import PACKAGE_CORPUS
from mmppf.model import load_file

CORPUS = PACKAGE_CORPUS


def corpus(name: str) -> Path:
    return CORPUS / name


@pytest.fixture
def toggle():
    return load_file(corpus("two-state-toggle.mmppf.json"))


@pytest.fixture
def rng():
    return random.Random(20261016)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
