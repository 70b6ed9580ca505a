from pathlib import Path

import pytest

from lpecleave import corpus_path, parse_spec

GOLDEN = Path(__file__).parent / "golden"


def load(name):
    return parse_spec(corpus_path(name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def machine():
    return load("machine.alp")


@pytest.fixture(scope="session")
def abp():
    return load("abp.alp")
