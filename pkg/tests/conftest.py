import pathlib

import pytest

from intervalmc import parse_kripke

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "intervalmc" / "data"


@pytest.fixture(scope="session")
def kequiv():
    return parse_kripke((DATA / "kequiv.kripke").read_text())


@pytest.fixture(scope="session")
def scheduler():
    return parse_kripke((DATA / "scheduler.kripke").read_text())


@pytest.fixture(scope="session")
def kequiv_path():
    return DATA / "kequiv.kripke"
