import os
import random

import pytest

from liecheck.cases import CLASSICAL_FAMILIES, get_case
from liecheck.data import golden

SMALL_FAMILIES = ("G", "FII", "EIV", "EI", "FI", "SP4R")
BIG_FAMILIES = ("EII", "EV", "EVI", "EVIII", "EIX")


def long_runs_enabled() -> bool:
    return os.environ.get("LIECHECK_LONG", "") == "1"


def require_long_runs():
    if not long_runs_enabled():
        pytest.skip("multi-hour scan; set LIECHECK_LONG=1 to include it")


def sample_case(family: str):
    return get_case(family, 2 if family in CLASSICAL_FAMILIES else None)


@pytest.fixture(scope="session")
def golden_data():
    return golden()


@pytest.fixture
def rng():
    return random.Random(20250814)
