import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from ggk.fixtures import example_dissection, example_pair
from ggk.random_gen import random_pair, random_string

settings.register_profile("ggk", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ggk")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pair_from_seed(seed: int, max_vertices: int = 7, min_vertices: int = 1):
    return random_pair(random.Random(seed), max_vertices, min_vertices=min_vertices)[0]


def strings_from_seed(seed: int, pair, count: int = 2, max_len: int = 5, over: str = "primal"):
    rng = random.Random(seed)
    return [random_string(rng, pair, max_len, over=over) for _ in range(count)]


@pytest.fixture
def fx():
    return example_pair()


@pytest.fixture
def fx_dissection():
    return example_dissection()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
