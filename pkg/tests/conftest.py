import random

import pytest

from weylbs.scalars import UniPoly
from weylbs.weyl import WeylElement


def random_element(rng: random.Random, nvars: int, nterms: int = 3, maxexp: int = 2,
                   sdeg: int = 0) -> WeylElement:
    terms = {}
    for _ in range(nterms):
        a = tuple(rng.randint(0, maxexp) for _ in range(nvars))
        b = tuple(rng.randint(0, maxexp) for _ in range(nvars))
        c = UniPoly([rng.randint(-3, 3) for _ in range(sdeg + 1)])
        terms[(a, b)] = c
    return WeylElement(nvars, terms)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
