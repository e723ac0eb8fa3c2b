import random

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ihall import repmod as rm
from ihall.quiver import (jordan_quiver, kronecker, linear_quiver, point_quiver, quasi_split_a3,
                          rank_two, validate_iquiver)

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


IQUIVERS = {
    "A1": lambda: validate_iquiver(point_quiver()),
    "A2": lambda: validate_iquiver(linear_quiver(2)),
    "A1xA1": lambda: validate_iquiver(rank_two(0, 0)),
    "A3": lambda: validate_iquiver(linear_quiver(3)),
    "qsA3": quasi_split_a3,
    "Kronecker": lambda: validate_iquiver(kronecker()),
    "Jordan": lambda: validate_iquiver(jordan_quiver()),
}


@pytest.fixture(params=["A2", "qsA3", "Kronecker"])
def small_iquiver(request):
    return IQUIVERS[request.param]()


def random_rep(bq, p, dims, rng: random.Random) -> rm.FqRep:
    """Random representation of a quiver without relations."""
    maps = {}
    for a in bq.arrows:
        s, t = bq.vertices.index(a.source), bq.vertices.index(a.target)
        m = np.array([[rng.randrange(p) for _ in range(dims[s])] for _ in range(dims[t])],
                     dtype=np.int64).reshape(dims[t], dims[s])
        maps[a.label] = m
    return rm.FqRep(bq, p, list(dims), maps)
