import itertools
import random

import numpy as np
from hypothesis import given, strategies as st

from ihall import linalg as la

PRIMES = st.sampled_from([2, 3, 5])


@st.composite
def matrices(draw, max_side=4):
    p = draw(PRIMES)
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return la.as_mat(rows, p, shape=(r, c)), p


@given(matrices())
def test_rank_nullity(mp):
    a, p = mp
    N = la.nullspace(a, p)
    assert la.rank(a, p) + N.shape[1] == a.shape[1]
    if N.size:
        assert not ((a @ N) % p).any()


@given(matrices())
def test_column_space_rank(mp):
    a, p = mp
    assert la.column_space(a, p).shape[1] == la.rank(a, p)


@given(st.integers(1, 4), PRIMES, st.integers(0, 10 ** 6))
def test_inverse(n, p, seed):
    rnd = random.Random(seed)
    while True:
        a = la.as_mat([[rnd.randrange(p) for _ in range(n)] for _ in range(n)], p)
        if la.rank(a, p) == n:
            break
    assert (la.inverse(a, p) @ a % p == la.eye(n)).all()


def test_gaussian_binomial_counts_subspaces():
    for p in (2, 3):
        for n in range(0, 4):
            for k in range(0, n + 1):
                assert sum(1 for _ in la.rref_subspaces(n, k, p)) == la.gaussian_binomial(n, k, p)


def test_gl_order_by_count():
    for p in (2, 3):
        n = 2
        count = sum(1 for e in itertools.product(range(p), repeat=4)
                    if la.rank(la.as_mat([e[:2], e[2:]], p), p) == 2)
        assert count == la.gl_order(n, p)


def test_nilpotent():
    assert la.is_nilpotent(la.as_mat([[0, 1], [0, 0]], 3), 3)
    assert not la.is_nilpotent(la.eye(2), 3)
