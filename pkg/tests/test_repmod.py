import random

import pytest
from hypothesis import given, strategies as st

from ihall import linalg as la
from ihall import repmod as rm
from ihall.quiver import (FormData, bound_quiver, jordan_quiver, kronecker, linear_quiver,
                          path_algebra, validate_iquiver)

from conftest import random_rep

QUIVERS = {"A2": linear_quiver(2), "A3": linear_quiver(3), "Kronecker": kronecker()}


@st.composite
def rep_pair(draw, max_dim=2):
    name = draw(st.sampled_from(sorted(QUIVERS)))
    p = draw(st.sampled_from([2, 3]))
    Q = QUIVERS[name]
    n = len(Q.vertices)
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    d1 = draw(st.lists(st.integers(0, max_dim), min_size=n, max_size=n))
    d2 = draw(st.lists(st.integers(0, max_dim), min_size=n, max_size=n))
    bq = path_algebra(Q)
    return random_rep(bq, p, d1, rng), random_rep(bq, p, d2, rng)


@given(rep_pair())
def test_euler_form_is_hom_minus_ext(pair):
    M, N = pair
    fd = FormData.of(M.bq.quiver)
    assert rm.hom_dim(M, N) - rm.ext1_dim(M, N) == fd.euler(M.dims, N.dims)


@given(rep_pair(max_dim=1))
def test_aut_count_matches_brute_force(pair):
    M, N = pair
    L = rm.direct_sum(M, N)
    if L.total_dim > 3:
        return
    assert rm.aut_count(L) == rm.aut_count_bruteforce(L)


@given(rep_pair(max_dim=1))
def test_isomorphism_matches_brute_force(pair):
    M, N = pair
    if M.dims != N.dims or M.total_dim > 3:
        return
    assert rm.is_isomorphic(M, N) == rm.is_isomorphic_bruteforce(M, N)


@pytest.mark.parametrize("name", sorted(QUIVERS))
@pytest.mark.parametrize("p", [2, 3])
def test_riedtmann_peng_integrality(name, p):
    """Every Ext count recovered from Hall numbers is a nonnegative integer."""
    bq = path_algebra(QUIVERS[name])
    table = rm.enumerate_isoclasses(bq, p, 3)
    for L in table.reps:
        for sub in _dim_vectors_below(L.dims):
            for (kM, kN), F in rm.hall_numbers_of(L, sub).items():
                c = rm.classifier_for(bq, p)
                val = rm.ext1_with_middle(c.rep(kM), c.rep(kN), L)
                assert val >= 0


def _dim_vectors_below(dims):
    import itertools
    return [d for d in itertools.product(*(range(x + 1) for x in dims))]


@pytest.mark.parametrize("p", [2, 3])
def test_submodule_count_of_semisimple(p):
    bq = path_algebra(linear_quiver(2))
    L = rm.semisimple(bq, p, [2, 1])
    subs = sum(1 for _ in rm.submodules(L, (1, 0)))
    assert subs == la.gaussian_binomial(2, 1, p)


def test_gabriel_counts_for_a3():
    # A3 has six indecomposables, positive roots
    bq = path_algebra(linear_quiver(3))
    table = rm.enumerate_isoclasses(bq, 2, 3)
    c = rm.classifier_for(bq, 2)
    indec = {k for k in table.keys if len(k) == 1 and k[0][1] == 1}
    assert len(indec) == 6


@pytest.mark.parametrize("p", [2, 3])
def test_jordan_classes_are_partitions(p):
    bq = path_algebra(jordan_quiver())
    table = rm.enumerate_isoclasses(bq, p, 4)
    counts = [len(table.by_dims((n,))) for n in range(5)]
    assert counts == [1, 1, 2, 3, 5]


def test_relations_are_checked():
    iq = validate_iquiver(linear_quiver(2))
    bq = bound_quiver(iq)
    bad = rm.FqRep(bq, 2, [1, 1], {"a1": la.as_mat([[1]], 2), "eps_1": la.as_mat([[1]], 2)})
    with pytest.raises(rm.RelationError):
        rm.check_relations(bad)


def test_ext_middle_terms_sum_to_ext_size():
    bq = path_algebra(kronecker())
    p = 3
    S1, S2 = rm.simple(bq, p, "1"), rm.simple(bq, p, "2")
    total = sum(cnt for cnt, _ in rm.extension_middle_terms(S1, S2))
    assert total == p ** rm.ext1_dim(S1, S2) == 9


def test_capacity_error_is_raised():
    bq = path_algebra(kronecker())
    with pytest.raises(rm.CapacityError):
        list(rm.extension_middle_terms(rm.simple(bq, 3, "1"), rm.simple(bq, 3, "2"), cap=3))
