import pytest
from hypothesis import given, strategies as st

from ihall.quiver import (FormData, Quiver, QuiverError, bound_quiver, diagonal_iquiver,
                          iquiver_from_json, iquiver_to_json, kronecker, linear_quiver,
                          quasi_split_a3, rank_two, validate_iquiver)

from conftest import IQUIVERS

dims = st.lists(st.integers(-3, 3), min_size=2, max_size=2)


@given(st.integers(0, 3), st.integers(0, 3), dims, dims)
def test_euler_form_is_bilinear_and_symmetrizes_to_cartan(a, b, x, y):
    fd = FormData.of(rank_two(a, b))
    assert fd.symmetric(x, y) == fd.symmetric(y, x)
    assert fd.euler(x, y) + fd.euler(y, x) == sum(
        x[i] * fd.cartan[i][j] * y[j] for i in range(2) for j in range(2))
    assert fd.cartan_entry("1", "2") == -(a + b)


def test_euler_matrix_of_a2():
    fd = FormData.of(linear_quiver(2))
    assert fd.euler_matrix == ((1, -1), (0, 1))


def test_rejects_bad_quivers():
    with pytest.raises(QuiverError):
        Quiver.build(["1", "1"], [])
    with pytest.raises(QuiverError):
        Quiver.build(["1"], [("x", "1", "1")])
    with pytest.raises(QuiverError):
        Quiver.build(["1"], [("a", "1", "2")])


def test_rejects_tau_not_an_involutive_automorphism():
    with pytest.raises(QuiverError):
        validate_iquiver(linear_quiver(2), {"1": "2", "2": "1"})
    with pytest.raises(QuiverError):
        validate_iquiver(linear_quiver(3), {"1": "2", "2": "3", "3": "1"})


@pytest.mark.parametrize("name", sorted(IQUIVERS))
def test_json_round_trip(name):
    iq = IQUIVERS[name]()
    assert iquiver_from_json(iquiver_to_json(iq)) == iq


def test_bound_quiver_relations():
    iq = quasi_split_a3()
    bq = bound_quiver(iq)
    # one eps arrow per vertex, one nilpotency relation per vertex, one commutation per arrow
    assert len(bq.arrows) == 2 + 3
    assert len(bq.relations) == 3 + 2
    eps1 = [a for a in bq.arrows if a.label == "eps_1"][0]
    assert (eps1.source, eps1.target) == ("1", "3")


def test_diagonal_iquiver_swaps_copies():
    iq = diagonal_iquiver(linear_quiver(2))
    assert set(iq.vertices) == {"1", "2", "1'", "2'"}
    assert all(iq.t(v) != v for v in iq.vertices)
    assert iq.t("1") == "1'"


def test_split_vertices():
    iq = quasi_split_a3()
    assert iq.is_split("2") and not iq.is_split("1")
    assert validate_iquiver(kronecker()).is_split("1")
