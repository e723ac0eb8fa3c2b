import pytest
from hypothesis import given, strategies as st

from ihall import repmod as rm
from ihall.quiver import kronecker, linear_quiver, quasi_split_a3, validate_iquiver
from ihall.reflectors import (Reflection, ReflectionError, admissible, dimension_law,
                              full_faithfulness, opposite_iquiver, reflect_iquiver,
                              simple_reflection, verify_commuting_square,
                              verify_generator_images, verify_inverse, verify_multiplicative)

A2 = validate_iquiver(linear_quiver(2))
QSA3 = quasi_split_a3()
KRON = validate_iquiver(kronecker())
CASES = [("A2", A2, "2"), ("qsA3", QSA3, "2"), ("Kronecker", KRON, "2"),
         ("A3", validate_iquiver(linear_quiver(3)), "3")]
vec = st.lists(st.integers(-3, 3), min_size=3, max_size=3)


@given(vec)
def test_simple_reflection_is_an_involution_preserving_the_form(alpha):
    for iq, i in ((QSA3, "2"), (QSA3, "1"), (validate_iquiver(linear_quiver(3)), "2")):
        beta = simple_reflection(iq, i, alpha)
        assert simple_reflection(iq, i, beta) == tuple(alpha)
        fd = iq.forms
        assert fd.symmetric(beta, beta) == fd.symmetric(alpha, alpha)


def test_reflected_quiver():
    r = reflect_iquiver(A2, "2")
    assert r.quiver.is_source("2") and r.quiver.is_sink("1")
    assert opposite_iquiver(opposite_iquiver(QSA3)) == QSA3
    with pytest.raises(ReflectionError):
        reflect_iquiver(A2, "1")
    assert admissible(QSA3, "1") and admissible(A2, "1")


def test_functor_kills_sink_simple():
    R = Reflection(A2, "2", 2)
    assert R.functor(rm.simple(R.src.bq, 2, "2")).total_dim == 0


def test_torus_image():
    R = Reflection(QSA3, "2", 3)
    alpha = (1, 0, -1)
    assert R(R.src.K(alpha)) == R.dst.K(simple_reflection(QSA3, "2", alpha))


@pytest.mark.parametrize("name,iq,sink", CASES, ids=[c[0] for c in CASES])
def test_dimension_law(name, iq, sink):
    rep = dimension_law(iq, sink, 2, max_dim=3)
    assert rep.ok, rep.text()


@pytest.mark.parametrize("name,iq,sink", CASES, ids=[c[0] for c in CASES])
def test_generator_images(name, iq, sink):
    rep = verify_generator_images(iq, sink, 2)
    assert rep.ok, rep.text()


@pytest.mark.parametrize("name,iq,sink", CASES[:3], ids=[c[0] for c in CASES[:3]])
def test_inverse(name, iq, sink):
    rep = verify_inverse(iq, sink, 2)
    assert rep.ok, rep.text()


def test_hom_preservation():
    rep = full_faithfulness(A2, "2", 2, max_dim=2)
    assert rep.ok, rep.text()


def test_multiplicative():
    rep = verify_multiplicative(QSA3, "2", 2, samples=5)
    assert rep.ok, rep.text()


@pytest.mark.parametrize("parity", [0, 1])
def test_commuting_square_kronecker(parity):
    rep = verify_commuting_square(KRON, "2", 2, parity)
    assert rep.ok, rep.text()


def test_isolated_sink_has_no_resolution():
    from ihall.quiver import rank_two
    R = Reflection(validate_iquiver(rank_two(0, 0)), "2", 2)
    with pytest.raises(ReflectionError):
        R(R.src.simple("2"))
