from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ihall.exactarith import LaurentPoly
from ihall.symfun import (JordanIHall, JordanModules, Partition, SymFun, aut_formula, b_coeff,
                          hl_P, hl_Q, ihl_genfun_coeff, ihl_Q, jordan_iso_check, partitions,
                          steinitz_image, steinitz_product_check)

T = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
compositions = st.lists(st.integers(0, 3), min_size=1, max_size=3)


def P(*parts):
    return Partition(parts)


def test_known_values():
    assert hl_Q(P(1, 1)) == SymFun.q(1, 1) + SymFun.q(2) * (T - ONE)
    assert hl_Q(P(2, 1)) == SymFun.q(2, 1) + SymFun.q(3) * (T - ONE)
    assert ihl_Q(P(1, 1)) == SymFun.q(1, 1) + SymFun.q(2) * (T - ONE) + SymFun.theta() * (T - ONE)
    assert b_coeff(P(1, 1)) == (ONE - T) * (ONE - T * T)
    assert hl_Q(P(3)) == SymFun.q(3)


def test_partition_helpers():
    lam = P(3, 1, 1)
    assert lam.size == 5 and lam.n() == 3 and lam.multiplicities() == {3: 1, 1: 2}
    assert [len(list(partitions(n))) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert P(2, 1).dominates(P(1, 1, 1)) and not P(1, 1, 1).dominates(P(2, 1))
    with pytest.raises(ValueError):
        Partition((1, 2))


@given(compositions)
def test_operator_route_matches_generating_function(alpha):
    assert ihl_Q(alpha) == ihl_genfun_coeff(alpha)
    assert hl_Q(alpha) == ihl_genfun_coeff(alpha, theta=False)


@given(compositions)
def test_theta_zero_is_hall_littlewood(alpha):
    assert ihl_Q(alpha).at_theta_zero() == hl_Q(alpha)


@given(compositions)
def test_theta_degree_bookkeeping(alpha):
    assert ihl_Q(alpha).degree_ok(sum(alpha))


def test_t_zero_gives_complete_monomial():
    # at t = 0 each raising factor is 1 - R
    f = hl_Q(P(1, 1)).specialize(10 ** 9)
    assert set(f.terms) == {(0, (1, 1)), (0, (2,))}


@pytest.mark.parametrize("q", [2, 3])
def test_aut_formula(q):
    jm = JordanModules(q)
    for n in range(1, 5):
        for lam in partitions(n):
            assert jm.aut_count(lam) == aut_formula(lam, q)


@pytest.mark.parametrize("q", [2, 3])
def test_steinitz_small(q):
    jm = JordanModules(q)
    for mu, nu in [(P(1), P(1)), (P(2), P(1)), (P(1), P(1, 1))]:
        rep = steinitz_product_check(mu, nu, q, jm)
        assert rep.ok, rep.text()


def test_steinitz_negative_control():
    """Using Q_lambda in place of P_lambda breaks the product rule."""
    q = 2
    lhs = steinitz_image(P(1), q) * steinitz_image(P(1), q)
    wrong = hl_Q(P(1, 1)).specialize(q).scale(Fraction(1, q)) + hl_Q(P(2)).specialize(q)
    assert lhs != wrong


@pytest.mark.parametrize("q", [2, 3])
def test_jordan_iso_small(q):
    alg = JordanIHall(q)
    for n in range(1, 4):
        for lam in partitions(n):
            rep = jordan_iso_check(lam, q, alg)
            assert rep.ok, rep.text()


def test_jordan_iso_negative_control():
    alg = JordanIHall(2)
    lam = P(1, 1)
    got = alg.phi(alg.express(lam))
    # dropping the theta part of the target must fail
    assert got != hl_Q(lam).specialize(2).scale(Fraction(2) ** (lam.size + lam.n()))


def test_hl_p_divides_by_b():
    assert hl_P(P(1, 1)) * b_coeff(P(1, 1)) == hl_Q(P(1, 1))
