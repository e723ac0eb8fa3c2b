from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ihall.exactarith import (ONE, V, LaurentPoly, QuadCoeff, RationalFunction, ZERO, q_binom,
                              q_double_factorial, q_factorial, q_int, qc_vpow, specialize, vpow)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
laurent = st.dictionaries(st.integers(-4, 4), coeffs, max_size=4).map(LaurentPoly)
nonzero_laurent = laurent.filter(lambda p: not p.is_zero())


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO


@given(laurent, nonzero_laurent)
def test_rational_function_cancels(a, b):
    f = RationalFunction(a * b, b)
    assert f == RationalFunction(a)
    assert f * RationalFunction(b) == RationalFunction(a * b)


@given(nonzero_laurent, nonzero_laurent)
def test_rational_function_normal_form_is_canonical(a, b):
    # equal values built two ways must have identical numerator and denominator
    x = RationalFunction(a, b)
    y = RationalFunction(a * V * V, b * V * V)
    assert (x.num, x.den) == (y.num, y.den)


@given(laurent, laurent, st.sampled_from([2, 3, 5]))
def test_specialize_is_a_ring_map(a, b, q):
    assert specialize(a * b, q) == specialize(a, q) * specialize(b, q)
    assert specialize(a + b, q) == specialize(a, q) + specialize(b, q)


@given(st.integers(-6, 6), st.sampled_from([2, 3]))
def test_specialized_v_power(k, q):
    assert specialize(vpow(k), q) == qc_vpow(k, q)
    assert qc_vpow(2, q) == QuadCoeff(q, 0, q)


@given(st.fractions(max_denominator=5), st.fractions(max_denominator=5), st.sampled_from([2, 3, 7]))
def test_quadratic_field_inverse(a, b, q):
    x = QuadCoeff(a, b, q)
    if x.is_zero():
        return
    assert x * x.inverse() == QuadCoeff(1, 0, q)


def test_no_floats():
    with pytest.raises(TypeError):
        LaurentPoly({0: 0.5})
    with pytest.raises(TypeError):
        QuadCoeff(0.5, 0, 2)


@given(st.integers(0, 8))
def test_quantum_integer(n):
    assert q_int(n) * (V - vpow(-1)) == vpow(n) - vpow(-n)
    assert q_int(n).bar() == q_int(n)


@given(st.integers(1, 8), st.integers(1, 7))
def test_q_binomial_pascal(m, r):
    # [m, r] = v^{-r}[m-1, r] + v^{m-r}[m-1, r-1]
    assert q_binom(m, r) == vpow(-r) * q_binom(m - 1, r) + vpow(m - r) * q_binom(m - 1, r - 1)


def test_small_values():
    assert q_int(2) == V + vpow(-1)
    assert q_factorial(3) == q_int(2) * q_int(3)
    assert q_binom(4, 2) == q_factorial(4).exact_div(q_factorial(2) * q_factorial(2))
    assert q_binom(-1, 2) == ONE
    assert q_double_factorial(6) == q_int(2) * q_int(4) * q_int(6)


def test_specialize_rational_function_rejects_pole():
    with pytest.raises(ZeroDivisionError):
        specialize(RationalFunction(ONE, V * V - 2), 2)
