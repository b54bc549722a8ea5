"""Gaussian-rational coefficient ring."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bolhalf.exactnum import QQI_I, QQI_ONE, QQI_ZERO, QQi, qqi_root_of_unity

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=64)
gaussians = st.builds(QQi, rationals, rationals)


def test_basic_arithmetic():
    a = QQi(Fraction(1, 2), Fraction(-3, 4))
    b = QQi(2, 5)
    assert a + b == QQi(Fraction(5, 2), Fraction(17, 4))
    assert a - b == QQi(Fraction(-3, 2), Fraction(-23, 4))
    # (1/2 - 3i/4)(2 + 5i) = 1 + 15/4 + i(5/2 - 3/2)
    assert a * b == QQi(Fraction(19, 4), 1)
    assert (a / b) * b == a
    assert -a == QQi(Fraction(-1, 2), Fraction(3, 4))


def test_powers_and_conjugation():
    assert QQI_I ** 2 == QQi(-1)
    assert QQI_I ** -1 == QQi(0, -1)
    z = QQi(3, 4)
    assert z * z.conjugate() == QQi(25)
    assert z.abs2() == 25
    assert z ** 0 == QQI_ONE


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QQI_ONE / QQI_ZERO


def test_coerce_rejects_floats():
    with pytest.raises(TypeError):
        QQi.coerce(1.5 + 0j)


def test_roots_of_unity():
    assert qqi_root_of_unity(Fraction(0)) == QQI_ONE
    assert qqi_root_of_unity(Fraction(1, 4)) == QQI_I
    assert qqi_root_of_unity(Fraction(1, 2)) == QQi(-1)
    assert qqi_root_of_unity(Fraction(3, 4)) == QQi(0, -1)
    assert qqi_root_of_unity(Fraction(5, 4)) == QQI_I  # reduced mod 1
    with pytest.raises(ValueError):
        qqi_root_of_unity(Fraction(1, 3))


@settings(max_examples=50, deadline=None)
@given(gaussians, gaussians, gaussians)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@settings(max_examples=50, deadline=None)
@given(gaussians)
def test_field_inverses(a):
    if not a.is_zero():
        assert a * (QQI_ONE / a) == QQI_ONE
    assert a + (-a) == QQI_ZERO


@settings(max_examples=30, deadline=None)
@given(gaussians)
def test_float_realization_consistency(a):
    import mpmath as mp
    z = a.to_mpc(mp)
    w = complex(a)
    assert abs(complex(z) - w) < 1e-10 * (1 + abs(w))
