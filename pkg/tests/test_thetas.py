"""Unary theta series, their metadata, and the weight-1/2 basis enumeration."""
from fractions import Fraction

import mpmath as mp
import pytest

from bolhalf.characters import kronecker, kronecker_character, trivial_character
from bolhalf.exactnum import QQi
from bolhalf.forms import HalfWeight
from bolhalf.thetas import (ThetaContext, ThetaError, enumerate_serre_stark,
                            fricke_theta_constants, theta_series)


def test_theta0_trivial_coefficients():
    f, meta = theta_series("theta0", trivial_character(1), 150)
    assert f.coeff(0) == QQi(Fraction(1, 2))
    for e in range(1, 150):
        root = int(mp.sqrt(e))
        expected = QQi(1) if root * root == e else QQi(0)
        assert f.coeff(e) == expected
    assert meta.weight == HalfWeight(1)
    assert meta.level == 4
    assert meta.character.is_trivial()


def test_theta0_nontrivial_character():
    psi = kronecker_character(5)
    f, meta = theta_series("theta0", psi, 120)
    assert f.coeff(0) == QQi(0)          # nontrivial psi: no constant term
    assert f.coeff(1) == QQi(1)
    assert f.coeff(4) == QQi(-1)         # psi(2) = kron(5,2) = -1
    assert f.coeff(16) == QQi(1)
    assert f.coeff(25) == QQi(0)
    assert meta.level == 100


def test_theta1_coefficients():
    psi = kronecker_character(-4)
    f, meta = theta_series("theta1", psi, 120)
    for n in range(1, 11):
        assert f.coeff(n * n) == QQi(n * kronecker(-4, n))
    assert f.coeff(2) == QQi(0)
    assert meta.weight == HalfWeight(3)
    assert meta.level == 64
    # the nebentypus carries the extra odd twist, so it is even
    assert meta.character.is_even


def test_serre_stark_member_exponents():
    psi = trivial_character(1)
    f, meta = theta_series("serre_stark", psi, 100, t=5)
    assert f.coeff(0) == QQi(Fraction(1, 2))
    assert f.coeff(5) == QQi(1)
    assert f.coeff(20) == QQi(1)
    assert f.coeff(45) == QQi(1)
    assert f.coeff(80) == QQi(1)
    assert f.coeff(1) == QQi(0) and f.coeff(25) == QQi(0)
    assert meta.level == 20


def test_theta_kind_and_parity_validation():
    with pytest.raises(ThetaError):
        theta_series("theta0", kronecker_character(-4), 50)
    with pytest.raises(ThetaError):
        theta_series("theta1", kronecker_character(5), 50)
    with pytest.raises(ThetaError):
        theta_series("theta2", trivial_character(1), 50)
    with pytest.raises(ThetaError):
        theta_series("theta0", trivial_character(1), 0)


def test_context_validation_and_level():
    ctx = ThetaContext(kronecker_character(5), kronecker_character(-4))
    assert ctx.N0 == 5 and ctx.N1 == 4
    assert ctx.level == 1600  # lcm(4*25, 4*16)
    with pytest.raises(ThetaError):
        ThetaContext(kronecker_character(-4), kronecker_character(5))
    t0 = ctx.theta0(30)
    t1 = ctx.theta1(30)
    assert t0.coeff(1) == QQi(1)
    assert t1.coeff(9) == QQi(3 * kronecker(-4, 3))


def test_basis_enumeration_level_100():
    pairs = enumerate_serre_stark(5, kronecker_character(5))
    assert [(psi.modulus, t) for psi, t in pairs] == [(5, 1), (1, 5)]


def test_basis_enumeration_trivial():
    pairs = enumerate_serre_stark(1, trivial_character(1))
    assert [(psi.modulus, t) for psi, t in pairs] == [(1, 1)]
    # a prime-squared level picks up the rescaled members
    pairs9 = enumerate_serre_stark(3, trivial_character(3))
    assert [(psi.modulus, t) for psi, t in pairs9] == [(1, 1), (1, 9)]


def test_fricke_constants_unit_modulus():
    with mp.workprec(96):
        c = fricke_theta_constants(trivial_character(1), "theta0")
        assert abs(c - mp.exp(-1j * mp.pi / 4)) < mp.mpf("1e-25")
        for psi, kind in ((kronecker_character(5), "theta0"),
                          (kronecker_character(8), "theta0"),
                          (kronecker_character(-4), "theta1"),
                          (kronecker_character(-8), "theta1")):
            c = fricke_theta_constants(psi, kind)
            assert abs(abs(c) - 1) < mp.mpf("1e-25")


def test_fricke_constants_validation():
    with pytest.raises(ThetaError):
        fricke_theta_constants(kronecker_character(-4), "theta0")
    with pytest.raises(ThetaError):
        fricke_theta_constants(trivial_character(4), "theta0")
