"""Dirichlet characters, Kronecker symbols, Gauss sums."""
import math
from fractions import Fraction

import mpmath as mp
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from bolhalf.characters import (CharacterError, DirichletCharacter,
                                agree_on_coprime, all_characters,
                                char_product, chi_t_character, eps,
                                euler_phi, gauss_sum, kronecker,
                                kronecker_character, make_character,
                                psi_D_character, trivial_character,
                                twist_by_minus_one)
from bolhalf.exactnum import QQi


# ---------------------------------------------------------------------------
# Kronecker symbol against the sympy oracle
# ---------------------------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=-60, max_value=60),
       st.integers(min_value=-60, max_value=60))
def test_kronecker_matches_sympy(a, n):
    assert kronecker(a, n) == sympy.kronecker_symbol(a, n)


def test_kronecker_frozen_values():
    # quadratic reciprocity spot checks
    assert kronecker(2, 7) == 1
    assert kronecker(3, 7) == -1
    assert kronecker(-1, 5) == 1
    assert kronecker(-1, 7) == -1
    assert kronecker(2, 0) == 0
    assert kronecker(1, 0) == 1
    assert kronecker(6, 3) == 0


def test_eps_values():
    assert eps(1) == QQi(1)
    assert eps(3) == QQi(0, 1)
    assert eps(5) == QQi(1)
    assert eps(-1) == QQi(0, 1)
    with pytest.raises(CharacterError):
        eps(2)


# ---------------------------------------------------------------------------
# character structure
# ---------------------------------------------------------------------------

def test_trivial_character():
    chi = trivial_character(6)
    assert chi(1) == QQi(1) and chi(5) == QQi(1)
    assert chi(2) == QQi(0) and chi(3) == QQi(0)
    assert chi.is_trivial() and chi.is_even and chi.conductor == 1


def test_kronecker_characters():
    for disc, modulus, parity in ((-4, 4, "odd"), (5, 5, "even"),
                                  (8, 8, "even"), (-8, 8, "odd"),
                                  (-3, 3, "odd"), (12, 12, "even")):
        chi = kronecker_character(disc)
        assert chi.modulus == modulus
        assert (chi.is_odd if parity == "odd" else chi.is_even)
        assert chi.is_real and chi.is_primitive
        for u in range(1, modulus + 1):
            assert chi(u) == QQi(kronecker(disc, u))


def test_character_counts_and_orthogonality():
    for n in (5, 8, 12):
        chars = all_characters(n)
        assert len(chars) == euler_phi(n)
        # column orthogonality at u != 1
        for u in range(2, n):
            if math.gcd(u, n) != 1:
                continue
            total = QQi(0)
            for chi in chars:
                total = total + chi(u)
            assert total == QQi(0)


def test_conductor_and_primitivity():
    chi = make_character("gen:8:7=0,5=1/2")  # the character of conductor 8
    assert chi.modulus == 8
    lifted = char_product(chi, trivial_character(3))
    assert lifted.modulus == 24
    assert lifted.conductor == 8
    assert not lifted.is_primitive
    assert agree_on_coprime(lifted, chi, 24)


def test_psi_D_and_chi_t():
    psi = psi_D_character(15)
    for u in range(1, 16):
        assert psi(u) == QQi(kronecker(u, 15))
    with pytest.raises(CharacterError):
        psi_D_character(6)  # even D out of contract
    chi5 = chi_t_character(5)
    k5 = kronecker_character(5)
    assert agree_on_coprime(chi5, k5, 20)


def test_twist_by_minus_one():
    psi = kronecker_character(5)
    tw = twist_by_minus_one(psi)
    assert tw.modulus == 20
    for u in range(1, 20):
        if math.gcd(u, 20) == 1:
            assert tw(u) == psi(u) * QQi(kronecker(-1, u))
    assert tw.is_odd


# ---------------------------------------------------------------------------
# Gauss sums
# ---------------------------------------------------------------------------

def test_gauss_sum_classical_values():
    with mp.workprec(128):
        # tau(chi_p) = sqrt(p) for p = 1 mod 4, i sqrt(p) for p = 3 mod 4
        for p in (5, 13, 17):
            tau = gauss_sum(kronecker_character(p), 1, mp)
            assert abs(tau - mp.sqrt(p)) < mp.mpf("1e-30")
        for disc in (-3, -7):
            tau = gauss_sum(kronecker_character(disc), 1, mp)
            assert abs(tau - 1j * mp.sqrt(-disc)) < mp.mpf("1e-30")


def test_gauss_sum_twisted_multiplicativity():
    with mp.workprec(128):
        chi = kronecker_character(5)
        tau1 = gauss_sum(chi, 1, mp)
        for n in range(2, 8):
            # tau_chi(n) = chibar(n) tau_chi(1) for primitive chi
            expected = chi.conjugate()(n).to_mpc(mp) * tau1
            assert abs(gauss_sum(chi, n, mp) - expected) < mp.mpf("1e-30")


def test_gauss_sum_magnitude():
    with mp.workprec(128):
        for spec in ("kron:8", "kron:-8", "gen:5:2=1/4"):
            chi = make_character(spec)
            tau = gauss_sum(chi, 1, mp)
            assert abs(abs(tau) - mp.sqrt(chi.modulus)) < mp.mpf("1e-30")


# ---------------------------------------------------------------------------
# the spec mini-language
# ---------------------------------------------------------------------------

def test_make_character_specs():
    assert make_character("triv:7").is_trivial()
    assert make_character("kron:-4").modulus == 4
    assert make_character("psiD:9").modulus == 9
    assert make_character("chit:2").modulus == 8
    gen = make_character("gen:5:2=1/4")
    assert gen(2) == QQi(0, 1)
    assert gen(4) == QQi(-1)
    with pytest.raises((CharacterError, ValueError, KeyError, IndexError)):
        make_character("nope:1")


def test_theta_zero_convention_is_isolated():
    chi = trivial_character(1, theta_zero_convention=True)
    assert chi.theta_value(0) == QQi(Fraction(1, 2))
    # the override never leaks into ordinary evaluation
    assert chi(0) == QQi(1)  # mod 1: everything is a unit
    plain = trivial_character(4)
    assert plain.theta_value(0) == QQi(0) or plain.zero_value_override is None
