"""Composite theta-twisted derivative operators, brackets, and the lift."""
from fractions import Fraction

import pytest

from bolhalf.bol_ops import (OperatorError, classical_bol, delta0_closed_form,
                             delta_a, rankin_cohen, selberg_lift,
                             theta_map_half)
from bolhalf.characters import kronecker_character, trivial_character
from bolhalf.exactnum import QQi
from bolhalf.forms import FormMeta, HalfWeight
from bolhalf.qseries import delta_cusp, from_coeff_dict
from bolhalf.thetas import ThetaContext, theta_series

TRIV_CTX = ThetaContext(trivial_character(1), kronecker_character(-4))
CHI5_CTX = ThetaContext(kronecker_character(5), kronecker_character(-4))


def series_from(entries, P):
    return from_coeff_dict({Fraction(e): QQi(c) for e, c in entries.items()},
                           P, M=1, mode="exact")


def test_classical_bol():
    f = series_from({0: 5, 1: 2, 3: -1}, 8)
    g = classical_bol(f, HalfWeight(6))  # D^2
    assert g.coeff(0) == QQi(0)
    assert g.coeff(1) == QQi(2)
    assert g.coeff(3) == QQi(-9)
    with pytest.raises(OperatorError):
        classical_bol(f, HalfWeight(5))


def test_delta_sends_theta0_to_theta1_small():
    # the k = 3/2 identity at modest precision, a in {0, 1}
    P = 60
    t0 = TRIV_CTX.theta0(P + 10)
    t1 = TRIV_CTX.theta1(P + 1)
    for a in (0, 1, -1):
        out, meta = delta_a(t0, HalfWeight(3), a, TRIV_CTX, P + 1)
        assert out == t1.truncated(out.precision)
        assert meta.weight == HalfWeight(3)


def test_delta_metadata():
    f = series_from({1: 1, 2: 3}, 40)
    out, meta = delta_a(f, HalfWeight(5), 1, CHI5_CTX, 30)
    assert meta.weight == HalfWeight(5)
    assert meta.level == CHI5_CTX.level
    # trivial psi times (-1/.) times psi1 psi0: the odd parts cancel
    assert meta.character.conductor == 5
    assert meta.character.is_even


def test_delta_grouping_consistency():
    f = series_from({-1: 2, 1: 1, 4: -3}, 25)
    left, _ = delta_a(f, HalfWeight(7), 2, CHI5_CTX, 20, grouping="left")
    right, _ = delta_a(f, HalfWeight(7), 2, CHI5_CTX, 20, grouping="right")
    assert left == right
    with pytest.raises(OperatorError):
        delta_a(f, HalfWeight(7), 2, CHI5_CTX, 20, grouping="middle")


def test_delta_rational_a_puiseux():
    f = series_from({1: 1, 3: -2}, 20)
    out, meta = delta_a(f, HalfWeight(3), Fraction(2, 3), CHI5_CTX, 15)
    assert meta is None            # no modular metadata off the integer points
    assert out.M % 3 == 0          # exponents genuinely leave the integer lattice


def test_delta_honest_truncation():
    # input known to low precision: output precision reflects it, no padding
    f = series_from({3: 1}, 4)
    out, _ = delta_a(f, HalfWeight(3), 1, CHI5_CTX, 50)
    assert out.precision < 50
    assert not out.is_zero()


def test_closed_form_matches_direct_fixed_input():
    f = series_from({-2: 3, 0: 1, 1: -5, 4: 2}, 30)
    direct, _ = delta_a(f, HalfWeight(7), 0, CHI5_CTX, 30)
    closed = delta0_closed_form(f, HalfWeight(7), CHI5_CTX)
    common = min(direct.precision, closed.precision)
    assert direct.truncated(common) == closed.truncated(common)


def test_closed_form_contract():
    f = series_from({0: 1}, 10)
    with pytest.raises(OperatorError):
        delta0_closed_form(f, HalfWeight(3), TRIV_CTX)  # trivial psi0
    with pytest.raises(OperatorError):
        delta0_closed_form(f, HalfWeight(1), CHI5_CTX)  # weight too small
    with pytest.raises(OperatorError):
        delta0_closed_form(f.to_float(64), HalfWeight(3), CHI5_CTX)


def test_theta_map_half_values():
    f = series_from({0: 7, 1: 2, 2: 5, 4: -1, 9: 3}, 17)
    meta = FormMeta(HalfWeight(1), 4, trivial_character(1))
    out, new_meta = theta_map_half(f, meta)
    assert out.coeff(1) == QQi(2)       # l(1) * 1 * c_1
    assert out.coeff(2) == QQi(0)       # not a square
    assert out.coeff(4) == QQi(0)       # even square root annihilated
    assert out.coeff(9) == QQi(-9)      # kron(-1,3) * 3 * c_9
    assert out.coeff(0) == QQi(0)
    assert new_meta.weight == HalfWeight(3)
    assert new_meta.level == 64
    with pytest.raises(OperatorError):
        theta_map_half(f, FormMeta(HalfWeight(3), 4, trivial_character(1)))


def test_rankin_cohen_first_bracket_oracle():
    # [f, g]_1 = l f' g - k f g' on expansions
    f = series_from({1: 1}, 12)
    g = series_from({2: 1}, 12)
    K, L = HalfWeight(3), HalfWeight(-4)
    br = rankin_cohen(f, g, 1, K, L)
    assert br.coeff(3) == QQi(L.k * 1 - K.k * 2)
    assert br.two_pi_i_pow == 1
    # order zero is the plain product
    assert rankin_cohen(f, g, 0, K, L) == f * g
    with pytest.raises(OperatorError):
        rankin_cohen(f, g, -1, K, L)


def test_rankin_cohen_antisymmetry():
    f = series_from({1: 2, 3: -1}, 15)
    g = series_from({0: 1, 2: 4}, 15)
    k, l = HalfWeight(5), HalfWeight(7)
    lhs = rankin_cohen(f, g, 1, k, l)
    rhs = rankin_cohen(g, f, 1, l, k)
    assert lhs == rhs * QQi(-1)


def test_selberg_lift_coefficients():
    F, meta_F, S, meta_S = selberg_lift(delta_cusp(8), 12)
    assert S.coeff(2) == QQi(1)
    assert S.coeff(3) == QQi(-48)
    assert S.coeff(4) == QQi(-968)
    assert meta_S.weight == HalfWeight(48) and meta_S.level == 2
    assert F.coeff(4) == QQi(Fraction(1, 2))   # Delta(4z) times the theta constant
    assert F.coeff(5) == QQi(1)
    assert meta_F.weight.doubled == 25 and meta_F.level == 4
    with pytest.raises(OperatorError):
        selberg_lift(delta_cusp(8), 11)
