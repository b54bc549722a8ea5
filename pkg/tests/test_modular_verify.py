"""Numerical automorphy and Fricke checks on the upper half plane."""
import math
import random

import mpmath as mp
import pytest

from bolhalf.characters import (char_product, kronecker_character,
                                trivial_character)
from bolhalf.forms import FormMeta, HalfWeight
from bolhalf.modular_verify import (DEFAULT_VERIFY_BITS, IDENTITY, GroupElement,
                                    VerifyError, admissible_point,
                                    automorphy_residual, fricke_residual,
                                    fricke_slash_value, min_imag, sample_gamma0,
                                    sample_pairs, slash_value,
                                    suggest_truncation)
from bolhalf.qseries import delta_cusp
from bolhalf.thetas import (ThetaContext, fricke_theta_constants,
                            theta_series)


def test_group_element_basics():
    with pytest.raises(VerifyError):
        GroupElement(1, 1, 1, 1)   # det 0
    g = GroupElement(1, 1, 0, 1)
    h = GroupElement(1, 0, 4, 1)
    gh = g * h
    assert gh.as_tuple() == (5, 1, 4, 1)
    assert h.in_gamma0(4) and not h.in_gamma0(8)
    z = complex(0.3, 1.1)
    w = h.apply(z)
    assert abs(w - z / (4 * z + 1)) < 1e-14
    assert IDENTITY.apply(z) == z


def test_sampling_is_seeded_and_in_group():
    a = sample_gamma0(4, 3, 15, seed=9)
    b = sample_gamma0(4, 3, 15, seed=9)
    c = sample_gamma0(4, 3, 15, seed=10)
    assert [g.as_tuple() for g in a] == [g.as_tuple() for g in b]
    assert [g.as_tuple() for g in a] != [g.as_tuple() for g in c]
    for g in a:
        assert g.in_gamma0(4)
        assert 0 < abs(g.c) <= 12
        assert g.a * g.d - g.b * g.c == 1


def test_admissible_point_window():
    rng = random.Random(3)
    for g in sample_gamma0(4, 4, 30, seed=5):
        z = admissible_point(g, rng)
        assert 0.8 / abs(g.c) <= z.imag <= 1.2 / abs(g.c)
        assert 0.7 <= abs(g.c * z + g.d) <= 1.4
        assert g.apply(z).imag >= z.imag / 2 - 1e-12


def test_min_imag_and_truncation_model():
    gammas, zs = sample_pairs(4, 2, 10, seed=1)
    y = min_imag(gammas, zs)
    assert 0 < y <= 1.2
    P = suggest_truncation(10.0, 5.0, y, 1e-10)
    # the model value really beats the target at the suggested order
    assert math.log(10.0) + 5.0 * math.sqrt(P) - 2 * math.pi * P * y < math.log(1e-11)
    with pytest.raises(VerifyError):
        suggest_truncation(1.0, 100.0, 1e-9, 1e-10)


def test_integral_weight_slash_invariance():
    # Delta is invariant under SL_2(Z) in weight 12
    d = delta_cusp(220).to_float(160)
    meta = FormMeta(HalfWeight(24), 1, trivial_character(1))
    gammas, zs = sample_pairs(1, 2, 6, seed=2)
    rep = automorphy_residual(d, meta, gammas, zs, prec_bits=160)
    assert rep["max_residual"] < 1e-10
    assert rep["count"] == 6
    for entry in rep["pairs"]:
        assert entry["tail_bound"] < 1e-12


def test_wrong_character_is_detected():
    t1, good = theta_series("theta1", kronecker_character(-4), 900)
    t1 = t1.to_float(160)
    bad = FormMeta(good.weight, good.level,
                   char_product(good.character, kronecker_character(8)))
    gammas, zs = sample_pairs(good.level, 1, 8, seed=4)
    rep_good = automorphy_residual(t1, good, gammas, zs, prec_bits=160)
    assert rep_good["max_residual"] < 1e-8
    bad_pairs = [(g, z) for g, z in zip(gammas, zs) if g.d % 8 in (3, 5)]
    assert bad_pairs, "sample contains no d with chi_8(d) != 1"
    rep_bad = automorphy_residual(t1, bad, [g for g, _ in bad_pairs],
                                  [z for _, z in bad_pairs], prec_bits=160)
    assert rep_bad["max_residual"] > 1e-3


def test_slash_requires_upper_half_plane():
    d = delta_cusp(30).to_float(96)
    meta = FormMeta(HalfWeight(24), 1, trivial_character(1))
    with pytest.raises(VerifyError):
        slash_value(d, IDENTITY, meta, complex(0.1, -1.0))
    with pytest.raises(VerifyError):
        fricke_slash_value(d, 1, HalfWeight(24), complex(0.1, 0.0))
    with pytest.raises(VerifyError):
        fricke_slash_value(d, 0, HalfWeight(24), complex(0.1, 1.0))


def test_half_integral_slash_needs_gamma0_4():
    ctx = ThetaContext(trivial_character(1), kronecker_character(-4))
    t0 = ctx.theta0(200).to_float(96)
    meta = FormMeta(HalfWeight(1), 4, trivial_character(1))
    with pytest.raises(VerifyError):
        slash_value(t0, GroupElement(1, 0, 1, 1), meta, complex(0.0, 1.0))


def test_fricke_residual_theta0():
    ctx = ThetaContext(trivial_character(1), kronecker_character(-4))
    t0 = ctx.theta0(2000).to_float(160)
    cst = fricke_theta_constants(trivial_character(1), "theta0")
    zs = [complex(0.03 * j - 0.1, 0.8 + 0.05 * j) for j in range(5)]
    rep = fricke_residual(t0, t0, 4, HalfWeight(1), cst, zs, prec_bits=160)
    assert rep["max_residual"] < 1e-12
    # and a wrong constant fails loudly
    rep_bad = fricke_residual(t0, t0, 4, HalfWeight(1), 1.0, zs, prec_bits=160)
    assert rep_bad["max_residual"] > 1e-2


def test_residual_input_validation():
    d = delta_cusp(30).to_float(96)
    meta = FormMeta(HalfWeight(24), 1, trivial_character(1))
    with pytest.raises(VerifyError):
        automorphy_residual(d, meta, [], [])
    with pytest.raises(VerifyError):
        fricke_residual(d, d, 1, HalfWeight(24), 1.0, [])
    meta4 = FormMeta(HalfWeight(24), 4, trivial_character(1))
    with pytest.raises(VerifyError):
        automorphy_residual(d, meta4, [GroupElement(1, 0, 1, 1)],
                            [complex(0, 1)])
