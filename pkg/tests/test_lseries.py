"""Laplace-side L-series machinery: transforms, functional equations,
multipliers, inversion, and the Bessel closed forms."""
from fractions import Fraction

import mpmath as mp
import pytest

from bolhalf.characters import (gauss_sum, kronecker_character,
                                trivial_character)
from bolhalf.exactnum import QQi
from bolhalf.forms import FormMeta, HalfWeight
from bolhalf.lseries import (ConvergenceError, InversionError, LSeriesError,
                             LaplaceMultiplier, SCParams, _abel_half_integral,
                             alpha_apply, b_factor, bessel_half, bump,
                             fe_constant, fe_residual, indicator,
                             invert_laplace, laplace, lseries_value,
                             make_testfunction, poly_bump)
# aliased so pytest does not try to collect them as tests
from bolhalf.lseries import TestFunction as PhiFunction
from bolhalf.lseries import testfn_fricke as fricke_phi
from bolhalf.qseries import delta_cusp, from_coeff_dict


def _ind_transform(s, a, b):
    return (mp.exp(-s * a) - mp.exp(-s * b)) / s


def test_laplace_indicator_closed_form():
    phi = indicator(1, 3)
    with mp.workprec(128):
        for s in (mp.mpf(1), mp.mpf("0.25"), mp.mpc(2, 5), mp.mpc("0.5", -11)):
            assert abs(laplace(phi, s) - _ind_transform(s, 1, 3)) < mp.mpf("1e-25")


def test_laplace_linearity_and_shift():
    phi1 = indicator(1, 2)
    phi2 = indicator(2, 4)
    both = indicator(1, 4)
    with mp.workprec(96):
        s = mp.mpc("1.3", "0.7")
        v = laplace(phi1, s) + laplace(phi2, s) - laplace(both, s)
        assert abs(v) < mp.mpf("1e-20")


def test_testfunction_contract():
    with pytest.raises(LSeriesError):
        PhiFunction(lambda t: 1, (0, 1))     # support must avoid 0
    with pytest.raises(LSeriesError):
        PhiFunction(lambda t: 1, (2, 1))
    phi = indicator(1, 2)
    assert phi(0.5) == 0 and phi(3.0) == 0
    with pytest.raises(LSeriesError):
        phi.derivative(1)                      # smoothness 0
    b = bump(1, 2)
    assert b.derivative(3)(1.4) != 0           # odd orders vanish only at 1.5


def test_make_testfunction_specs():
    assert make_testfunction("bump:1,2").support[1] == 2
    assert make_testfunction("indicator:1/2,3")(1) == 1
    assert make_testfunction("poly-bump:1,2,4").smoothness == 3
    with pytest.raises(LSeriesError):
        make_testfunction("gauss:0,1")


def test_fricke_involution_scales_by_M_to_minus_k():
    phi = bump(1, 2)
    k = HalfWeight(10)  # k = 5
    M = 2
    tw = fricke_phi(fricke_phi(phi, k, M), k, M)
    with mp.workprec(96):
        for x in (mp.mpf("1.2"), mp.mpf("1.5"), mp.mpf("1.9")):
            assert abs(tw(x) - phi(x) * mp.mpf(2) ** -5) < mp.mpf("1e-20")
    a, b = fricke_phi(phi, k, M).support
    assert abs(a - mp.mpf(1) / 4) < 1e-20 and abs(b - mp.mpf(1) / 2) < 1e-20
    with pytest.raises(LSeriesError):
        fricke_phi(phi, k, 0)


def test_lseries_single_term_oracle():
    chi = kronecker_character(5)
    phi = indicator(1, 2)
    n, c = 3, 2
    f = from_coeff_dict({Fraction(n): QQi(c)}, 60, M=1, mode="exact")
    with mp.workprec(128):
        val = lseries_value(f, chi, phi)
        s = 2 * mp.pi * n / mp.mpf(5)
        expected = c * gauss_sum(chi.conjugate(), n, mp) * _ind_transform(s, 1, 2)
        assert abs(val - expected) < mp.mpf("1e-20")


def test_lseries_convergence_certificate():
    chi = kronecker_character(5)
    f = from_coeff_dict({Fraction(1): QQi(1)}, 8, M=1, mode="exact")
    with pytest.raises(ConvergenceError):
        lseries_value(f, chi, indicator(1, 2))


def test_fe_constant_values():
    triv1 = trivial_character(1)
    meta_delta = FormMeta(HalfWeight(24), 1, triv1)
    with mp.workprec(96):
        assert abs(fe_constant(meta_delta, triv1) - 1) < mp.mpf("1e-25")
        meta_theta = FormMeta(HalfWeight(1), 4, triv1)
        expected = mp.exp(1j * mp.pi / 4) * mp.power(4, mp.mpf(3) / 4)
        assert abs(fe_constant(meta_theta, triv1) - expected) < mp.mpf("1e-25")
    meta_bad = FormMeta(HalfWeight(24), 2, triv1)
    with pytest.raises(LSeriesError):
        fe_constant(meta_bad, kronecker_character(8))  # gcd(D, N) != 1


def test_fe_residual_level_one():
    d = delta_cusp(60).to_float(160)
    meta = FormMeta(HalfWeight(24), 1, trivial_character(1))
    rep = fe_residual(d, d, meta, trivial_character(1), bump(1, 2),
                      prec_bits=128)
    assert rep["residual"] < 1e-8
    assert abs(rep["constant"] - 1) < 1e-20


def test_alpha_integer_weight_is_scaled_derivative():
    phi = bump(1, 2)
    D, k = 3, HalfWeight(6)  # m = 2
    alpha = alpha_apply(phi, D, k, lambda x: 1, mode="time")
    d2 = phi.derivative(2)
    with mp.workprec(96):
        c = (mp.mpf(3) / (2 * mp.pi)) ** 2
        for t in (mp.mpf("1.2"), mp.mpf("1.7")):
            assert abs(alpha(t) - c * d2(t)) < mp.mpf("1e-15")
    with pytest.raises(LSeriesError):
        alpha_apply(indicator(1, 2), D, k, lambda x: 1, mode="time")
    with pytest.raises(LSeriesError):
        alpha_apply(phi, D, k, lambda x: x, mode="time")  # h must be 1


def test_alpha_laplace_multiplier():
    phi = bump(1, 2)
    D, k = 5, HalfWeight(5)
    h = lambda x: 1 / (1 + x)
    alpha = alpha_apply(phi, D, k, h, mode="laplace")
    assert isinstance(alpha, LaplaceMultiplier)
    with mp.workprec(96):
        s = mp.mpc("1.1", "0.4")
        w = D * s / (2 * mp.pi)
        expected = mp.power(w, mp.mpf(3) / 2) * h(w) * laplace(phi, s, 96)
        assert abs(alpha.laplace(s, 96) - expected) < mp.mpf("1e-18")
        assert alpha.lap_bound(2.0, 96) >= abs(alpha.laplace(2.0, 96))


def test_abel_half_integral_all_regimes():
    # I^{1/2} of the indicator of [a, b] has the closed form
    # (2/sqrt(pi)) (sqrt(t-a) - sqrt(max(t-b, 0)))
    a, b = mp.mpf(1), mp.mpf(2)
    phi = indicator(a, b)

    def moments(j):
        return (b ** (j + 1) - a ** (j + 1)) / (j + 1)

    def closed(t):
        hi = mp.sqrt(t - a)
        lo = mp.sqrt(t - b) if t > b else mp.mpf(0)
        return 2 / mp.sqrt(mp.pi) * (hi - lo)

    with mp.workprec(96):
        for t in ("1.5", "2.5", "7.9", "8.1", "50", "1e6"):
            t = mp.mpf(t)
            got = _abel_half_integral(phi, t, 96, moments)
            assert abs(got - closed(t)) < mp.mpf("1e-18") * (1 + abs(closed(t)))
        assert _abel_half_integral(phi, mp.mpf("0.5"), 96, moments) == 0


def test_invert_laplace_roundtrip_smooth():
    F = lambda s: 1 / (s + 2)
    with mp.workprec(96):
        for t in (mp.mpf("0.5"), mp.mpf(2)):
            val, info = invert_laplace(F, t, method="talbot")
            assert abs(val - mp.exp(-2 * t)) < mp.mpf("1e-10")
    with pytest.raises(InversionError):
        invert_laplace(F, 0)


def test_invert_laplace_auto_fallback_on_compact_support():
    # transform of the indicator of [1, 2]: grows along the negative real
    # axis for t inside the support, so Talbot must fail and auto must
    # record the failure and fall back
    F = lambda s: _ind_transform(s, 1, 2)
    with mp.workprec(96):
        t = mp.mpf("1.5")
        with pytest.raises(InversionError):
            invert_laplace(F, t, method="talbot")
        # the discontinuous original limits Bromwich accuracy: loose check
        val, info = invert_laplace(F, t, method="auto", tol=mp.mpf("1e-3"))
        assert info["method"] == "bromwich"
        assert "talbot_failure" in info
        assert abs(val - 1) < 0.05


def test_b_factor_symmetric_case():
    params = SCParams(HalfWeight(5), 4, 4, 3, trivial_character(3),
                      trivial_character(4), trivial_character(4))
    with mp.workprec(96):
        b = b_factor(params)
        assert abs(b - mp.mpf("-0.125")) < mp.mpf("1e-25")
    with pytest.raises(LSeriesError):
        b_factor(SCParams(HalfWeight(5), 3, 5, 7, trivial_character(7),
                          trivial_character(3), trivial_character(5)))
    with pytest.raises(LSeriesError):
        SCParams(HalfWeight(5), 4, 4, 2, trivial_character(2),
                 trivial_character(4), trivial_character(4))


def test_bessel_half_closed_forms():
    with mp.workprec(128):
        for z in (mp.mpf("0.3"), mp.mpf(2), mp.mpf("11.5")):
            for n in range(4):
                for sign in (1, -1):
                    nu = (n + mp.mpf("0.5")) * sign
                    got = bessel_half(n, sign, z)
                    assert abs(got - mp.besselj(nu, z)) < mp.mpf("1e-25")
