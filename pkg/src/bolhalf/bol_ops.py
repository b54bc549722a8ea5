"""Bol-style operators on q-expansions.

The composite operator

    delta_a^{k-1}(f) = theta0^{3a-2} theta1^{1-a} D^{k-3/2}(theta0^{1-3a} theta1^a f)

acts purely on Fourier expansions (D^m multiplies the coefficient at q^e by
e^m), together with its closed-form expansion at a = 0, the half-weight
coefficient map, Rankin-Cohen brackets and the Selberg lift.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

from .characters import (DirichletCharacter, char_product, kronecker,
                         kronecker_character, trivial_character)
from .exactnum import QQi
from .forms import FormError, FormMeta, HalfWeight
from .qseries import PrecisionError, QSeries, QSeriesError
from .thetas import ThetaContext, ThetaError, theta_series


class OperatorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# classical Bol
# ---------------------------------------------------------------------------

def classical_bol(f: QSeries, k: HalfWeight) -> QSeries:
    """D^{k-1} on expansions: c_e -> e^{k-1} c_e; weight 2-k -> weight k."""
    if not k.is_integral or k.k < 1:
        raise OperatorError(f"classical Bol needs integer weight k >= 1, got {k}")
    return f.bol(int(k.k) - 1)


# ---------------------------------------------------------------------------
# precision dry-run for the delta_a pipeline
# ---------------------------------------------------------------------------

class _Shape:
    """(valuation, precision) pair propagated by the qseries rules."""

    __slots__ = ("v", "P")

    def __init__(self, v, P):
        self.v = Fraction(v)
        self.P = Fraction(P)

    def mul(self, other: "_Shape") -> "_Shape":
        return _Shape(self.v + other.v,
                      min(self.P + other.v, other.P + self.v))

    def pow(self, r: Fraction) -> "_Shape":
        # covers integer powers (incl. negative, via inverse) and the
        # exp(r log) fractional path: f^r has precision P + (r-1) v
        return _Shape(r * self.v, self.P + (r - 1) * self.v)


def _delta_exponents(a: Fraction) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(outer theta0, outer theta1, inner theta0, inner theta1) exponents."""
    a = Fraction(a)
    return 3 * a - 2, 1 - a, 1 - 3 * a, a


def _delta_shape(Q: Fraction, f: QSeries, a: Fraction,
                 v0: int, v1: int) -> _Shape:
    e0a, e1a, e0b, e1b = _delta_exponents(a)
    t0 = _Shape(v0, Q)
    t1 = _Shape(v1, Q)
    fs = _Shape(f.valuation, f.precision)
    inner = t0.pow(e0b).mul(t1.pow(e1b)).mul(fs)
    return t0.pow(e0a).mul(t1.pow(e1a)).mul(inner)


def _internal_theta_precision(f: QSeries, a: Fraction, P: Fraction,
                              v0: int, v1: int) -> tuple[Fraction, Fraction]:
    """Smallest theta precision Q with pipeline output precision >= min(P,
    achievable); returns (Q, achievable output precision)."""
    Q = P + 4
    for _ in range(12):
        out = _delta_shape(Q, f, a, v0, v1).P
        if out >= P:
            return Q, out
        bigger = _delta_shape(Q + (P - out) + 1, f, a, v0, v1).P
        if bigger <= out:
            # input-limited: more theta terms cannot help
            return Q, out
        Q = Q + (P - out) + 1
    return Q, _delta_shape(Q, f, a, v0, v1).P


# ---------------------------------------------------------------------------
# delta_a
# ---------------------------------------------------------------------------

def delta_a(f: QSeries, k: HalfWeight, a, ctx: ThetaContext, P,
            psi: Optional[DirichletCharacter] = None,
            grouping: str = "left") -> tuple[QSeries, Optional[FormMeta]]:
    """The composite operator, truncated honestly at min(P, achievable).

    The attached metadata (weight k, level ctx.level, character
    psi * (-1/.) * psi1 * psi0) is only meaningful — and only returned —
    for integer a; rational a runs in Puiseux mode and returns meta None.
    """
    if not k.is_half_integral or k.doubled < 3:
        raise OperatorError(f"delta_a needs k in 3/2 + N0, got {k}")
    a = Fraction(a)
    P = Fraction(P)
    m = (k.doubled - 3) // 2
    v0 = 0 if ctx.psi0.is_trivial() else 1
    v1 = 1
    Q, achievable = _internal_theta_precision(f, a, P, v0, v1)
    target = min(P, achievable)
    out_v = _delta_shape(Q, f, a, v0, v1).v
    if target <= out_v and not f.is_zero():
        raise PrecisionError(
            f"precision starvation: input known mod q^{f.precision} yields no "
            f"output terms below the requested q^{P}")
    lattice_cap = max(f.max_lattice, 4 * a.denominator, f.M)
    theta0 = theta_series("theta0", ctx.psi0, Q, max_lattice=lattice_cap)[0]
    theta1 = theta_series("theta1", ctx.psi1, Q, max_lattice=lattice_cap)[0]
    if f.mode == "float":
        theta0 = theta0.to_float(f.prec_bits)
        theta1 = theta1.to_float(f.prec_bits)
    e0a, e1a, e0b, e1b = _delta_exponents(a)
    A, B = theta0.pow(e0b), theta1.pow(e1b)
    if grouping == "left":
        inner = (A * B) * f
    elif grouping == "right":
        inner = A * (B * f)
    else:
        raise OperatorError(f"unknown grouping {grouping!r}")
    inner = inner.bol(m)
    out = (theta0.pow(e0a) * theta1.pow(e1a)) * inner
    target = Fraction(math.floor(target * out.M), out.M)
    if out.precision > target:
        out = out.truncated(target)
    if out.is_zero() and not f.is_zero() and out.precision <= out_v:
        raise PrecisionError("precision starvation: no output terms survive")
    if a.denominator != 1:
        return out, None
    psi = psi if psi is not None else trivial_character(1)
    if not (ctx.psi0.is_real and ctx.psi1.is_real):
        raise OperatorError(
            "metadata character uses psi1/psi0 = psi1*psi0, valid only for real "
            "theta characters")
    chi = char_product(char_product(psi, kronecker_character(-4)),
                       char_product(ctx.psi1, ctx.psi0))
    level = math.lcm(ctx.level, psi.modulus)
    meta = FormMeta(k, level, chi, pole_order=max(0, -math.floor(out.valuation)))
    return out, meta


# ---------------------------------------------------------------------------
# closed form at a = 0
# ---------------------------------------------------------------------------

def delta0_closed_form(f: QSeries, k: HalfWeight, ctx: ThetaContext) -> QSeries:
    """Explicit expansion of delta_0^{k-1}(f) for Laurent f = sum_{l>=-n0} c_l q^l:

        coeff of q^n = sum_{l=-n0}^{n} c_l sum_{m=1}^{n+1-l} (l+m)^{k-3/2}
                       psi0(sqrt(m)) a_{n-l-m}

    with a_j the coefficients of theta1/theta0^2 (a_{-1} = 1; needs psi0
    nontrivial so that theta0 has valuation 1)."""
    if not k.is_half_integral or k.doubled < 3:
        raise OperatorError(f"closed form needs k in 3/2 + N0, got {k}")
    if ctx.psi0.is_trivial():
        raise OperatorError("closed form requires nontrivial psi0")
    if f.M != 1:
        raise OperatorError("closed form is stated for integer exponents")
    if f.mode != "exact":
        raise OperatorError("closed form runs in exact mode")
    mi = (k.doubled - 3) // 2
    if f.is_zero():
        return f.copy()
    n0 = -f.v_idx
    P_out = f.p_idx
    # a-series to index P_out + n0 - 2, i.e. precision P_out + n0 - 1
    Q = P_out + n0 + 1
    theta0 = theta_series("theta0", ctx.psi0, Q)[0]
    theta1 = theta_series("theta1", ctx.psi1, Q)[0]
    aser = theta1 * theta0.pow(-2)
    amax = P_out + n0 - 2

    def a_coeff(j: int) -> QQi:
        if j < -1:
            return QQi(0)
        return aser.coeff(j)

    psi0 = ctx.psi0
    coeffs = []
    v_out = -n0
    for n in range(v_out, P_out):
        acc = QQi(0)
        for l in range(-n0, n + 1):
            c_l = f.coeff(l)
            if c_l.is_zero():
                continue
            inner = QQi(0)
            s = 1
            top = n + 1 - l
            while s * s <= top:
                val = psi0(s)
                if not val.is_zero():
                    inner = inner + QQi((l + s * s) ** mi) * val * a_coeff(n - l - s * s)
                s += 1
            acc = acc + c_l * inner
        coeffs.append(acc)
    return QSeries(1, v_out, coeffs, P_out, mode="exact",
                   max_lattice=f.max_lattice)


# ---------------------------------------------------------------------------
# the half-weight coefficient map
# ---------------------------------------------------------------------------

def theta_map_half(f: QSeries, meta: FormMeta) -> tuple[QSeries, FormMeta]:
    """c_n -> l(n) n^{1/2} c_n with l(n) = (-1 / sqrt(n)) on perfect squares,
    0 otherwise; sends weight 1/2 at level 4 N0^2 to weight 3/2 at 64 N0^2."""
    if meta.weight.doubled != 1:
        raise OperatorError("the map is defined on weight 1/2")
    if f.M != 1 or f.valuation < 0:
        raise OperatorError("the map needs integer exponents >= 0")

    def w(e: Fraction):
        n = int(e)
        s = math.isqrt(n)
        if s * s != n:
            return QQi(0)
        # (-1/s) as the conductor-4 character: 0 at even s.  The full
        # Kronecker extension has (-1/2) = +1, which would break the
        # identification of the image of theta_{psi,1} with theta1.
        if s % 2 == 0:
            return QQi(0)
        return QQi(kronecker(-1, s) * s)

    out = f.coeff_map(w)
    N0sq = meta.level // 4
    new_meta = FormMeta(HalfWeight(3), 64 * N0sq, meta.character,
                        pole_order=meta.pole_order)
    return out, new_meta


# ---------------------------------------------------------------------------
# Rankin-Cohen brackets
# ---------------------------------------------------------------------------

def _poch_ratio(x: Fraction, lo: int, hi: int) -> Fraction:
    """Gamma(x + hi) / Gamma(x + lo) = (x+lo)(x+lo+1)...(x+hi-1), as the
    finite product (well-defined even where Gamma itself is singular)."""
    out = Fraction(1)
    for i in range(lo, hi):
        out *= x + i
    return out


def rankin_cohen(f: QSeries, g: QSeries, n: int, k: HalfWeight,
                 l: HalfWeight) -> QSeries:
    """[f, g]_n = sum_j (-1)^{n-j} C(n,j) G(k+n)G(l+n)/(G(k+j)G(l+n-j))
    f^{(j)} g^{(n-j)}, with d/dz = (2 pi i) q d/dq carried as a symbolic
    (2 pi i)^n tag on the result."""
    if n < 0:
        raise OperatorError("bracket order must be nonnegative")
    kk, ll = k.k, l.k
    total = None
    for j in range(n + 1):
        c = Fraction((-1) ** (n - j)) * math.comb(n, j)
        c *= _poch_ratio(kk, j, n)
        c *= _poch_ratio(ll, n - j, n)
        if c == 0:
            continue
        term = (f.bol(j) * g.bol(n - j)) * c
        total = term if total is None else total + term
    if total is None:
        total = (f * g) * 0
    return total.copy(two_pi_i_pow=f.two_pi_i_pow + g.two_pi_i_pow + n)


# ---------------------------------------------------------------------------
# Selberg lift
# ---------------------------------------------------------------------------

def selberg_lift(f: QSeries, k: int) -> tuple[QSeries, FormMeta, QSeries, FormMeta]:
    """F(z) = f(4z) theta0(z) (weight k + 1/2, level 4) together with
    S(F)(z) = f(z)^2 - 2^{k-1} f(2z)^2 (weight 2k, level 2)."""
    if k <= 0 or k % 2 != 0:
        raise OperatorError(f"the lift needs positive even integer weight, got {k}")
    f4 = f.rescale(4)
    theta0 = theta_series("theta0", trivial_character(1), f4.precision - f4.valuation + 1,
                          max_lattice=f.max_lattice)[0]
    if f.mode == "float":
        theta0 = theta0.to_float(f.prec_bits)
    F = f4 * theta0
    S = f.pow(2) - (f.rescale(2).pow(2) * (2 ** (k - 1)))
    meta_F = FormMeta(HalfWeight(2 * k + 1), 4, trivial_character(1))
    meta_S = FormMeta(HalfWeight(4 * k), 2, trivial_character(1))
    return F, meta_F, S, meta_S
