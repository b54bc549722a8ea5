"""Numerical certification of transformation laws.

Slash actions (integral, half-integral with the (c/d) eps_d^{2k} multiplier,
Fricke), automorphy residual sweeps over sampled Gamma_0(N) elements, and the
point-admissibility heuristic that keeps truncation tails controlled at both
evaluation points.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .characters import eps, kronecker
from .forms import FormMeta, HalfWeight
from .qseries import QSeries

DEFAULT_VERIFY_BITS = 192


class VerifyError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise VerifyError(f"determinant of {self} is not 1")

    def in_gamma0(self, N: int) -> bool:
        return self.c % N == 0

    def apply(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.a * other.a + self.b * other.c,
                            self.a * other.b + self.b * other.d,
                            self.c * other.a + self.d * other.c,
                            self.c * other.b + self.d * other.d)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


IDENTITY = GroupElement(1, 0, 0, 1)


# ---------------------------------------------------------------------------
# slash actions
# ---------------------------------------------------------------------------

def _principal_power(base, expo, ctx):
    """base^expo with the principal branch, -pi < arg <= pi."""
    return ctx.exp(expo * ctx.log(base))


def slash_value(f: QSeries, gamma: GroupElement, meta: FormMeta, z,
                prec_bits: int = DEFAULT_VERIFY_BITS):
    """(f|_k gamma)(z) and a propagated tail bound.

    Integral weight: (cz+d)^{-k} f(gamma z).  Half-integral (gamma in
    Gamma_0(4)): (c/d) eps_d^{2k} (cz+d)^{-k} f(gamma z), principal branches.
    """
    k = meta.weight
    with mp.workprec(prec_bits):
        z = mp.mpc(z)
        if mp.im(z) <= 0:
            raise VerifyError("slash_value requires Im z > 0")
        gz = gamma.apply(z)
        val, tail = f.eval(gz, prec_bits=prec_bits)
        j = gamma.c * z + gamma.d
        kk = mp.mpf(k.doubled) / 2
        if k.is_integral:
            aut = _principal_power(j, -kk, mp)
        else:
            if not gamma.in_gamma0(4):
                raise VerifyError("half-integral slash needs gamma in Gamma_0(4)")
            if gamma.c == 0:
                # gamma = +-(1 b; 0 1); the multiplier is trivial for +.
                aut = _principal_power(j, -kk, mp)
                if gamma.d == -1:
                    aut *= eps(-1).to_mpc(mp) ** k.doubled * kronecker(0, -1)
            else:
                mult = kronecker(gamma.c, gamma.d) * (eps(gamma.d) ** k.doubled).to_mpc(mp)
                aut = mult * _principal_power(j, -kk, mp)
        return aut * val, abs(aut) * tail


def fricke_slash_value(f: QSeries, M: int, k: HalfWeight, z,
                       prec_bits: int = DEFAULT_VERIFY_BITS):
    """(f|_k W_M)(z) = f(-1/(Mz)) (sqrt(M) z)^{-k}, principal branch."""
    if M < 1:
        raise VerifyError("Fricke level must be positive")
    with mp.workprec(prec_bits):
        z = mp.mpc(z)
        if mp.im(z) <= 0:
            raise VerifyError("fricke_slash_value requires Im z > 0")
        w = -1 / (M * z)
        val, tail = f.eval(w, prec_bits=prec_bits)
        kk = mp.mpf(k.doubled) / 2
        fac = _principal_power(mp.sqrt(M) * z, -kk, mp)
        return val * fac, abs(fac) * tail


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def sample_gamma0(N: int, c_max: int, count: int, seed: int) -> list[GroupElement]:
    """Seeded sample of Gamma_0(N) elements with 0 < |c| <= c_max * N,
    gcd(c, d) = 1, excluding +-identity and translations."""
    if N < 1 or c_max < 1 or count < 1:
        raise VerifyError("N, c_max, count must be positive")
    rng = random.Random(seed)
    out: list[GroupElement] = []
    while len(out) < count:
        c = rng.randint(1, c_max) * N * rng.choice((1, -1))
        d = rng.randint(-abs(c), abs(c))
        if d == 0 or math.gcd(d, c) != 1:
            continue
        a = pow(d, -1, abs(c))
        b = (a * d - 1) // c
        out.append(GroupElement(a, b, c, d))
    return out


def admissible_point(gamma: GroupElement, rng: random.Random):
    """A point z with Im z in [0.8, 1.2]/|c| and |cz+d| in [0.7, 1.4].

    Scaling the imaginary-part window by 1/|c| keeps |cz+d| in [0.7, 1.4]
    reachable for every c (it is empty for |c| >= 2 with Im z ~ 1, since
    |cz+d| >= |c| Im z); at |c| = 1 this is the unscaled window.  The bound
    |cz+d| <= 1.4 still guarantees Im gamma z >= Im z / 2.
    """
    c, d = gamma.c, gamma.d
    if c == 0:
        return complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.2))
    for _ in range(1000):
        u = rng.uniform(0.8, 1.2)
        t = rng.uniform(-1.0, 1.0)
        r = math.hypot(t, u)
        if 0.7 <= r <= 1.4:
            return complex((t - d) / c, u / abs(c))
    raise VerifyError("no admissible point found")


def sample_pairs(N: int, c_max: int, count: int, seed: int
                 ) -> tuple[list[GroupElement], list[complex]]:
    gammas = sample_gamma0(N, c_max, count, seed)
    rng = random.Random(seed + 1)
    zs = [admissible_point(g, rng) for g in gammas]
    return gammas, zs


def min_imag(gammas: list[GroupElement], zs: list) -> float:
    """Smallest imaginary part among all z and gamma z: the quantity the
    truncation order has to beat."""
    lo = math.inf
    for g, z in zip(gammas, zs):
        zz = complex(z)
        lo = min(lo, zz.imag)
        gz = g.apply(zz)
        lo = min(lo, gz.imag)
    return lo


def suggest_truncation(A, C, y: float, tol: float) -> int:
    """Smallest P with (growth model) A exp(C sqrt(P) - 2 pi P y) < tol/10."""
    A = max(float(A), 1e-300)
    C = float(C)
    target = math.log(tol / 10)
    P = 4
    while math.log(A) + C * math.sqrt(P) - 2 * math.pi * P * y >= target:
        P = int(P * 1.3) + 1
        if P > 10 ** 7:
            raise VerifyError("growth model never beats the tolerance")
    return P


# ---------------------------------------------------------------------------
# residual sweeps
# ---------------------------------------------------------------------------

def automorphy_residual(f: QSeries, meta: FormMeta,
                        gammas: list[GroupElement], zs: list,
                        prec_bits: int = DEFAULT_VERIFY_BITS) -> dict:
    """Max over pairs of |(f|gamma)(z) - psi(d) f(z)| / local scale, with
    per-pair diagnostics."""
    if len(gammas) != len(zs) or not gammas:
        raise VerifyError("need matching nonempty gamma and point lists")
    pairs = []
    max_res = mp.mpf(0)
    max_tail = mp.mpf(0)
    with mp.workprec(prec_bits):
        for g, z in zip(gammas, zs):
            if not g.in_gamma0(meta.level):
                raise VerifyError(f"{g} is not in Gamma_0({meta.level})")
            lhs, tail1 = slash_value(f, g, meta, z, prec_bits=prec_bits)
            val, tail2 = f.eval(mp.mpc(z), prec_bits=prec_bits)
            rhs = meta.character.cvalue(g.d, mp) * val
            scale = max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
            res = abs(lhs - rhs) / scale
            tail = (tail1 + tail2) / scale
            max_res = max(max_res, res)
            max_tail = max(max_tail, tail)
            pairs.append({
                "gamma": g.as_tuple(),
                "z": [float(mp.re(mp.mpc(z))), float(mp.im(mp.mpc(z)))],
                "lhs": [float(mp.re(lhs)), float(mp.im(lhs))],
                "rhs": [float(mp.re(rhs)), float(mp.im(rhs))],
                "residual": float(res),
                "tail_bound": float(tail),
            })
    return {
        "pairs": pairs,
        "max_residual": float(max_res),
        "max_tail_bound": float(max_tail),
        "count": len(pairs),
    }


def fricke_residual(f: QSeries, g: QSeries, M: int, k: HalfWeight,
                    constant, zs: list,
                    prec_bits: int = DEFAULT_VERIFY_BITS) -> dict:
    """Residuals of (f|_k W_M)(z) = constant * g(z) over sample points."""
    if not zs:
        raise VerifyError("need at least one sample point")
    pairs = []
    max_res = mp.mpf(0)
    max_tail = mp.mpf(0)
    with mp.workprec(prec_bits):
        cst = mp.mpc(constant)
        for z in zs:
            lhs, tail1 = fricke_slash_value(f, M, k, z, prec_bits=prec_bits)
            val, tail2 = g.eval(mp.mpc(z), prec_bits=prec_bits)
            rhs = cst * val
            scale = max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
            res = abs(lhs - rhs) / scale
            tail = (tail1 + abs(cst) * tail2) / scale
            max_res = max(max_res, res)
            max_tail = max(max_tail, tail)
            pairs.append({
                "z": [float(mp.re(mp.mpc(z))), float(mp.im(mp.mpc(z)))],
                "residual": float(res),
                "tail_bound": float(tail),
            })
    return {
        "pairs": pairs,
        "max_residual": float(max_res),
        "max_tail_bound": float(max_tail),
        "count": len(pairs),
    }
