"""Unary theta series: the weight-1/2 and weight-3/2 building blocks.

theta0(psi) = sum_{n>=0} psi(n) q^{n^2}          (even psi; psi(0)=1/2 if trivial)
theta1(psi) = sum_{n>=1} n psi(n) q^{n^2}        (odd psi)
theta_{psi,t} = sum_{n>=0} psi(n) q^{t n^2}      (the weight-1/2 basis members)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .characters import (CharacterError, DirichletCharacter, char_product,
                         chi_t_character, _divisors, agree_on_coprime,
                         gauss_sum, primitive_even_characters,
                         twist_by_minus_one, trivial_character)
from .exactnum import QQi
from .forms import FormMeta, HalfWeight
from .qseries import QSeries, from_coeff_dict


class ThetaError(ValueError):
    pass


@dataclass(frozen=True)
class ThetaContext:
    """An (even psi0, odd psi1) pair and the level bookkeeping they induce."""
    psi0: DirichletCharacter
    psi1: DirichletCharacter

    def __post_init__(self):
        if not self.psi0.is_even:
            raise ThetaError("psi0 must be even")
        if not self.psi1.is_odd:
            raise ThetaError("psi1 must be odd")

    @property
    def N0(self) -> int:
        return self.psi0.modulus

    @property
    def N1(self) -> int:
        return self.psi1.modulus

    @property
    def level(self) -> int:
        return math.lcm(4 * self.N0 ** 2, 4 * self.N1 ** 2)

    def theta0(self, P) -> QSeries:
        return theta_series("theta0", self.psi0, P)[0]

    def theta1(self, P) -> QSeries:
        return theta_series("theta1", self.psi1, P)[0]


def _theta_zero_term(psi: DirichletCharacter):
    """n = 0 value in the theta builders: the override slot if set, the 1/2
    convention for trivial psi, otherwise 0."""
    if psi.zero_value_override is not None:
        return QQi(psi.zero_value_override)
    if psi.is_trivial():
        return QQi(Fraction(1, 2))
    return QQi(0)


def theta_series(kind: str, psi: DirichletCharacter, P, t: int = 1,
                 max_lattice: int = 24) -> tuple[QSeries, FormMeta]:
    """Build theta0/theta1/serre_stark to absolute precision P with metadata."""
    P = Fraction(P)
    if P <= 0:
        raise ThetaError("precision must be positive")
    N = psi.modulus
    entries: dict = {}
    if kind == "theta0" or kind == "serre_stark":
        if not psi.is_even:
            raise ThetaError(f"{kind} requires an even character")
        if kind == "theta0":
            t = 1
        if t < 1:
            raise ThetaError("t must be a positive integer")
        z0 = _theta_zero_term(psi)
        if not z0.is_zero():
            entries[Fraction(0)] = z0
        n = 1
        while t * n * n < P:
            val = psi(n)
            if not isinstance(val, QQi):
                raise ThetaError("theta builders require root-of-unity values in QQi; "
                                 "non-quartic characters are out of scope here")
            if not val.is_zero():
                entries[Fraction(t * n * n)] = val
            n += 1
        if kind == "theta0":
            meta = FormMeta(HalfWeight(1), 4 * N * N, psi)
        else:
            level = 4 * N * N * t
            chi = char_product(psi, chi_t_character(t))
            meta = FormMeta(HalfWeight(1), level, chi)
    elif kind == "theta1":
        if not psi.is_odd:
            raise ThetaError("theta1 requires an odd character")
        n = 1
        while n * n < P:
            val = psi(n)
            if not isinstance(val, QQi):
                raise ThetaError("theta builders require root-of-unity values in QQi")
            if not val.is_zero():
                entries[Fraction(n * n)] = val * n
            n += 1
        meta = FormMeta(HalfWeight(3), 4 * N * N, twist_by_minus_one(psi))
    else:
        raise ThetaError(f"unknown theta kind {kind!r}")
    series = from_coeff_dict(entries, P, M=1, mode="exact", max_lattice=max_lattice)
    return series, meta


def enumerate_serre_stark(N0: int, psi0: DirichletCharacter) -> list[tuple[DirichletCharacter, int]]:
    """All (psi, t) with psi even primitive of conductor r, r^2 t | N0^2, and
    psi0 = psi * chi_t on units coprime to 4 N0^2."""
    if not psi0.is_even:
        raise ThetaError("psi0 must be even")
    pairs: list[tuple[DirichletCharacter, int]] = []
    span = 4 * N0 * N0
    for r in _divisors(N0):
        quota = (N0 // r) ** 2
        for psi in primitive_even_characters(r):
            for t in _divisors(quota):
                cand = char_product(psi, chi_t_character(t))
                if agree_on_coprime(psi0, cand, span):
                    pairs.append((psi, t))
    pairs.sort(key=lambda p: (p[1], p[0].modulus))
    return pairs


def fricke_theta_constants(psi: DirichletCharacter, kind: str, ctx=mp):
    """Fricke eigenvalue of theta0 (resp. theta1) at its own level 4N^2:
    (iN)^{-1/2} tau(psi), resp. -(iN)^{-1/2} tau(psi).  Principal branches."""
    if not psi.is_real:
        raise ThetaError("Fricke constants require a real character")
    if not psi.is_primitive:
        raise ThetaError("Fricke constants require a primitive character")
    N = psi.modulus
    if kind == "theta0":
        if not psi.is_even:
            raise ThetaError("theta0 requires an even character")
        sign = 1
    elif kind == "theta1":
        if not psi.is_odd:
            raise ThetaError("theta1 requires an odd character")
        sign = -1
    else:
        raise ThetaError(f"unknown theta kind {kind!r}")
    tau = gauss_sum(psi, 1, ctx)
    return sign * tau / ctx.sqrt(ctx.mpc(0, N))
