"""Dirichlet characters, Kronecker symbols and generalized Gauss sums.

Characters are stored as full value tables of exact roots of unity.  A value
at the residue u is the angle a in [0,1) with chi(u) = e^{2 pi i a}, or None
when gcd(u, modulus) > 1.  Real characters therefore stay entirely inside
exact rational arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import mpmath as mp

from .exactnum import QQi, qqi_root_of_unity


class CharacterError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Kronecker symbol and epsilon_d
# ---------------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) with the full extension to all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out 2's from n using (a/2)
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # now n is odd and positive: Jacobi symbol
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def eps(d: int) -> QQi:
    """The unit eps_d: 1 for d = 1 mod 4, i for d = 3 mod 4; d must be odd."""
    if d % 2 == 0:
        raise CharacterError(f"eps_d requires odd d, got {d}")
    return QQi(1) if d % 4 == 1 else QQi(0, 1)


# ---------------------------------------------------------------------------
# unit group structure
# ---------------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    fac: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def _primitive_root(p: int, e: int) -> int:
    """Primitive root mod p^e for odd prime p."""
    phi = p - 1
    prime_divs = list(factorize(phi))
    g = 2
    while True:
        if all(pow(g, phi // q, p) != 1 for q in prime_divs):
            break
        g += 1
    if e == 1:
        return g
    # lift: g or g + p generates mod p^2, and then mod every p^e
    if pow(g, phi, p * p) == 1:
        g += p
    return g


def unit_group_generators(n: int) -> list[tuple[int, int]]:
    """Generators of (Z/n)^* with their orders, via CRT on prime powers."""
    if n == 1:
        return []
    fac = factorize(n)
    gens: list[tuple[int, int]] = []
    for p, e in sorted(fac.items()):
        q = p ** e
        rest = n // q
        if p == 2:
            local = []
            if e == 2:
                local = [(3, 2)]
            elif e >= 3:
                local = [(q - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(_primitive_root(p, e), (p - 1) * p ** (e - 1))]
        for g, order in local:
            if rest == 1:
                gens.append((g % n, order))
            else:
                # x = g mod q, x = 1 mod rest
                inv = pow(q % rest, -1, rest)
                x = (g + q * ((1 - g) * inv % rest)) % n
                gens.append((x, order))
    return gens


# ---------------------------------------------------------------------------
# the character class
# ---------------------------------------------------------------------------

class DirichletCharacter:
    """A Dirichlet character stored as a full table of root-of-unity angles.

    `angles[u]` is the Fraction a with chi(u) = e^{2 pi i a}, or None for
    chi(u) = 0.  `zero_value_override` is the theta-series convention slot
    (psi(0) = 1/2 for the trivial character); it is honored only by
    `theta_value`, never by `__call__`, products or Gauss sums.
    """

    def __init__(self, modulus: int, angles: list[Optional[Fraction]],
                 zero_value_override: Optional[Fraction] = None):
        if modulus < 1 or len(angles) != modulus:
            raise CharacterError("angle table must have one entry per residue")
        self.modulus = modulus
        self.angles = [None if a is None else Fraction(a) % 1 for a in angles]
        if modulus == 1:
            self.angles = [Fraction(0)]
        self.zero_value_override = zero_value_override
        self._validate()
        self.conductor = self._conductor()
        self.is_primitive = self.conductor == self.modulus
        self.is_real = all(a in (Fraction(0), Fraction(1, 2))
                           for a in self.angles if a is not None)
        self.parity = "even" if self.angle(-1) == 0 else "odd"

    # -- construction helpers -----------------------------------------
    def _validate(self):
        n = self.modulus
        for u in range(n):
            has_value = self.angles[u] is not None
            if n > 1 and has_value != (math.gcd(u, n) == 1):
                raise CharacterError(f"support of value table wrong at u={u} mod {n}")
        if n > 1 and self.angles[1 % n] != 0:
            raise CharacterError("chi(1) must be 1")

    def _conductor(self) -> int:
        n = self.modulus
        for c in sorted(_divisors(n)):
            ok = True
            for u in range(1, n, c):
                if math.gcd(u, n) == 1 and self.angles[u] != 0:
                    ok = False
                    break
            if ok:
                return c
        return n

    # -- evaluation ----------------------------------------------------
    def angle(self, u: int) -> Optional[Fraction]:
        return self.angles[u % self.modulus]

    def __call__(self, u: int):
        """chi(u) as an exact QQi when the value is a 4th root of unity,
        otherwise as an mpmath complex at the current working precision."""
        a = self.angle(u)
        if a is None:
            return QQi(0)
        try:
            return qqi_root_of_unity(a)
        except ValueError:
            return mp.e ** (2j * mp.pi * mp.mpf(a.numerator) / a.denominator)

    def cvalue(self, u: int, ctx=mp):
        a = self.angle(u)
        if a is None:
            return ctx.mpc(0)
        return ctx.e ** (2j * ctx.pi * ctx.mpf(a.numerator) / a.denominator)

    def theta_value(self, n: int):
        """Value used by the theta builders: honors the psi(0) = 1/2 slot."""
        if n % self.modulus == 0 and n == 0 and self.zero_value_override is not None:
            return QQi(self.zero_value_override)
        return self(n)

    # -- structure ------------------------------------------------------
    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    @property
    def is_odd(self) -> bool:
        return self.parity == "odd"

    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.angles if a is not None)

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            [None if a is None else -a for a in self.angles],
            self.zero_value_override)

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return (self.modulus == other.modulus and self.angles == other.angles
                and self.zero_value_override == other.zero_value_override)

    def __hash__(self):
        return hash((self.modulus, tuple(self.angles)))

    def __repr__(self):
        tag = "trivial" if self.is_trivial() else f"conductor {self.conductor}"
        return f"DirichletCharacter(mod {self.modulus}, {self.parity}, {tag})"


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p ** i for d in divs for i in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def trivial_character(n: int, theta_zero_convention: bool = False) -> DirichletCharacter:
    angles = [Fraction(0) if math.gcd(u, n) == 1 else None for u in range(n)]
    if n == 1:
        angles = [Fraction(0)]
    override = Fraction(1, 2) if theta_zero_convention else None
    return DirichletCharacter(n, angles, zero_value_override=override)


def is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return _is_squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(abs(m))
    return False


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def kronecker_character(disc: int) -> DirichletCharacter:
    """The real primitive character (disc/.) of a fundamental discriminant."""
    if not is_fundamental_discriminant(disc):
        raise CharacterError(f"{disc} is not a fundamental discriminant")
    n = abs(disc)
    if n == 1:
        return trivial_character(1)
    angles: list[Optional[Fraction]] = []
    for u in range(n):
        v = kronecker(disc, u)
        angles.append(None if v == 0 else (Fraction(0) if v == 1 else Fraction(1, 2)))
    return DirichletCharacter(n, angles)


def psi_D_character(D: int) -> DirichletCharacter:
    """The real character mod D given by u -> (u/D)."""
    if D < 1:
        raise CharacterError("psi_D requires positive modulus")
    if D == 1:
        return trivial_character(1)
    if D % 2 == 0:
        # (u/D) is not periodic mod D for even D; the functional equations
        # that use psi_D always have gcd(D, 4N) = 1, so D is odd there
        raise CharacterError("psi_D is only defined here for odd D")
    angles: list[Optional[Fraction]] = []
    for u in range(D):
        v = kronecker(u, D)
        if math.gcd(u, D) > 1:
            angles.append(None)
        else:
            angles.append(Fraction(0) if v == 1 else Fraction(1, 2))
    return DirichletCharacter(D, angles)


def chi_t_character(t: int) -> DirichletCharacter:
    """Quadratic character attached to the extension Q(sqrt(t)); trivial for square t."""
    if t < 1:
        raise CharacterError("chi_t requires positive t")
    m = _squarefree_part(t)
    if m == 1:
        return trivial_character(1)
    disc = m if m % 4 == 1 else 4 * m
    return kronecker_character(disc)


def _squarefree_part(n: int) -> int:
    m = 1
    for p, e in factorize(n).items():
        if e % 2 == 1:
            m *= p
    return m


def character_from_generator_images(n: int, images: dict[int, Fraction]) -> DirichletCharacter:
    """Build a character mod n from angles assigned to unit-group generators.

    `images[g]` is the angle of chi(g).  Every generator of the canonical
    decomposition returned by `unit_group_generators(n)` must appear, and
    each image must be compatible with the generator's order.
    """
    gens = unit_group_generators(n)
    if set(images) != {g for g, _ in gens}:
        raise CharacterError(
            f"generator images must be given exactly on {[g for g, _ in gens]}")
    for g, order in gens:
        a = Fraction(images[g]) % 1
        if (a * order) % 1 != 0:
            raise CharacterError(
                f"image angle {a} at generator {g} incompatible with order {order}")
    angles: list[Optional[Fraction]] = [None] * n
    angles[1 % n] = Fraction(0)
    if n == 1:
        return DirichletCharacter(1, [Fraction(0)])
    # enumerate all exponent tuples
    reps = [(1, Fraction(0))]
    for g, order in gens:
        new = []
        for u, a in reps:
            x, b = u, Fraction(0)
            for _ in range(order):
                new.append((x, (a + b) % 1))
                x = (x * g) % n
                b += Fraction(images[g]) % 1
        reps = new
    for u, a in reps:
        angles[u] = a % 1
    return DirichletCharacter(n, angles)


# ---------------------------------------------------------------------------
# products, twists, Gauss sums
# ---------------------------------------------------------------------------

def char_product(chi1: DirichletCharacter, chi2: DirichletCharacter) -> DirichletCharacter:
    """Pointwise product, lifted to the lcm of the moduli."""
    n = math.lcm(chi1.modulus, chi2.modulus)
    angles: list[Optional[Fraction]] = []
    for u in range(n):
        if n > 1 and math.gcd(u, n) > 1:
            angles.append(None)
        else:
            a1, a2 = chi1.angle(u), chi2.angle(u)
            angles.append((a1 + a2) % 1)
    return DirichletCharacter(n, angles)


def twist_by_minus_one(chi: DirichletCharacter) -> DirichletCharacter:
    """Multiply by the character d -> (-1/d) (conductor 4)."""
    return char_product(chi, kronecker_character(-4))


def gauss_sum(chi: DirichletCharacter, n: int = 1, ctx=mp):
    """Generalized Gauss sum tau_chi(n) = sum_u chi(u) e^{2 pi i n u / D}."""
    D = chi.modulus
    total = ctx.mpc(0)
    for u in range(D):
        a = chi.angle(u)
        if a is None:
            continue
        phase = a + Fraction(n * u, D)
        total += ctx.e ** (2j * ctx.pi * ctx.mpf(phase.numerator) / phase.denominator)
    return total


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def all_characters(n: int) -> list[DirichletCharacter]:
    gens = unit_group_generators(n)
    chars: list[DirichletCharacter] = []
    choices = [[Fraction(j, order) for j in range(order)] for _, order in gens]
    def rec(i, images):
        if i == len(gens):
            chars.append(character_from_generator_images(n, dict(images)))
            return
        g, _ = gens[i]
        for a in choices[i]:
            rec(i + 1, images + [(g, a)])
    rec(0, [])
    return chars


@lru_cache(maxsize=None)
def primitive_even_characters(r: int) -> tuple[DirichletCharacter, ...]:
    return tuple(c for c in all_characters(r) if c.is_primitive and c.is_even)


def agree_on_coprime(chi1: DirichletCharacter, chi2: DirichletCharacter, modulus: int) -> bool:
    """Whether chi1(m) = chi2(m) for all m coprime to `modulus`."""
    span = math.lcm(modulus, chi1.modulus, chi2.modulus)
    for m in range(1, span + 1):
        if math.gcd(m, modulus) == 1:
            if chi1.angle(m) != chi2.angle(m):
                return False
    return True


# ---------------------------------------------------------------------------
# CLI spec mini-language
# ---------------------------------------------------------------------------

def make_character(spec: str) -> DirichletCharacter:
    """Parse `triv:N`, `kron:disc`, `psiD:D`, `chit:t`, `gen:N:g1=a1/b1,...`.

    `triv:N:half` requests the theta-series psi(0)=1/2 convention slot.
    """
    parts = spec.split(":")
    kind = parts[0]
    if kind == "triv":
        n = int(parts[1])
        return trivial_character(n, theta_zero_convention=(len(parts) > 2 and parts[2] == "half"))
    if kind == "kron":
        return kronecker_character(int(parts[1]))
    if kind == "psiD":
        return psi_D_character(int(parts[1]))
    if kind == "chit":
        return chi_t_character(int(parts[1]))
    if kind == "gen":
        n = int(parts[1])
        orders = dict(unit_group_generators(n))
        images: dict[int, Fraction] = {}
        for item in parts[2].split(","):
            g, e = item.split("=")
            g = int(g)
            if g not in orders:
                raise CharacterError(f"{g} is not a canonical generator mod {n}")
            # integer e means zeta^e for zeta of the generator's order;
            # an explicit fraction is taken as the angle itself
            images[g] = Fraction(int(e), orders[g]) if "/" not in e else Fraction(e)
        return character_from_generator_images(n, images)
    raise CharacterError(f"unknown character spec {spec!r}")
