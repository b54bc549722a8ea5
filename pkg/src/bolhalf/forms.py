"""Weights and modular-form metadata shared by the operator and verifier layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .characters import DirichletCharacter, trivial_character


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class HalfWeight:
    """A weight in (1/2)Z, stored as its doubled integer value."""
    doubled: int

    @classmethod
    def of(cls, k) -> "HalfWeight":
        k = Fraction(k)
        if k.denominator not in (1, 2):
            raise FormError(f"weight {k} is not in (1/2)Z")
        return cls(int(k * 2))

    @property
    def k(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def is_integral(self) -> bool:
        return self.doubled % 2 == 0

    @property
    def is_half_integral(self) -> bool:
        return self.doubled % 2 == 1

    def __add__(self, other: "HalfWeight") -> "HalfWeight":
        return HalfWeight(self.doubled + other.doubled)

    def __str__(self):
        return str(self.k)


@dataclass(frozen=True)
class FormMeta:
    """Weight / level / character / pole-order bookkeeping for a form."""
    weight: HalfWeight
    level: int
    character: DirichletCharacter = field(default_factory=lambda: trivial_character(1))
    pole_order: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise FormError("level must be positive")
        if self.weight.is_half_integral and self.level % 4 != 0:
            raise FormError(
                f"half-integral weight needs 4 | N, got N = {self.level}")
        if self.level % self.character.modulus != 0:
            raise FormError(
                f"character modulus {self.character.modulus} does not divide level {self.level}")
        if self.pole_order < 0:
            raise FormError("pole order must be nonnegative")
