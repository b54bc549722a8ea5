"""Exact complex rationals (Gaussian rationals) backed by gmpy2.mpq.

These are the coefficients of every exact-mode q-series.  Real character
computations never leave this ring, which is what turns the core series
identities into exact equalities instead of floating-point residuals.
"""
from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq


def _to_mpq(x) -> mpq:
    if isinstance(x, (int, Fraction)) or type(x) is mpq:
        return mpq(x)
    if isinstance(x, gmpy2.mpz.__class__):
        return mpq(x)
    return mpq(x)


class QQi:
    """A Gaussian rational re + im*i with mpq components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    # -- constructors -------------------------------------------------
    @classmethod
    def coerce(cls, x) -> "QQi":
        if isinstance(x, QQi):
            return x
        if isinstance(x, complex):
            raise TypeError("float complex cannot be coerced exactly; use float mode")
        return cls(x)

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = QQi.coerce(other)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = QQi.coerce(other)
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QQi.coerce(other)
        return QQi(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, other):
        o = QQi.coerce(other)
        if self.im == 0 and o.im == 0:
            return QQi(self.re * o.re)
        return QQi(self.re * o.re - self.im * o.im,
                   self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero QQi")
        return QQi((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return QQi.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("QQi powers must be integral")
        if n < 0:
            return QQi(1) / self ** (-n)
        result = QQi(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # -- comparisons / hashing ---------------------------------------
    def __eq__(self, other):
        try:
            o = QQi.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions --------------------------------------------------
    def to_fractions(self) -> tuple[Fraction, Fraction]:
        return (Fraction(self.re.numerator, self.re.denominator),
                Fraction(self.im.numerator, self.im.denominator))

    def to_mpc(self, ctx):
        """Realize in the given mpmath context."""
        re = ctx.mpf(self.re.numerator) / ctx.mpf(self.re.denominator)
        im = ctx.mpf(self.im.numerator) / ctx.mpf(self.im.denominator)
        return ctx.mpc(re, im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)
QQI_I = QQi(0, 1)


def qqi_root_of_unity(angle: Fraction) -> QQi:
    """Exact value of e^{2 pi i angle} when angle has denominator dividing 4."""
    a = Fraction(angle) % 1
    table = {
        Fraction(0): QQi(1),
        Fraction(1, 2): QQi(-1),
        Fraction(1, 4): QQi(0, 1),
        Fraction(3, 4): QQi(0, -1),
    }
    if a in table:
        return table[a]
    raise ValueError(f"root of unity e^(2 pi i {a}) is not a Gaussian rational")
