"""Truncated Laurent/Puiseux series in q with honest precision tracking.

A QSeries is known modulo q^P: exponents live on the lattice (1/M)Z, stored
coefficients cover [v, P), and every operation propagates the weakest honest
precision (a product is known mod q^{min(P_f + v_g, P_g + v_f)}, a sum mod
q^{min(P_f, P_g)}).

Two coefficient backends: exact Gaussian rationals (QQi, the default for all
real-character work) and mpmath complex at a configurable bit count.  Exact
real convolutions go through Kronecker substitution (pack into one big
integer, single GMP multiply), which is what keeps the q^500 identity checks
inside their runtime budget.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional

import gmpy2
import mpmath as mp
from gmpy2 import mpq, mpz

from .exactnum import QQi

DEFAULT_MAX_LATTICE = 24
DEFAULT_FLOAT_BITS = 128


class QSeriesError(ValueError):
    pass


class PrecisionError(QSeriesError):
    pass


class LatticeError(QSeriesError):
    pass


# ---------------------------------------------------------------------------
# exact convolution via Kronecker substitution
# ---------------------------------------------------------------------------

def _conv_int(a: list, b: list) -> list:
    """Exact convolution of integer lists (mpz), full length len(a)+len(b)-1."""
    if not a or not b:
        return []
    max_a = max(abs(x) for x in a)
    max_b = max(abs(x) for x in b)
    if max_a == 0 or max_b == 0:
        return [mpz(0)] * (len(a) + len(b) - 1)
    bound = max_a * max_b * min(len(a), len(b))
    slot = int(gmpy2.bit_length(bound)) + 1

    def split(xs):
        pos = [x if x > 0 else mpz(0) for x in xs]
        neg = [-x if x < 0 else mpz(0) for x in xs]
        return gmpy2.pack(pos, slot), gmpy2.pack(neg, slot)

    ap, an = split(a)
    bp, bn = split(b)
    n_out = len(a) + len(b) - 1

    def unpack(x):
        digits = gmpy2.unpack(x, slot) if x else []
        digits = list(digits) + [mpz(0)] * (n_out - len(digits))
        return digits[:n_out]

    pp = unpack(ap * bp)
    nn = unpack(an * bn)
    pn = unpack(ap * bn)
    np_ = unpack(an * bp)
    return [pp[i] + nn[i] - pn[i] - np_[i] for i in range(n_out)]


def _conv_mpq(a: list, b: list) -> list:
    """Exact convolution of mpq lists via a common-denominator integer pass."""
    if not a or not b:
        return []
    da = mpz(1)
    for x in a:
        da = gmpy2.lcm(da, x.denominator)
    db = mpz(1)
    for x in b:
        db = gmpy2.lcm(db, x.denominator)
    ia = [mpz(x.numerator * (da // x.denominator)) for x in a]
    ib = [mpz(x.numerator * (db // x.denominator)) for x in b]
    d = da * db
    return [mpq(c, d) for c in _conv_int(ia, ib)]


def _conv_qqi(a: list[QQi], b: list[QQi], n_out: int) -> list[QQi]:
    ar = [x.re for x in a]
    ai = [x.im for x in a]
    br = [x.re for x in b]
    bi = [x.im for x in b]
    a_real = all(x == 0 for x in ai)
    b_real = all(x == 0 for x in bi)
    rr = _conv_mpq(ar, br)
    if a_real and b_real:
        out = [QQi(x) for x in rr]
    else:
        ii = _conv_mpq(ai, bi)
        ri = _conv_mpq(ar, bi)
        ir = _conv_mpq(ai, br)
        out = [QQi(rr[i] - ii[i], ri[i] + ir[i]) for i in range(len(rr))]
    out = out[:n_out]
    out += [QQi(0)] * (n_out - len(out))
    return out


def _conv_float(a: list, b: list, n_out: int, ctx) -> list:
    # iterate over the sparser operand
    if sum(1 for x in a if x != 0) > sum(1 for x in b if x != 0):
        a, b = b, a
    out = [ctx.mpc(0)] * n_out
    for i, x in enumerate(a):
        if i >= n_out:
            break
        if x == 0:
            continue
        top = min(len(b), n_out - i)
        for j in range(top):
            y = b[j]
            if y != 0:
                out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# the series class
# ---------------------------------------------------------------------------

class QSeries:
    """Truncated series sum_{e in [v,P) cap (1/M)Z} c_e q^e, known mod q^P."""

    __slots__ = ("M", "v_idx", "p_idx", "coeffs", "mode", "prec_bits",
                 "two_pi_i_pow", "max_lattice")

    def __init__(self, M: int, v_idx: int, coeffs: list, p_idx: int,
                 mode: str = "exact", prec_bits: int = DEFAULT_FLOAT_BITS,
                 two_pi_i_pow: int = 0, max_lattice: int = DEFAULT_MAX_LATTICE):
        if M < 1:
            raise LatticeError("lattice denominator must be positive")
        if M > max_lattice:
            raise LatticeError(f"lattice denominator {M} exceeds cap {max_lattice}")
        if mode not in ("exact", "float"):
            raise QSeriesError(f"unknown coefficient mode {mode!r}")
        self.M = M
        self.mode = mode
        self.prec_bits = prec_bits
        self.two_pi_i_pow = two_pi_i_pow
        self.max_lattice = max_lattice
        coeffs = list(coeffs)
        if len(coeffs) != p_idx - v_idx:
            raise QSeriesError("coefficient array does not match [v, P) window")
        # strip leading zeros so the valuation is genuine
        while coeffs and self._is_zero_coeff(coeffs[0]):
            coeffs.pop(0)
            v_idx += 1
        self.v_idx = v_idx
        self.p_idx = p_idx
        self.coeffs = coeffs

    # -- basic structure ----------------------------------------------
    def _is_zero_coeff(self, c) -> bool:
        if self.mode == "exact":
            return c.is_zero()
        return c == 0

    def _zero(self):
        return QQi(0) if self.mode == "exact" else mp.mpc(0)

    def _coerce_scalar(self, s):
        if self.mode == "exact":
            return QQi.coerce(s)
        with mp.workprec(self.prec_bits):
            if isinstance(s, QQi):
                return s.to_mpc(mp)
            return mp.mpc(s)

    @property
    def valuation(self) -> Fraction:
        return Fraction(self.v_idx, self.M)

    @property
    def precision(self) -> Fraction:
        return Fraction(self.p_idx, self.M)

    def is_zero(self) -> bool:
        """Zero to the stored precision."""
        return not self.coeffs

    def coeff(self, e) -> object:
        """Coefficient at exponent e; raises if e is at or beyond precision."""
        e = Fraction(e)
        if e >= self.precision:
            raise PrecisionError(f"exponent {e} is beyond precision {self.precision}")
        idx = e * self.M
        if idx.denominator != 1:
            return self._zero()
        idx = int(idx)
        if idx < self.v_idx:
            return self._zero()
        return self.coeffs[idx - self.v_idx]

    def leading_coefficient(self):
        if self.is_zero():
            raise QSeriesError("zero series has no leading coefficient")
        return self.coeffs[0]

    def nonzero_items(self):
        for i, c in enumerate(self.coeffs):
            if not self._is_zero_coeff(c):
                yield Fraction(self.v_idx + i, self.M), c

    def copy(self, **overrides) -> "QSeries":
        kw = dict(M=self.M, v_idx=self.v_idx, coeffs=list(self.coeffs),
                  p_idx=self.p_idx, mode=self.mode, prec_bits=self.prec_bits,
                  two_pi_i_pow=self.two_pi_i_pow, max_lattice=self.max_lattice)
        kw.update(overrides)
        return QSeries(**kw)

    # -- lattice management -------------------------------------------
    def refined(self, M_new: int) -> "QSeries":
        if M_new % self.M != 0:
            raise LatticeError(f"cannot refine lattice {self.M} to {M_new}")
        if M_new == self.M:
            return self
        r = M_new // self.M
        coeffs = []
        for c in self.coeffs:
            coeffs.append(c)
            coeffs.extend(self._zero() for _ in range(r - 1))
        return self.copy(M=M_new, v_idx=self.v_idx * r, p_idx=self.p_idx * r,
                         coeffs=coeffs)

    def coarsened(self) -> "QSeries":
        """Reduce the lattice denominator to the minimal faithful one (the
        valuation, precision and every nonzero exponent must survive)."""
        step = math.gcd(self.M, self.v_idx, self.p_idx)
        for i, c in enumerate(self.coeffs):
            if step == 1:
                break
            if not self._is_zero_coeff(c):
                step = math.gcd(step, self.v_idx + i)
        if step <= 1 or self.M % step != 0:
            return self
        coeffs = [self.coeffs[i] for i in range(0, len(self.coeffs), step)]
        return self.copy(M=self.M // step, v_idx=self.v_idx // step,
                         p_idx=self.p_idx // step, coeffs=coeffs)

    def _common_lattice(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        M = math.lcm(self.M, other.M)
        cap = max(self.max_lattice, other.max_lattice)
        if M > cap:
            raise LatticeError(f"lattice lcm {M} exceeds cap {cap}")
        return self.refined(M), other.refined(M)

    def _common_mode(self, other: "QSeries") -> tuple["QSeries", "QSeries"]:
        if self.mode == other.mode:
            return self, other
        bits = min(self.prec_bits if self.mode == "float" else 10 ** 9,
                   other.prec_bits if other.mode == "float" else 10 ** 9)
        return self.to_float(bits), other.to_float(bits)

    def to_float(self, prec_bits: int = DEFAULT_FLOAT_BITS) -> "QSeries":
        if self.mode == "float":
            if prec_bits == self.prec_bits:
                return self
            return self.copy(prec_bits=prec_bits)
        with mp.workprec(prec_bits):
            coeffs = [c.to_mpc(mp) for c in self.coeffs]
        return self.copy(mode="float", prec_bits=prec_bits, coeffs=coeffs)

    # -- ring operations ----------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + constant_series(other, self)
        f, g = self._common_mode(other)
        f, g = f._common_lattice(g)
        if f.two_pi_i_pow != g.two_pi_i_pow:
            raise QSeriesError("cannot add series with different (2 pi i) powers")
        p_idx = min(f.p_idx, g.p_idx)
        v_idx = min(f.v_idx, g.v_idx, p_idx)
        n = p_idx - v_idx
        out = [f._zero() for _ in range(n)]
        for src in (f, g):
            for i, c in enumerate(src.coeffs):
                idx = src.v_idx + i
                if idx < p_idx:
                    out[idx - v_idx] = out[idx - v_idx] + c
        return f.copy(v_idx=v_idx, p_idx=p_idx, coeffs=out)

    __radd__ = __add__

    def __neg__(self):
        return self.copy(coeffs=[-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            other = constant_series(other, self)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + constant_series(other, self)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            s = self._coerce_scalar(other)
            if self.mode == "exact" and s.is_zero():
                return self.copy(coeffs=[QQi(0)] * len(self.coeffs))
            return self.copy(coeffs=[c * s for c in self.coeffs])
        f, g = self._common_mode(other)
        f, g = f._common_lattice(g)
        p_idx = min(f.p_idx + g.v_idx, g.p_idx + f.v_idx)
        v_idx = f.v_idx + g.v_idx
        if f.is_zero() or g.is_zero():
            return f.copy(v_idx=p_idx, p_idx=p_idx, coeffs=[],
                          two_pi_i_pow=f.two_pi_i_pow + g.two_pi_i_pow)
        n_out = p_idx - v_idx
        if n_out <= 0:
            raise PrecisionError("product has no terms below its precision")
        if f.mode == "exact":
            coeffs = _conv_qqi(f.coeffs, g.coeffs, n_out)
        else:
            with mp.workprec(f.prec_bits):
                coeffs = _conv_float(f.coeffs, g.coeffs, n_out, mp)
        return f.copy(v_idx=v_idx, p_idx=p_idx, coeffs=coeffs,
                      two_pi_i_pow=f.two_pi_i_pow + g.two_pi_i_pow)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        if self.mode == "exact":
            return self * (QQi(1) / QQi.coerce(other))
        with mp.workprec(self.prec_bits):
            return self * (1 / mp.mpc(other))

    def __eq__(self, other):
        """Equality of the stored data (lattice-normalized), incl. precision."""
        if not isinstance(other, QSeries):
            return NotImplemented
        try:
            f, g = self._common_lattice(other)
        except LatticeError:
            return False
        if f.mode != g.mode or f.two_pi_i_pow != g.two_pi_i_pow:
            return False
        return (f.v_idx == g.v_idx and f.p_idx == g.p_idx and
                all(a == b for a, b in zip(f.coeffs, g.coeffs)))

    __hash__ = None

    def agrees_with(self, other: "QSeries", tol=0) -> bool:
        """Coefficientwise agreement on the overlap precision."""
        f, g = self._common_mode(other)
        f, g = f._common_lattice(g)
        if f.two_pi_i_pow != g.two_pi_i_pow:
            return False
        p = min(f.p_idx, g.p_idx)
        lo = min(f.v_idx, g.v_idx)
        for idx in range(lo, p):
            a = f.coeffs[idx - f.v_idx] if f.v_idx <= idx else f._zero()
            b = g.coeffs[idx - g.v_idx] if g.v_idx <= idx else g._zero()
            if f.mode == "exact":
                if a != b:
                    return False
            else:
                if abs(a - b) > tol:
                    return False
        return True

    def max_abs_diff(self, other: "QSeries"):
        f = (self - other).to_float(max(self.prec_bits, 53))
        with mp.workprec(f.prec_bits):
            return max((abs(c) for c in f.coeffs), default=mp.mpf(0))

    # -- inversion, powers --------------------------------------------
    def inverse(self) -> "QSeries":
        """Series inverse; result has valuation -v and precision P - 2v."""
        if self.is_zero():
            raise QSeriesError("cannot invert a series that is zero to precision")
        n = self.p_idx - self.v_idx
        lead = self.coeffs[0]
        if self.mode == "exact":
            one = QQi(1)
            inv_lead = one / lead
        else:
            with mp.workprec(self.prec_bits):
                inv_lead = 1 / lead
        # Newton iteration on the unit part u = f / (lead q^v)
        u = [c * inv_lead for c in self.coeffs]
        x = [QQi(1)] if self.mode == "exact" else [mp.mpc(1)]
        k = 1
        while k < n:
            k2 = min(2 * k, n)
            if self.mode == "exact":
                fu = _conv_qqi(u[:k2], x, k2)
                fx = _conv_qqi(fu, x, k2)
            else:
                with mp.workprec(self.prec_bits):
                    fu = _conv_float(u[:k2], x, k2, mp)
                    fx = _conv_float(fu, x, k2, mp)
            x = [2 * x[i] - fx[i] if i < len(x) else -fx[i] for i in range(k2)]
            k = k2
        coeffs = [c * inv_lead for c in x]
        return self.copy(v_idx=-self.v_idx, p_idx=self.p_idx - 2 * self.v_idx,
                         coeffs=coeffs, two_pi_i_pow=-self.two_pi_i_pow)

    def pow(self, r) -> "QSeries":
        """f^r for rational r; fractional r uses exp(r log) on the unit part
        with the principal branch on the leading coefficient."""
        r = Fraction(r)
        if r.denominator == 1:
            return self._int_pow(int(r))
        if self.two_pi_i_pow != 0:
            raise QSeriesError("fractional power of a series with symbolic (2 pi i) factor")
        if self.is_zero():
            raise QSeriesError("fractional power of zero series")
        new_v = Fraction(self.v_idx, self.M) * r
        M_new = math.lcm(self.M, new_v.denominator)
        if M_new > self.max_lattice:
            raise LatticeError(
                f"fractional power needs lattice denominator {M_new} > cap {self.max_lattice}")
        lead = self.coeffs[0]
        n = self.p_idx - self.v_idx
        if self.mode == "exact":
            inv_lead = QQi(1) / lead
            u = [c * inv_lead for c in self.coeffs]  # u[0] == 1
            e = _exp_r_log(u, r, n, "exact")
            c_pow = _exact_rational_power(lead, r)
        else:
            with mp.workprec(self.prec_bits):
                inv_lead = 1 / lead
                u = [c * inv_lead for c in self.coeffs]
                e = _exp_r_log(u, r, n, "float", self.prec_bits)
                c_pow = mp.power(lead, mp.mpf(r.numerator) / r.denominator)
        ratio = M_new // self.M
        coeffs = []
        for c in e:
            coeffs.append(c * c_pow)
            coeffs.extend(self._zero() for _ in range(ratio - 1))
        v_idx_new = int(new_v * M_new)
        p_idx_new = v_idx_new + n * ratio
        return self.copy(M=M_new, v_idx=v_idx_new, p_idx=p_idx_new, coeffs=coeffs)

    def _int_pow(self, n: int) -> "QSeries":
        if n == 0:
            if self.is_zero():
                raise QSeriesError("0^0 of a zero-to-precision series")
            return constant_series(1, self, p_idx_override=self.p_idx - self.v_idx,
                                   M_override=self.M)
        base = self.inverse() if n < 0 else self
        n = abs(n)
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __pow__(self, r):
        return self.pow(r)

    # -- operator building blocks -------------------------------------
    def bol(self, m: int) -> "QSeries":
        """Multiply the coefficient at exponent e by e^m (Bol at the level of
        Fourier expansions); the e = 0 term is annihilated for m >= 1."""
        if m < 0 or not isinstance(m, int):
            raise QSeriesError("bol power must be a nonnegative integer")
        if m == 0:
            return self
        out = []
        for i, c in enumerate(self.coeffs):
            e = Fraction(self.v_idx + i, self.M)
            if self.mode == "exact":
                out.append(c * QQi(e ** m))
            else:
                with mp.workprec(self.prec_bits):
                    out.append(c * (mp.mpf(e.numerator) / e.denominator) ** m)
        return self.copy(coeffs=out)

    def rescale(self, m: int) -> "QSeries":
        """Substitute q -> q^m, i.e. f(z) -> f(mz)."""
        if m < 1:
            raise QSeriesError("rescale factor must be a positive integer")
        if m == 1:
            return self
        n = self.p_idx - self.v_idx
        coeffs = []
        for i in range(max(0, (n - 1) * m + 1)):
            if i % m == 0:
                coeffs.append(self.coeffs[i // m])
            else:
                coeffs.append(self._zero())
        v_idx = self.v_idx * m
        p_idx = self.p_idx * m
        coeffs += [self._zero()] * (p_idx - v_idx - len(coeffs))
        return self.copy(v_idx=v_idx, p_idx=p_idx, coeffs=coeffs)

    def coeff_map(self, w: Callable[[Fraction], object]) -> "QSeries":
        """Multiply the coefficient at each stored exponent e by w(e)."""
        out = []
        for i, c in enumerate(self.coeffs):
            e = Fraction(self.v_idx + i, self.M)
            mult = w(e)
            if self.mode == "exact":
                out.append(c * QQi.coerce(mult))
            else:
                with mp.workprec(self.prec_bits):
                    out.append(c * (mult.to_mpc(mp) if isinstance(mult, QQi) else mp.mpc(mult)))
        return self.copy(coeffs=out)

    def truncated(self, P) -> "QSeries":
        """Forget knowledge beyond q^P (P must not exceed current precision)."""
        P = Fraction(P)
        p_idx = P * self.M
        if p_idx.denominator != 1:
            raise LatticeError("truncation point must lie on the lattice")
        p_idx = int(p_idx)
        if p_idx > self.p_idx:
            raise PrecisionError("cannot extend precision by truncation")
        keep = max(0, p_idx - self.v_idx)
        return self.copy(p_idx=p_idx, coeffs=self.coeffs[:keep],
                         v_idx=min(self.v_idx, p_idx))

    # -- evaluation ----------------------------------------------------
    def growth_fit(self):
        """Fit |c_e| <= A exp(C sqrt(e)) over the stored coefficients.

        Heuristic (documented in reports): least squares of log|c| against
        sqrt(e) over the top half of the nonzero spectrum, then A enlarged so
        the model dominates every stored coefficient.  Never a proof.
        """
        items = [(float(e), c) for e, c in self.nonzero_items() if e > 0]
        with mp.workprec(max(self.prec_bits, 53)):
            mags = []
            for e, c in items:
                ac = abs(c.to_mpc(mp)) if isinstance(c, QQi) else abs(c)
                if ac > 0:
                    mags.append((e, mp.log(ac)))
            if not mags:
                # nothing beyond exponent 0 to extrapolate from
                return mp.mpf(0), mp.mpf(0)
            top = mags[len(mags) // 2:]
            xs = [mp.sqrt(e) for e, _ in top]
            ys = [l for _, l in top]
            n = len(xs)
            if n >= 2:
                sx = mp.fsum(xs); sy = mp.fsum(ys)
                sxx = mp.fsum(x * x for x in xs); sxy = mp.fsum(x * y for x, y in zip(xs, ys))
                denom = n * sxx - sx * sx
                C = (n * sxy - sx * sy) / denom if denom != 0 else mp.mpf(0)
            else:
                C = mp.mpf(0)
            C = max(C, mp.mpf(0))
            logA = max(l - C * mp.sqrt(e) for e, l in mags)
            return mp.e ** logA, C

    def eval(self, z, prec_bits: Optional[int] = None):
        """Value at z (Im z > 0) plus a heuristic tail bound for the
        truncated part, from the exp(C sqrt(n)) growth model."""
        bits = prec_bits or max(self.prec_bits, 128)
        with mp.workprec(bits):
            z = mp.mpc(z)
            if mp.im(z) <= 0:
                raise QSeriesError("evaluation requires Im z > 0")
            w = mp.exp(2j * mp.pi * z / self.M)  # q^(1/M)
            total = mp.mpc(0)
            # Horner over the contiguous lattice window
            for c in reversed(self.coeffs):
                cv = c.to_mpc(mp) if isinstance(c, QQi) else mp.mpc(c)
                total = total * w + cv
            total *= w ** self.v_idx
            if self.two_pi_i_pow:
                total *= (2j * mp.pi) ** self.two_pi_i_pow
            A, C = self.growth_fit()
            y = mp.im(z)
            tail = mp.mpf(0)
            e = Fraction(self.p_idx, self.M)
            step = Fraction(1, self.M)
            for _ in range(100000):
                term = A * mp.exp(C * mp.sqrt(float(e)) - 2 * mp.pi * float(e) * y)
                tail += term
                e += step
                if term < tail * mp.mpf("1e-35") or term < mp.mpf("1e-80") * (abs(total) + 1):
                    break
            return total, tail

    # -- serialization -------------------------------------------------
    def to_file(self, path: str):
        with open(path, "w") as fh:
            v = Fraction(self.v_idx, self.M)
            P = Fraction(self.p_idx, self.M)
            mode = "exact" if self.mode == "exact" else f"float:{self.prec_bits}"
            fh.write(f"{self.M} {v.numerator} {v.denominator} "
                     f"{P.numerator} {P.denominator} {mode}\n")
            for i, c in enumerate(self.coeffs):
                e = Fraction(self.v_idx + i, self.M)
                if self.mode == "exact":
                    re, im = c.to_fractions()
                    fh.write(f"{e.numerator} {e.denominator} "
                             f"{re.numerator} {re.denominator} "
                             f"{im.numerator} {im.denominator}\n")
                else:
                    with mp.workprec(self.prec_bits):
                        fh.write(f"{e.numerator} {e.denominator} "
                                 f"{mp.nstr(mp.re(c), int(self.prec_bits * 0.31) + 3)} "
                                 f"{mp.nstr(mp.im(c), int(self.prec_bits * 0.31) + 3)}\n")

    @classmethod
    def from_file(cls, path: str, max_lattice: int = DEFAULT_MAX_LATTICE) -> "QSeries":
        with open(path) as fh:
            header = fh.readline().split()
            M = int(header[0])
            v = Fraction(int(header[1]), int(header[2]))
            P = Fraction(int(header[3]), int(header[4]))
            mode = header[5]
            v_idx = int(v * M)
            p_idx_f = P * M
            if p_idx_f.denominator != 1:
                raise LatticeError("file precision not on the stated lattice")
            p_idx = int(p_idx_f)
            entries = {}
            prec_bits = DEFAULT_FLOAT_BITS
            exact = mode == "exact"
            if not exact:
                prec_bits = int(mode.split(":")[1])
            for line in fh:
                parts = line.split()
                if not parts:
                    continue
                e = Fraction(int(parts[0]), int(parts[1]))
                idx = e * M
                if idx.denominator != 1:
                    raise LatticeError("file exponent not on the stated lattice")
                if exact:
                    entries[int(idx)] = QQi(Fraction(int(parts[2]), int(parts[3])),
                                            Fraction(int(parts[4]), int(parts[5])))
                else:
                    with mp.workprec(prec_bits):
                        entries[int(idx)] = mp.mpc(mp.mpf(parts[2]), mp.mpf(parts[3]))
            zero = QQi(0) if exact else mp.mpc(0)
            coeffs = [entries.get(i, zero) for i in range(v_idx, p_idx)]
            return cls(M, v_idx, coeffs, p_idx, mode="exact" if exact else "float",
                       prec_bits=prec_bits, max_lattice=max(max_lattice, M))

    # -- display --------------------------------------------------------
    def __repr__(self):
        terms = []
        for e, c in list(self.nonzero_items())[:6]:
            terms.append(f"{c}*q^{e}")
        body = " + ".join(terms) if terms else "0"
        return (f"QSeries({body} + O(q^{self.precision}), "
                f"mode={self.mode}, M={self.M})")


# ---------------------------------------------------------------------------
# constructors and free-function aliases
# ---------------------------------------------------------------------------

def constant_series(value, like: QSeries, p_idx_override: Optional[int] = None,
                    M_override: Optional[int] = None) -> QSeries:
    M = M_override or like.M
    p_idx = p_idx_override if p_idx_override is not None else like.p_idx
    p_idx = max(p_idx, 1)
    if like.mode == "exact":
        coeffs = [QQi.coerce(value)] + [QQi(0)] * (p_idx - 1)
    else:
        with mp.workprec(like.prec_bits):
            coeffs = [mp.mpc(value)] + [mp.mpc(0)] * (p_idx - 1)
    return QSeries(M, 0, coeffs, p_idx, mode=like.mode, prec_bits=like.prec_bits,
                   max_lattice=like.max_lattice)


def from_coeff_dict(entries: dict, P, M: int = 1, mode: str = "exact",
                    prec_bits: int = DEFAULT_FLOAT_BITS,
                    max_lattice: int = DEFAULT_MAX_LATTICE) -> QSeries:
    """Build a series from {exponent: coefficient} known modulo q^P."""
    P = Fraction(P)
    p_idx = P * M
    if p_idx.denominator != 1:
        raise LatticeError("precision must lie on the lattice")
    p_idx = int(p_idx)
    idxs = {}
    for e, c in entries.items():
        idx = Fraction(e) * M
        if idx.denominator != 1:
            raise LatticeError(f"exponent {e} not on lattice 1/{M}")
        if int(idx) < p_idx:
            idxs[int(idx)] = c
    v_idx = min(idxs, default=p_idx)
    zero = QQi(0) if mode == "exact" else mp.mpc(0)
    coeffs = []
    for i in range(v_idx, p_idx):
        c = idxs.get(i, zero)
        if mode == "exact":
            c = QQi.coerce(c)
        else:
            with mp.workprec(prec_bits):
                c = mp.mpc(c)
        coeffs.append(c)
    return QSeries(M, v_idx, coeffs, p_idx, mode=mode, prec_bits=prec_bits,
                   max_lattice=max_lattice)


def _exp_r_log(u: list, r: Fraction, n: int, mode: str, prec_bits: int = 0) -> list:
    """(1 + sum u_j q^j)^r as exp(r log), on relative coefficient arrays.

    u[0] must be 1; returns n coefficients.
    """
    if mode == "exact":
        zero, one = QQi(0), QQi(1)
        rr = QQi(r)
        def div(c, k):
            return c * QQi(Fraction(1, k))
    else:
        with mp.workprec(prec_bits):
            zero, one = mp.mpc(0), mp.mpc(1)
            rr = mp.mpf(r.numerator) / r.denominator
        def div(c, k):
            with mp.workprec(prec_bits):
                return c / k
    # l = log(1+w) via (1+w) l' = w'
    l = [zero] * n
    for k in range(1, n):
        acc = k * u[k] if k < len(u) else zero
        for j in range(1, k):
            acc = acc - (j * l[j]) * (u[k - j] if k - j < len(u) else zero)
        l[k] = div(acc, k)
    # e = exp(r l) via e' = r l' e
    e = [zero] * n
    e[0] = one
    for k in range(1, n):
        acc = zero
        for j in range(1, k + 1):
            acc = acc + (j * l[j]) * e[k - j]
        e[k] = div(rr * acc, k)
    return e


def _exact_rational_power(c: QQi, r: Fraction) -> QQi:
    """c^r for Gaussian-rational c, exact or raise.  Handles positive
    rationals whose numerator/denominator are perfect powers; anything else
    needs float mode."""
    if not c.is_real() or c.re <= 0:
        raise QSeriesError(
            f"exact mode cannot take the {r.denominator}-th root of {c}; use float mode")
    num, den = mpz(c.re.numerator), mpz(c.re.denominator)
    rn, exact_n = gmpy2.iroot(num, r.denominator)
    rd, exact_d = gmpy2.iroot(den, r.denominator)
    if not (exact_n and exact_d):
        raise QSeriesError(
            f"leading coefficient {c} has no exact {r.denominator}-th root; use float mode")
    return QQi(mpq(rn, rd)) ** r.numerator


# -- spec-facing operation names -------------------------------------------

def qs_invert(f: QSeries) -> QSeries:
    return f.inverse()


def qs_pow(f: QSeries, r) -> QSeries:
    return f.pow(r)


def qs_bol(f: QSeries, m: int) -> QSeries:
    return f.bol(m)


def qs_rescale(f: QSeries, m: int) -> QSeries:
    return f.rescale(m)


def coeff_map(f: QSeries, w) -> QSeries:
    return f.coeff_map(w)


def qs_eval(f: QSeries, z, prec_bits: Optional[int] = None):
    return f.eval(z, prec_bits=prec_bits)


# ---------------------------------------------------------------------------
# the discriminant cusp form
# ---------------------------------------------------------------------------

def delta_cusp(P: int) -> QSeries:
    """Delta = q prod (1-q^n)^24 to absolute precision P, exact integers."""
    if P < 2:
        raise QSeriesError("delta_cusp needs precision at least 2")
    n_rel = P - 1  # relative terms of the eta-product part
    eta24 = _euler_product_pow24(n_rel)
    coeffs = [QQi(c) for c in eta24]
    return QSeries(1, 1, coeffs, P, mode="exact")


def _euler_product_pow24(n: int) -> list:
    """First n coefficients of prod(1-q^m)^24 via the pentagonal expansion."""
    e = [mpz(0)] * n
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            exp = kk * (3 * kk - 1) // 2
            if exp < n:
                e[exp] += (-1) ** (kk % 2)
                done = False
        if done and k > 0:
            break
        k += 1
    # e^24 = ((e^2)^2)^2 * ((e^2)^2)^2 * ... use e2=e^2, e4, e8, e24=e8^3
    def trunc_mul(a, b):
        return _conv_int(a, b)[:n]
    e2 = trunc_mul(e, e)
    e4 = trunc_mul(e2, e2)
    e8 = trunc_mul(e4, e4)
    e16 = trunc_mul(e8, e8)
    return trunc_mul(e16, e8)
