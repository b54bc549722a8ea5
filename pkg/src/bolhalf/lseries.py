"""L-series laboratory.

Test functions phi with compact support in (0, oo), their Laplace transforms,
the twisted L-series L_f(chi, phi) = sum c_n tau_{chibar}(n) (L phi)(2 pi n/D),
both functional equations, the alpha_D multiplier/time-domain operator, the
sufficient-condition residual, and half-integer Bessel closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath as mp
import sympy as sp

from .characters import DirichletCharacter, char_product, eps, gauss_sum, \
    psi_D_character
from .forms import FormMeta, HalfWeight
from .qseries import QSeries

DEFAULT_L_BITS = 128
DEFAULT_QUAD_TOL = mp.mpf("1e-12")


class LSeriesError(ValueError):
    pass


class ConvergenceError(LSeriesError):
    pass


class QuadratureError(LSeriesError):
    pass


class InversionError(LSeriesError):
    pass


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

def _as_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


class TestFunction:
    """A piecewise-smooth phi supported on [a, b] with 0 < a (b may be oo).

    Carries optional symbolic form (for exact derivatives) and explicit
    derivative evaluators.  Values outside the support are exactly 0.
    """

    def __init__(self, evaluator: Callable, support: tuple, smoothness: int = 0,
                 derivative_evaluators: Optional[list] = None,
                 breakpoints: tuple = (), sym=None, symvar=None, label: str = "phi"):
        a, b = support
        if not (0 < a < b):
            raise LSeriesError(f"support [{a}, {b}] must satisfy 0 < a < b")
        self.evaluator = evaluator
        self.support = (_as_mpf(a), b if b == mp.inf else _as_mpf(b))
        self.smoothness = smoothness
        self.derivative_evaluators = derivative_evaluators or []
        self.breakpoints = tuple(breakpoints)
        self.sym = sym
        self.symvar = symvar
        self.label = label
        self._deriv_cache: dict[int, Callable] = {}
        self._lap_cache: dict = {}
        self._l1 = None

    def __call__(self, t):
        a, b = self.support
        t = mp.mpf(t)
        if t <= a or t >= b:
            return mp.mpc(0)
        return mp.mpc(self.evaluator(t))

    def derivative(self, m: int) -> "TestFunction":
        if m == 0:
            return self
        if m in self._deriv_cache:
            ev = self._deriv_cache[m]
        elif m <= len(self.derivative_evaluators):
            ev = self.derivative_evaluators[m - 1]
        elif self.sym is not None and m <= self.smoothness:
            expr = sp.diff(self.sym, self.symvar, m)
            ev = sp.lambdify(self.symvar, expr, "mpmath")
            self._deriv_cache[m] = ev
        else:
            raise LSeriesError(
                f"derivative of order {m} unavailable (smoothness {self.smoothness})")
        return TestFunction(ev, self.support, max(0, self.smoothness - m),
                            breakpoints=self.breakpoints,
                            sym=None if self.sym is None else sp.diff(self.sym, self.symvar, m),
                            symvar=self.symvar,
                            label=f"{self.label}^({m})")

    def l1_norm(self, prec_bits: int = DEFAULT_L_BITS):
        if self._l1 is None:
            with mp.workprec(prec_bits):
                self._l1 = mp.quad(lambda t: abs(self(t)), self._panels())
        return self._l1

    def _panels(self):
        a, b = self.support
        return [a, *sorted(x for x in self.breakpoints if a < x < b), b]

    # interface shared with LaplaceMultiplier --------------------------------
    def laplace(self, s, prec_bits: int = DEFAULT_L_BITS,
                tol=DEFAULT_QUAD_TOL):
        # memoized: L-series sums hit the same transform points repeatedly
        # (e.g. one twist per character modulo D at the same 2 pi n / D grid)
        key = (str(s), prec_bits, str(tol))
        if key not in self._lap_cache:
            self._lap_cache[key] = laplace(self, s, prec_bits=prec_bits, tol=tol)
        return self._lap_cache[key]

    def lap_bound(self, sigma, prec_bits: int = DEFAULT_L_BITS):
        """Upper bound for |laplace(sigma)|, real sigma (either sign)."""
        a, b = self.support
        with mp.workprec(prec_bits):
            sigma = mp.mpf(sigma)
            peak = -sigma * a if sigma >= 0 else -sigma * b
            if not mp.isfinite(peak):
                raise LSeriesError("lap_bound needs finite support for sigma < 0")
            return self.l1_norm(prec_bits) * mp.exp(peak)


def bump(a, b) -> TestFunction:
    """exp(-1/((t-a)(b-t))) on [a, b]; symbolic derivatives available."""
    t = sp.Symbol("t", positive=True)
    expr = sp.exp(-1 / ((t - a) * (b - t)))
    ev = sp.lambdify(t, expr, "mpmath")
    return TestFunction(ev, (a, b), smoothness=12, sym=expr, symvar=t,
                        label=f"bump[{a},{b}]")


def indicator(a, b) -> TestFunction:
    return TestFunction(lambda t: mp.mpf(1), (a, b), smoothness=0,
                        label=f"indicator[{a},{b}]")


def poly_bump(a, b, m: int) -> TestFunction:
    """((t-a)(b-t))^m, normalized; C^{m-1} at the endpoints."""
    if m < 1:
        raise LSeriesError("poly_bump exponent must be >= 1")
    t = sp.Symbol("t", positive=True)
    expr = ((t - a) * (b - t)) ** m
    ev = sp.lambdify(t, expr, "mpmath")
    return TestFunction(ev, (a, b), smoothness=m - 1, sym=expr, symvar=t,
                        label=f"poly_bump[{a},{b}]^{m}")


def make_testfunction(spec: str) -> TestFunction:
    """Parse `bump:a,b`, `indicator:a,b`, `poly-bump:a,b,m`."""
    kind, _, rest = spec.partition(":")
    args = [Fraction(x) for x in rest.split(",")] if rest else []
    if kind == "bump" and len(args) == 2:
        return bump(*args)
    if kind == "indicator" and len(args) == 2:
        return indicator(*args)
    if kind == "poly-bump" and len(args) == 3:
        return poly_bump(args[0], args[1], int(args[2]))
    raise LSeriesError(f"unknown test-function spec {spec!r}")


# ---------------------------------------------------------------------------
# Laplace transform
# ---------------------------------------------------------------------------

def _l1_proxy(phi: TestFunction, pts, prec_bits: int):
    """Error scale for the quadrature check: the cached L1 norm when the
    support is finite, an L1 norm over the truncated panels otherwise."""
    if phi.support[1] != mp.inf:
        return phi.l1_norm(prec_bits)
    return mp.quad(lambda t: abs(phi(t)), pts)


def laplace(phi: TestFunction, s, prec_bits: int = DEFAULT_L_BITS,
            tol=DEFAULT_QUAD_TOL):
    """(L phi)(s) = int_0^oo e^{-st} phi(t) dt by panel-adaptive quadrature.

    The quadrature runs at the full prec_bits; callers with expensive
    evaluators and loose accuracy needs should lower prec_bits rather than
    just the tolerance.
    """
    with mp.workprec(prec_bits):
        s = mp.mpc(s)
        pts = phi._panels()
        tail_bound = mp.mpf(0)
        if pts[-1] == mp.inf:
            re_s = mp.re(s)
            if re_s <= 0:
                raise LSeriesError(
                    "Laplace of an infinite-support function needs Re s > 0")
            # truncate where the probed decay of phi kills the integrand,
            # with geometrically growing panels up to the cut
            T = pts[-2] + 1
            while 4 * abs(phi(T)) * mp.exp(-re_s * T) / re_s > tol / 10:
                T *= 2
                if T > mp.mpf("1e9"):
                    raise QuadratureError(
                        f"no usable truncation point for {phi.label} "
                        f"at s={mp.nstr(s, 8)}")
            tail_bound = 4 * abs(phi(T)) * mp.exp(-re_s * T) / re_s
            seq = [pts[-2]]
            step = mp.mpf(1)
            while seq[-1] + step < T:
                seq.append(seq[-1] + step)
                step *= 2
            seq.append(T)
            pts = pts[:-1] + seq[1:]
        freq = abs(mp.im(s))
        if freq > 4:
            # subdivide so each panel spans at most ~one oscillation
            step = 2 * mp.pi / freq
            fine = [pts[0]]
            for lo, hi in zip(pts, pts[1:]):
                if hi == mp.inf:
                    fine.append(hi)
                    continue
                n = max(1, int(mp.ceil((hi - lo) / step)))
                fine.extend(lo + (hi - lo) * j / n for j in range(1, n + 1))
            pts = fine
        val, err = mp.quad(lambda t: mp.exp(-s * t) * phi(t), pts,
                           error=True)
        err += tail_bound
        scale = abs(val) + _l1_proxy(phi, pts, prec_bits)
        if err > tol * scale:
            raise QuadratureError(
                f"quadrature error {mp.nstr(err, 5)} above tolerance "
                f"{mp.nstr(tol * scale, 5)} for {phi.label} at s={mp.nstr(s, 8)}")
        return val


def testfn_fricke(phi: TestFunction, k: HalfWeight, M: int) -> TestFunction:
    """(phi|_k W_M)(x) = phi((Mx)^{-1}) (Mx)^{-k}; support [1/(Mb), 1/(Ma)].

    The result is cached on phi per (k, M), so repeated transports of the
    same test function share one Laplace memo table."""
    if M < 1:
        raise LSeriesError("Fricke level must be positive")
    cache = getattr(phi, "_fricke_cache", None)
    if cache is None:
        cache = phi._fricke_cache = {}
    if (k.doubled, M) in cache:
        return cache[(k.doubled, M)]
    a, b = phi.support
    kk = mp.mpf(k.doubled) / 2
    new_a = 0 if b == mp.inf else 1 / (M * b)
    new_b = 1 / (M * a)
    if new_a == 0:
        # open left endpoint: nudge inside to satisfy the 0 < a contract,
        # the integrable singularity is handled by quadrature panels
        new_a = mp.mpf("1e-30")

    def ev(x):
        x = mp.mpf(x)
        return phi(1 / (M * x)) * mp.power(M * x, -kk)

    breaks = tuple(1 / (M * mp.mpf(c)) for c in phi.breakpoints if c > 0)
    sym = None
    symvar = None
    if phi.sym is not None:
        x = sp.Symbol("x", positive=True)
        sym = phi.sym.subs(phi.symvar, 1 / (M * x)) * (M * x) ** sp.Rational(-k.doubled, 2)
        symvar = x
    out = TestFunction(ev, (new_a, new_b), smoothness=phi.smoothness,
                       breakpoints=breaks, sym=sym, symvar=symvar,
                       label=f"{phi.label}|W_{M}")
    cache[(k.doubled, M)] = out
    return out


# ---------------------------------------------------------------------------
# L-series values
# ---------------------------------------------------------------------------

def _tau_table(chi: DirichletCharacter, prec_bits: int):
    D = chi.modulus
    with mp.workprec(prec_bits):
        return [gauss_sum(chi, r, mp) for r in range(D)]


def lseries_value(f: QSeries, chi: DirichletCharacter, phi,
                  prec_bits: int = DEFAULT_L_BITS, tol=mp.mpf("1e-12")) -> complex:
    """L_f(chi, phi) = sum_n c_n tau_{chibar}(n) (L phi)(2 pi n / D).

    `phi` is a TestFunction or any object with .laplace / .lap_bound /
    .support.  The sum is truncated once the coefficient growth model pushes
    the remaining terms below the tolerance; if the stored precision of f is
    exhausted first, a ConvergenceError reports the required range.
    """
    if f.M != 1:
        raise LSeriesError("L-series defined here for integer-exponent expansions")
    if f.two_pi_i_pow != 0:
        raise LSeriesError("strip the symbolic (2 pi i) factor before L-evaluation")
    D = chi.modulus
    taus = _tau_table(chi.conjugate(), prec_bits)
    A, C = f.growth_fit()
    a_supp = phi.support[0]
    with mp.workprec(prec_bits):
        total = mp.mpc(0)
        scale = mp.mpf(0)
        tau_max = mp.mpf(D)
        n = f.v_idx
        while n < f.p_idx:
            c = f.coeff(n)
            cv = c.to_mpc(mp) if hasattr(c, "to_mpc") else mp.mpc(c)
            if cv != 0:
                term = cv * taus[n % D] * phi.laplace(mp.mpf(2) * mp.pi * n / D,
                                                     prec_bits=prec_bits)
                total += term
                scale = max(scale, abs(term))
            n += 1
            if n > 0:
                # certified bound on everything from n on
                rest = _growth_tail(A, C, n, D, a_supp, tau_max, phi, prec_bits)
                if rest < tol * max(scale, mp.mpf(1)):
                    return total
        # stored coefficients exhausted before the bound collapsed
        need = n
        rest = _growth_tail(A, C, n, D, a_supp, tau_max, phi, prec_bits)
        while rest > tol * max(scale, mp.mpf(1)) and need < 10 ** 7:
            need = int(need * 1.5) + 1
            rest = _growth_tail(A, C, need, D, a_supp, tau_max, phi, prec_bits)
        raise ConvergenceError(
            f"convergence certificate failed at stored precision q^{f.precision}; "
            f"approximately {need} coefficients required")


def _growth_tail(A, C, n_start: int, D: int, a_supp, tau_max, phi, prec_bits):
    """Bound sum_{n >= n_start} A e^{C sqrt n} tau_max |L phi|(2 pi n / D).

    The bound terms have the shape A e^{C sqrt n} w(n) e^{-c n} with w a
    fixed power of n (from a Laplace multiplier) times a constant, so the
    consecutive ratio t_{n+1}/t_n is nonincreasing in n; once it drops
    below 1 the tail is certified by the geometric bound t_n / (1 - r)."""
    def term(n):
        return A * mp.exp(C * mp.sqrt(n)) * tau_max * phi.lap_bound(
            mp.mpf(2) * mp.pi * n / D, prec_bits)

    with mp.workprec(prec_bits):
        total = mp.mpf(0)
        n = n_start
        t = term(n)
        for _ in range(100000):
            t_next = term(n + 1)
            if t > 0 and t_next < t:
                r = t_next / t
                return total + t / (1 - r)
            total += t
            if t_next < mp.mpf("1e-40") * (total + 1):
                return total + t_next
            n += 1
            t = t_next
        return total


# ---------------------------------------------------------------------------
# functional equations
# ---------------------------------------------------------------------------

def fe_constant(meta: FormMeta, chi: DirichletCharacter,
                prec_bits: int = DEFAULT_L_BITS):
    """The scalar relating L_f(chi, phi) to L_g(.., phi|_{2-k}W_N):

        integral k:      i^k chi(-N) psi(D) N^{1 - k/2}
        half-integral k: i^k psi_D(-1)^{k-1/2} psi_D(N)
                         chi(-N) psi(D) eps_D^{-1} N^{1 - k/2}
    """
    k, N, psi = meta.weight, meta.level, meta.character
    D = chi.modulus
    if math.gcd(D, N) != 1:
        raise LSeriesError("functional equation requires gcd(D, N) = 1")
    with mp.workprec(prec_bits):
        kk = mp.mpf(k.doubled) / 2
        cst = mp.exp(1j * mp.pi * kk / 2)         # i^k, principal
        cst *= chi.cvalue(-N, mp) * psi.cvalue(D, mp)
        cst *= mp.power(mp.mpf(N), 1 - kk / 2)
        if k.is_half_integral:
            psiD = psi_D_character(D)
            # psi_D(-1)^{k - 1/2} with k - 1/2 an integer
            e = (k.doubled - 1) // 2
            sgn = psiD(-1)
            cst *= (sgn.to_mpc(mp) if hasattr(sgn, "to_mpc") else mp.mpc(sgn)) ** e
            v = psiD(N)
            cst *= v.to_mpc(mp) if hasattr(v, "to_mpc") else mp.mpc(v)
            cst /= eps(D).to_mpc(mp)
        return cst


def fe_residual(f: QSeries, g: QSeries, meta: FormMeta,
                chi: DirichletCharacter, phi: TestFunction,
                prec_bits: int = DEFAULT_L_BITS, tol=mp.mpf("1e-12")) -> dict:
    """Residual of L_f(chi, phi) = const * L_g(chi', phi|_{2-k}W_N) where
    g = f|_k W_N, chi' = chibar (integral) or chibar psi_D (half-integral)."""
    k, N = meta.weight, meta.level
    phi_w = testfn_fricke(phi, HalfWeight(4 - k.doubled), N)
    chibar = chi.conjugate()
    if k.is_half_integral:
        chi_rhs = char_product(chibar, psi_D_character(chi.modulus)) \
            if chi.modulus > 1 else chibar
    else:
        chi_rhs = chibar
    with mp.workprec(prec_bits):
        lhs = lseries_value(f, chi, phi, prec_bits=prec_bits, tol=tol)
        rhs_l = lseries_value(g, chi_rhs, phi_w, prec_bits=prec_bits, tol=tol)
        cst = fe_constant(meta, chi, prec_bits=prec_bits)
        rhs = cst * rhs_l
        scale = max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
        res = abs(lhs - rhs) / scale
        return {
            "lhs": complex(lhs),
            "rhs": complex(rhs),
            "constant": complex(cst),
            "residual": float(res),
        }


# ---------------------------------------------------------------------------
# alpha_D
# ---------------------------------------------------------------------------

class LaplaceMultiplier:
    """alpha_D(phi) carried on the Laplace side: its transform at s is
    (Ds/2pi)^{k-1} h(Ds/2pi) (L phi)(s), which is all an L-series needs."""

    def __init__(self, phi: TestFunction, D: int, k: HalfWeight,
                 h: Callable, h_bound=1, label: str = "alpha"):
        self.phi = phi
        self.D = D
        self.k = k
        self.h = h
        self.h_bound = mp.mpf(h_bound)
        self.support = phi.support
        self.label = f"{label}_{D}({phi.label})"

    def _factor(self, s):
        km1 = mp.mpf(self.k.doubled) / 2 - 1
        w = self.D * mp.mpc(s) / (2 * mp.pi)
        if w == 0:
            return mp.mpc(0) if km1 > 0 else mp.mpc(self.h(0))
        return mp.power(w, km1) * mp.mpc(self.h(w))

    def laplace(self, s, prec_bits: int = DEFAULT_L_BITS, tol=DEFAULT_QUAD_TOL):
        with mp.workprec(prec_bits):
            return self._factor(s) * self.phi.laplace(s, prec_bits=prec_bits, tol=tol)

    def lap_bound(self, sigma, prec_bits: int = DEFAULT_L_BITS):
        with mp.workprec(prec_bits):
            km1 = mp.mpf(self.k.doubled) / 2 - 1
            w = abs(self.D * mp.mpf(sigma) / (2 * mp.pi))
            fac = mp.power(w, km1) if w > 0 else (mp.mpf(0) if km1 > 0 else mp.mpf(1))
            return fac * self.h_bound * self.phi.lap_bound(sigma, prec_bits)


def _abel_half_integral(phi_m1: TestFunction, t, prec_bits: int,
                        moments: Optional[list] = None):
    """I^{1/2} of phi_m1 at t: (2/sqrt(pi)) int_0^{sqrt(t)} phi_m1(t - u^2) du.

    `moments` is an optional callable j -> int v^j phi_m1(v) dv used for
    the large-t asymptotic branch; exact zeros for the vanishing low
    moments are essential there."""
    with mp.workprec(prec_bits):
        t = mp.mpf(t)
        a, b = phi_m1.support
        if t <= a:
            return mp.mpc(0)
        if b != mp.inf and t >= 4 * b:
            # far past the support: expand 1/sqrt(t - v) around v = 0, so
            # the value is a short series in the moments of phi_m1.  The
            # direct quadrature loses all significance here because the
            # vanishing low moments cancel to relative order t^{-m}.
            if moments is not None:
                J = int(mp.ceil(prec_bits * mp.log(2) / mp.log(t / b))) + 2
                total = mp.mpc(0)
                cj = mp.mpf(1)
                for j in range(J + 1):
                    total += cj * moments(j) * mp.power(t, -j)
                    cj *= mp.mpf(2 * j + 1) / (2 * j + 2)
                return total / mp.sqrt(mp.pi * t)
        if b != mp.inf and t > b:
            # past the support: substitute v = t - u^2, avoiding the
            # catastrophic cancellation of t - u^2 at large t
            pts = [a, *(c for c in phi_m1.breakpoints if a < c < b), b]
            return 1 / mp.sqrt(mp.pi) * mp.quad(
                lambda v: phi_m1(v) / mp.sqrt(t - v), pts)
        # the integrand vanishes unless t - u^2 lies in [a, b]
        top = mp.sqrt(t - a)
        pts = [mp.mpf(0)]
        for c in phi_m1.breakpoints:
            if c < t:
                pts.append(mp.sqrt(t - c))
        pts.append(top)
        pts.sort()
        return 2 / mp.sqrt(mp.pi) * mp.quad(lambda u: phi_m1(t - u * u), pts)


def alpha_apply(phi: TestFunction, D: int, k: HalfWeight, h: Callable,
                mode: str = "laplace", h_bound=1,
                prec_bits: int = DEFAULT_L_BITS):
    """alpha_D(phi) = Linv((Dp/2pi)^{k-1} h(Dp/2pi) (L phi)(p)).

    mode="laplace": the multiplier object (usable directly in lseries_value).
    mode="time": an explicit function of t; requires h == 1.
      - k-1 = m integer: (D/2pi)^m phi^(m), compact support.
      - k-1 = m + 1/2: Riemann-Liouville derivative via the Abel integral
        I^{1/2}(phi^(m+1)), support [a, oo) with algebraic decay.
    """
    if mode == "laplace":
        return LaplaceMultiplier(phi, D, k, h, h_bound=h_bound)
    if mode != "time":
        raise LSeriesError(f"unknown mode {mode!r}")
    with mp.workprec(prec_bits):
        if any(abs(mp.mpc(h(x)) - 1) > mp.mpf("1e-20") for x in (0.5, 1.0, 3.7)):
            raise LSeriesError("time-domain mode implemented for h == 1 only")
    a, b = phi.support
    if k.is_integral:
        m = int(k.k) - 1
        if m < 0:
            raise LSeriesError("time-domain mode needs k >= 1")
        if m > phi.smoothness:
            raise LSeriesError(
                f"insufficient smoothness: need order-{m} derivative")
        dphi = phi.derivative(m)
        scale = mp.power(mp.mpf(D) / (2 * mp.pi), m)
        return TestFunction(lambda t: scale * dphi(t), (a, b),
                            smoothness=dphi.smoothness,
                            breakpoints=phi.breakpoints,
                            label=f"alpha_{D}[{phi.label}]")
    # half-integral: k - 1 = m + 1/2
    m = (k.doubled - 3) // 2
    if m + 1 > phi.smoothness:
        raise LSeriesError(f"insufficient smoothness: need order-{m + 1} derivative")
    dphi = phi.derivative(m + 1)
    km1 = mp.mpf(k.doubled) / 2 - 1
    scale = mp.power(mp.mpf(D) / (2 * mp.pi), km1)

    # moments of phi^(m+1) by integration by parts against phi itself:
    # int v^j phi^(m+1) dv = 0 for j <= m, else (-1)^(m+1) j!/(j-m-1)! times
    # int v^(j-m-1) phi dv -- exact zeros and an unoscillatory integrand
    moment_cache: dict = {}

    def moment_fn(j: int):
        if j <= m:
            return mp.mpf(0)
        if j not in moment_cache:
            r = j - m - 1
            fall = mp.mpf(1)
            for i in range(m + 1):
                fall *= j - i
            with mp.workprec(prec_bits):
                moment_cache[j] = (-1) ** (m + 1) * fall * mp.quad(
                    lambda v: phi(v) * v ** r, phi._panels())
        return moment_cache[j]

    def ev(t):
        return scale * _abel_half_integral(dphi, t, prec_bits, moment_fn)

    return TestFunction(ev, (a, mp.inf), smoothness=0,
                        breakpoints=(b,), label=f"alpha_{D}[{phi.label}]")


# ---------------------------------------------------------------------------
# inverse Laplace
# ---------------------------------------------------------------------------

def invert_laplace(F: Callable, t, method: str = "auto", nodes: int = 64,
                   sigma=None, omega_max=None, prec_bits: int = DEFAULT_L_BITS,
                   tol=mp.mpf("1e-8")):
    """Numerical Laplace inversion at t > 0; returns (value, info).

    method="talbot": the fixed Talbot contour with a node-doubling check.
      It requires F to decay in the left half-plane and fails loudly (with
      diagnostics) on transforms of compactly supported functions, whose
      e^{st}F(s) grows as Re s -> -oo for t inside the support.
    method="bromwich": a vertical-line contour, robust for the transforms
      arising here (decay on vertical lines tracks the smoothness of the
      original).
    method="auto": talbot first, bromwich on recorded failure.
    """
    with mp.workprec(prec_bits):
        t = mp.mpf(t)
        if t <= 0:
            raise InversionError("inversion point must be positive")
        if method == "talbot":
            return _talbot(F, t, nodes, tol)
        if method == "bromwich":
            return _bromwich(F, t, sigma, omega_max, tol)
        if method == "auto":
            try:
                val, info = _talbot(F, t, nodes, tol)
                info["method"] = "talbot"
                return val, info
            except InversionError as exc:
                val, info = _bromwich(F, t, sigma, omega_max, tol)
                info["method"] = "bromwich"
                info["talbot_failure"] = str(exc)
                return val, info
        raise InversionError(f"unknown method {method!r}")


def _talbot_sum(F, t, M: int):
    # fixed Talbot contour s(x) = (M/t)(0.5017 x cot(0.6407 x) - 0.6122
    #                               + 0.2645 i x), x = (j + 1/2) pi / M
    total = mp.mpc(0)
    r = mp.mpf(M) / t
    for j in range(M):
        x = (j + mp.mpf("0.5")) * mp.pi / M
        cot = mp.cos(mp.mpf("0.6407") * x) / mp.sin(mp.mpf("0.6407") * x)
        s = r * (mp.mpf("0.5017") * x * cot - mp.mpf("0.6122")
                 + mp.mpc(0, "0.2645") * x)
        ds = r * (mp.mpf("0.5017") * cot
                  - mp.mpf("0.5017") * mp.mpf("0.6407") * x / mp.sin(mp.mpf("0.6407") * x) ** 2
                  + mp.mpc(0, "0.2645"))
        total += mp.exp(s * t) * F(s) * ds
    # midpoint rule over the upper half-contour; the lower half contributes
    # the conjugate, so the full integral is the real part of 2x this sum
    return mp.re(total * mp.pi / M / (2j * mp.pi) * 2)


def _talbot(F, t, nodes: int, tol):
    v1 = _talbot_sum(F, t, nodes)
    v2 = _talbot_sum(F, t, 2 * nodes)
    diff = abs(v1 - v2)
    scale = max(abs(v2), mp.mpf(1))
    if not mp.isfinite(diff) or diff > tol * scale:
        raise InversionError(
            f"Talbot node-doubling check failed at t={mp.nstr(t, 6)}: "
            f"|{nodes}-node - {2 * nodes}-node| = {mp.nstr(diff, 4)} "
            f"(relative to {mp.nstr(scale, 4)}); the transform likely grows "
            f"in the left half-plane")
    return mp.mpc(v2), {"nodes": 2 * nodes, "doubling_diff": float(diff)}


def _bromwich(F, t, sigma, omega_max, tol):
    """Trapezoidal (Fourier-series) discretization of the Bromwich integral:

        f(t) ~ (e^{sigma t}/T) [ F(sigma)/2
                                 + sum_j Re(F(sigma + i j pi/T) e^{i j pi t/T}) ]

    with half-period T > t; the discretization error is ~ e^{-2 sigma T}, so
    sigma is set from the tolerance."""
    T = mp.mpf(2) * t if omega_max is None else mp.pi * 1 / mp.mpf(omega_max)
    T = max(T, mp.mpf(2) * t)
    if sigma is None:
        sigma = (-mp.log(tol) + 2) / (2 * T)
    sigma = mp.mpf(sigma)
    total = F(sigma) / 2
    j = 1
    small_run = 0
    max_terms = 20000
    while j <= max_terms:
        term = F(sigma + 1j * j * mp.pi / T) * mp.exp(1j * j * mp.pi * t / T)
        total += mp.re(term) + 0j
        small_run = small_run + 1 if abs(term) < tol / 10 else 0
        if small_run >= 8:
            break
        j += 1
    else:
        raise InversionError(
            f"Bromwich series did not settle within {max_terms} terms "
            f"(T={mp.nstr(T, 4)}, sigma={mp.nstr(sigma, 4)})")
    val = mp.exp(sigma * t) / T * total
    return val, {"sigma": float(sigma), "half_period": float(T), "terms": j}


# ---------------------------------------------------------------------------
# sufficient-condition machinery
# ---------------------------------------------------------------------------

@dataclass
class SCParams:
    k: HalfWeight
    N: int
    N_prime: int
    D: int
    chi: DirichletCharacter
    psi: DirichletCharacter
    psi_prime: DirichletCharacter
    lam: complex = 1
    h: Callable = field(default=lambda x: 1)
    h_bound: float = 1.0

    def __post_init__(self):
        if math.gcd(self.D, self.N * self.N_prime) != 1:
            raise LSeriesError("SC setup requires gcd(D, N N') = 1")
        if self.chi.modulus != self.D:
            raise LSeriesError("chi must be a character mod D")


def b_factor(params: SCParams, prec_bits: int = DEFAULT_L_BITS):
    """b = lambda psi_D((-1)^{2k} N'/N) chi(N'/N) (psi'(D)/psi(D)) (NN')^{-k/2} N'.

    The ratio N'/N is read as an integer: either N | N' (evaluate at N'/N)
    or N' | N (evaluate at N/N' and invert, using that the values are roots
    of unity); anything else is out of contract.
    """
    N, Np, D, k = params.N, params.N_prime, params.D, params.k
    psiD = psi_D_character(D)
    with mp.workprec(prec_bits):
        if Np % N == 0:
            ratio, invert = Np // N, False
        elif N % Np == 0:
            ratio, invert = N // Np, True
        else:
            raise LSeriesError(
                f"b_factor needs N | N' or N' | N, got N={N}, N'={Np}")
        sign_arg = -1 if k.doubled % 2 else 1

        def chval(ch, u):
            v = ch(u)
            return v.to_mpc(mp) if hasattr(v, "to_mpc") else mp.mpc(v)

        pd = chval(psiD, sign_arg * ratio) if not invert else \
            chval(psiD, sign_arg) * mp.conj(chval(psiD, ratio))
        cv = chval(params.chi, ratio)
        if invert:
            cv = mp.conj(cv)
        psi_D_val = chval(params.psi, D)
        if psi_D_val == 0:
            raise LSeriesError("psi(D) = 0: D not coprime to N")
        psip_D_val = chval(params.psi_prime, D)
        kk = mp.mpf(k.doubled) / 2
        return mp.mpc(params.lam) * pd * cv * (psip_D_val / psi_D_val) \
            * mp.power(mp.mpf(N) * Np, -kk / 2) * Np


def sc_residual(params: SCParams, phi: TestFunction, p_samples: list,
                alpha_mode: str = "time",
                prec_bits: int = DEFAULT_L_BITS, tol=DEFAULT_QUAD_TOL) -> dict:
    """Residuals of the sufficient condition at each p:

      LHS(p) = b (Dp/2pi)^{k-1} h(Dp/2pi) L(phi|_{2-k}W_N)(p)
      RHS(p) = L(alpha_D(phi)|_k W_N)(p)

    (the inner function phi(1/(Nx))(Nx)^{k-2} is exactly phi|_{2-k}W_N, and
    the transformed inverse transform is alpha_D(phi)|_k W_N)."""
    k, N, D = params.k, params.N, params.D
    b = b_factor(params, prec_bits=prec_bits)
    phi_w = testfn_fricke(phi, HalfWeight(4 - k.doubled), N)
    alpha = alpha_apply(phi, D, k, params.h, mode=alpha_mode,
                        prec_bits=prec_bits)
    if not isinstance(alpha, TestFunction):
        raise LSeriesError("sc_residual needs a time-domain alpha")
    alpha_w = testfn_fricke(alpha, k, N)
    km1 = mp.mpf(k.doubled) / 2 - 1
    samples = []
    max_res = mp.mpf(0)
    with mp.workprec(prec_bits):
        for p in p_samples:
            p = mp.mpc(p)
            if mp.re(p) <= 0:
                raise LSeriesError("p-samples need positive real part")
            w = D * p / (2 * mp.pi)
            lhs = b * mp.power(w, km1) * mp.mpc(params.h(w)) \
                * phi_w.laplace(p, prec_bits=prec_bits, tol=tol)
            rhs = alpha_w.laplace(p, prec_bits=prec_bits, tol=tol)
            scale = max(abs(lhs), abs(rhs), mp.mpf("1e-30"))
            res = abs(lhs - rhs) / scale
            max_res = max(max_res, res)
            samples.append({"p": complex(p), "lhs": complex(lhs),
                            "rhs": complex(rhs), "residual": float(res)})
    return {"samples": samples, "max_residual": float(max_res),
            "b": complex(b), "count": len(samples)}


# ---------------------------------------------------------------------------
# half-integer Bessel closed forms
# ---------------------------------------------------------------------------

def _bessel_poly(n: int, start_cos: bool):
    """Coefficient arrays (A, B) with
    (-(1/z) d/dz)^n (w(z)/z) = sum_j A[j] z^{-j} sin z + B[j] z^{-j} cos z,
    w = sin (start_cos False) or cos (True).  Exact integers."""
    size = 2 * n + 2
    A = [0] * size
    B = [0] * size
    if start_cos:
        B[1] = 1
    else:
        A[1] = 1
    for _ in range(n):
        A2 = [0] * size
        B2 = [0] * size
        for j in range(size):
            if A[j]:
                # -(1/z) d/dz of A_j z^{-j} sin z
                if j + 2 < size:
                    A2[j + 2] += j * A[j]
                B2[j + 1] -= A[j]
            if B[j]:
                if j + 2 < size:
                    B2[j + 2] += j * B[j]
                A2[j + 1] += B[j]
        A, B = A2, B2
    return A, B


def bessel_half(n: int, sign: int, z, prec_bits: int = DEFAULT_L_BITS):
    """J_{n+1/2}(z) (sign +1) or J_{-n-1/2}(z) (sign -1) via the closed forms

        J_{n+1/2}(z)  =        sqrt(2/pi) z^{n+1/2} (-(1/z)d/dz)^n (sin z / z)
        J_{-n-1/2}(z) = (-1)^n sqrt(2/pi) z^{n+1/2} (-(1/z)d/dz)^n (cos z / z)

    with the iterated operator expanded exactly into sin/cos coefficients."""
    if n < 0:
        raise LSeriesError("order index must be nonnegative")
    if sign not in (1, -1):
        raise LSeriesError("sign must be +1 or -1")
    A, B = _bessel_poly(n, start_cos=(sign == -1))
    with mp.workprec(prec_bits):
        z = mp.mpf(z)
        if z <= 0:
            raise LSeriesError("argument must be positive")
        sa = sum(a * mp.power(z, -j) for j, a in enumerate(A) if a)
        sb = sum(b * mp.power(z, -j) for j, b in enumerate(B) if b)
        val = mp.sqrt(2 / mp.pi) * mp.power(z, n + mp.mpf("0.5")) \
            * (sa * mp.sin(z) + sb * mp.cos(z))
        if sign == -1:
            val *= (-1) ** n
        return val
