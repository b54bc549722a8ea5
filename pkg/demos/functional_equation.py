"""
Twisted L-series against compactly supported test functions
===========================================================

For a weight-k level-N eigenform f and a character chi mod D (coprime to N),
the completed twisted L-series satisfies a functional equation that, tested
against a smooth compactly supported phi, becomes a numerical identity:

    L_f(chi, phi) = const * L_g(chi', phi|_{2-k} W_N),     g = f |_k W_N.

Both sides are absolutely convergent sums of Laplace-transform values, so the
residual can be driven to quadrature accuracy.  This script checks the
discriminant form Delta (level 1, where g = f) and the weight-1/2 theta
series theta0 (level 4, where g = theta0 up to an eighth root of unity).
"""
import mpmath as mp

from bolhalf import (FormMeta, HalfWeight, bump, delta_cusp, fe_residual,
                     make_character, theta_series, trivial_character)
from bolhalf.characters import all_characters

phi = bump(1, 2)

print("Delta, weight 12, level 1, twisted by every character mod D:")
delta = delta_cusp(140).to_float(192)
meta = FormMeta(HalfWeight(24), 1, trivial_character(1))
for D in (1, 3, 5):
    for chi in all_characters(D):
        rep = fe_residual(delta, delta, meta, chi, phi, prec_bits=192)
        print(f"  D = {D}, chi = {chi}:  residual {rep['residual']:.2e}")
print()

print("theta0, weight 1/2, level 4 (g = e^(-i pi/4) theta0):")
t0, meta0 = theta_series("theta0", trivial_character(1), 200)
t0 = t0.to_float(192)
with mp.workprec(192):
    g = t0 * mp.exp(-1j * mp.pi / 4)
for spec in ("triv:3", "gen:3:2=1/2"):
    chi = make_character(spec)
    rep = fe_residual(t0, g, meta0, chi, phi, prec_bits=192)
    print(f"  chi = {spec}:  residual {rep['residual']:.2e}")
