"""
A Rankin-Cohen bracket hiding inside the operator family
========================================================

At the fractional parameter a = 2/3 and weight 5/2 the composite operator,
applied to f(4z) theta0(z), is proportional to the first Rankin-Cohen
bracket [theta1, f(4z)]_1 in weights (3/2, -1) -- with a proportionality
constant that does not depend on f.  This script measures the constant on
random Laurent series and prints it next to the documented comparison value
3/(pi i), without asserting either.
"""
import random
from fractions import Fraction

import mpmath as mp

from bolhalf import (HalfWeight, ThetaContext, delta_a, make_character,
                     rankin_cohen)
from bolhalf.exactnum import QQi
from bolhalf.qseries import from_coeff_dict

P = 40
ctx = ThetaContext(make_character("triv:1"), make_character("kron:-4"))
theta0 = ctx.theta0(4 * P + 40)
theta1 = ctx.theta1(4 * P + 40)

for seed in (11, 99):
    rng = random.Random(seed)
    entries = {Fraction(e): QQi(Fraction(rng.randint(-9, 9)))
               for e in range(-1, 7)}
    f = from_coeff_dict({e: c for e, c in entries.items() if not c.is_zero()},
                        P + 8, M=1, mode="exact")
    f4 = f.rescale(4)
    F = f4 * theta0.truncated(f4.precision)
    top = delta_a(F, HalfWeight(5), Fraction(2, 3), ctx, F.precision)[0]
    bottom = rankin_cohen(theta1.truncated(f4.precision), f4, 1,
                          HalfWeight(3), HalfWeight(-2))

    # coefficientwise ratio, walked on the finer of the two exponent lattices
    ratios = set()
    lo = max(top.valuation, bottom.valuation)
    hi = min(top.precision, bottom.precision)
    j = int(lo * top.M)
    while Fraction(j, top.M) < hi:
        e = Fraction(j, top.M)
        ct = top.coeff(e)
        cb = bottom.coeff(e) if (e * bottom.M).denominator == 1 else QQi(0)
        if not cb.is_zero():
            ratios.add(ct / cb)
        j += 1
    assert len(ratios) == 1, "the coefficientwise ratio is not constant"
    tagged = next(iter(ratios))
    # the bracket carries a symbolic (2 pi i); dividing it out gives the
    # analytic constant
    computed = complex(tagged) / complex(2j * mp.pi)
    documented = complex(3 / (1j * mp.pi))
    print(f"seed {seed}: exact tagged ratio  = {tagged}")
    print(f"          analytic constant     = {computed}")
    print(f"          documented comparison = {documented}")
    print(f"          difference            = {abs(computed - documented):.3e}")
    print()
