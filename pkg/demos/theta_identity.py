"""
The one-parameter operator family on theta series
=================================================

The composite operator

    delta_a^{1/2}(f) = theta0^{3a-2} theta1^{1-a} D^{0} (theta0^{1-3a} theta1^a f)

collapses, at weight 3/2, to the same answer for every a: it sends the
weight-1/2 theta series theta0 to the weight-3/2 theta series theta1.
This script builds both sides from exact Gaussian-rational coefficients and
compares them coefficient by coefficient.
"""
from bolhalf import HalfWeight, ThetaContext, delta_a, make_character

P = 200  # compare through q^(P-1)

pairs = [
    ("triv:1", "kron:-4"),
    ("kron:5", "kron:-3"),
    ("kron:8", "kron:-8"),
]

for spec0, spec1 in pairs:
    ctx = ThetaContext(make_character(spec0), make_character(spec1))
    theta0 = ctx.theta0(P + 20)
    theta1 = ctx.theta1(P)
    print(f"psi0 = {spec0:8s}  psi1 = {spec1:8s}  level {ctx.level}")
    for a in range(-2, 4):
        out, meta = delta_a(theta0, HalfWeight(3), a, ctx, P)
        agree = out == theta1.truncated(out.precision)
        print(f"  a = {a:+d}:  delta_a(theta0) == theta1 through "
              f"q^{int(out.precision) - 1}:  {agree}")
    print()

# the same computation runs off the integer lattice: the result is then a
# genuine Puiseux series and carries no modular metadata
ctx = ThetaContext(make_character("kron:5"), make_character("kron:-4"))
out, meta = delta_a(ctx.theta0(40), HalfWeight(3), "2/3", ctx, 30)
print(f"a = 2/3: exponent lattice (1/{out.M})Z, metadata: {meta}")
