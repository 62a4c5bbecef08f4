"""The exponential with respect to a driver: product of jump factors times
the exponential of the continuous part, its right limits, regressivity,
and the certified power series.

Run:  python3 demos/02_gexponential.py
"""

import math

from stieltjes_heat import (
    Derivator,
    classify_regressivity,
    gexp,
    gexp_right_limit,
    gexp_series,
    gsin_gcos,
)

g = Derivator.from_pieces(
    [("affine", 0.0, 0.5, 1.0, 0.0), ("affine", 0.5, 1.5, 1.0, 1.0)]
)
lam = 0.3

print("== closed form across the atom ==")
below = gexp(g, lam, 0.0, 0.5)
above = gexp(g, lam, 0.0, 1.0)
print(f"exp_g({lam}; 0, 0.5)  = {below:.12f}   (= e^0.15 = {math.exp(0.15):.12f})")
print(f"exp_g({lam}; 0, 0.5+) = {gexp_right_limit(g, lam, 0.0, 0.5):.12f}")
print(f"  the atom multiplies by 1 + lam*gap = {1 + lam * g.jump(0.5)}")
print(f"exp_g({lam}; 0, 1.0)  = {above:.12f}")
print(f"  hand product e^0.15 * 1.3 * e^0.15 = {math.exp(0.3) * 1.3:.12f}")

print("\n== regressivity of the rate over [0, 1.5] ==")
for rate in (0.5, -2.0, -1.0):
    rep = classify_regressivity(g, rate, 0.0, 1.5)
    extra = f" at t = {rep.witness}" if rep.kind == "degenerate" else ""
    print(f"rate {rate:+.1f}: {rep.kind}{extra}")

print("\n== certified series ==")
val, tail = gexp_series(g, lam, 1.0, order=40)
print(f"series value = {val:.15f}, certified tail <= {tail:.3e}")
print(f"closed form  = {above:.15f}, gap = {abs(val - above):.3e}")

print("\n== the trig pair deforms at atoms ==")
b = 0.8
s, c = gsin_gcos(g, b, 1.0)
# sin^2 + cos^2 picks up the factor (1 + b^2 gap^2) per atom crossed
print(f"sin_g^2 + cos_g^2 at t=1.0: {s * s + c * c:.12f}")
print(f"product of 1 + b^2 gap^2 : {1 + b**2 * g.jump(0.5) ** 2:.12f}")
