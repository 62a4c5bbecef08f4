"""Heat polynomials for a sum derivator G(t,x) = g(t) + h(x): the ladder
structure, the convergence radius of coefficient streams, and the gated
series solution with its certified tail bound.

Run:  python3 demos/05_gpolynomials.py
"""

import math

from stieltjes_heat import (
    Derivator,
    GateError,
    GPolyContext,
    SumDerivator,
    classical_heat_polynomial,
    gpoly_series_solution,
    heat_gpoly,
    identity,
    radius_sigma,
)

g = Derivator.from_pieces(
    [("affine", 0.0, 0.5, 1.0, 0.0), ("affine", 0.5, 1.5, 1.0, 1.0)]
)
h = Derivator.from_pieces(
    [
        ("affine", 0.0, 1.0, 1.0, 2.0),
        ("flat", 1.0, 1.5, 3.0),
        ("affine", 1.5, 2.5, 2.0, 1.0),
    ]
)

print("== low-degree polynomials at (t, x) = (0.7, 0.9) ==")
ctx = GPolyContext(SumDerivator(g, h), c=0.5)
for n in range(5):
    print(f"v_{n}(0.7, 0.9) = {heat_gpoly(n, 0.7, 0.9, ctx):.10f}")

print("\n== identity drivers recover the textbook polynomials ==")
ident_ctx = GPolyContext(SumDerivator(identity(0.0, 2.0), identity(0.0, 2.0)), c=1.0)
t, x = 0.3, 0.8
for n in (2, 3, 4):
    ours = heat_gpoly(n, t, x, ident_ctx)
    classical = classical_heat_polynomial(n, t, x)
    print(f"v_{n}({t}, {x}) = {ours:.12f}   classical {classical:.12f}")

print("\n== radius of coefficient streams ==")
streams = [
    ("1/sqrt(n!)", lambda n: math.exp(-0.5 * math.lgamma(n + 1))),
    ("2^n       ", lambda n: 2.0**n),
    ("finite    ", [1.0, 0.0, 0.5]),
]
for name, alpha in streams:
    rep = radius_sigma(alpha, n_probe=200)
    print(f"alpha_n = {name}: sigma = {rep.sigma:.6g}, "
          f"gate value = {rep.sigma_gate:.6g}, trend = {rep.trend}")

print("\n== gated series solution ==")
G = SumDerivator(g, h)
alpha = lambda n: math.exp(-0.5 * math.lgamma(n + 1))
sol, gate = gpoly_series_solution(G, alpha, c=1.0, T=0.2, L=2.3, N=40)
print(f"gate: g(T) = {gate.g_T} vs sigma/c^2 = {gate.sigma_gate:.6f} -> ok = {gate.ok}")
print(f"truncation N = {gate.truncation}, tail bound on the box = {gate.tail_bound:.4g}")
print(f"u(0.2, 1.7) = {sol(0.2, 1.7):.8f}")
print(f"residual (rule mode) at (0.15, 0.8): {sol.residual_rule(0.15, 0.8):+.3e}")
# a_mn keeps the integer factor exact (a Fraction when alpha is real)
print(f"coefficient a_11 = 6 alpha_3 = {float(sol.a_mn(1, 1)):.12f} "
      f"(alpha_3 = {alpha(3):.12f})")

print("\n== the gate refuses a horizon past the radius ==")
try:
    gpoly_series_solution(G, alpha, c=1.0, T=1.4, L=2.3, N=40)
except GateError as e:
    print(f"GateError: {e}")
