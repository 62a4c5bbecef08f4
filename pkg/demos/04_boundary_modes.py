"""Boundary-value modes: scanning for periodic eigenvalues, and the series
built Dirichlet/Neumann solutions that collapse to classical sine/cosine
modes when the space driver is the identity.

Run:  python3 demos/04_boundary_modes.py
"""

import math

from stieltjes_heat import (
    Derivator,
    HeatProblem,
    check_cos_condition,
    check_sin_condition,
    dirichlet_solution,
    find_periodic_eigenvalues,
    identity,
    neumann_solution,
    periodic_solution,
)

# drivers run past L so difference quotients at the right wall have room
classical = HeatProblem(identity(0.0, 2.0), identity(0.0, 2.0), 1.0, 1.0, 1.0)

print("== periodic eigenvalue scan, identity driver, L = 1 ==")
lams = find_periodic_eigenvalues(classical, (-400.0, 0.0), count=4)
print(f"found: {[f'{v:.6f}' for v in lams]}")
print(f"expect 0, -4pi^2, -16pi^2, -36pi^2 = "
      f"{[f'{-4 * math.pi**2 * k * k:.6f}' for k in range(4)]}")

# the mode decays like e^(lam t): keep t small so the value is visible
sol = periodic_solution(classical, lams[1])
val = sol(0.05, 0.3)
print(f"u(0.05, 0.3) = {val.real:.9f} (imag residue {abs(val.imag):.1e})")
print(f"boundary mismatch |u(0.05, 0) - u(0.05, 1)| = "
      f"{abs(sol(0.05, 0.0) - sol(0.05, 1.0)):.3e}")
print(f"residual at (0.05, 0.3): {abs(sol.residual_rule(0.05, 0.3)):.3e}")

print("\n== the same scan with an atom in the driver ==")
h = Derivator.from_pieces(
    [
        ("affine", 0.0, 1.0, 1.0, 2.0),
        ("flat", 1.0, 1.5, 3.0),
        ("affine", 1.5, 2.5, 2.0, 1.0),
    ]
)
g = Derivator.from_pieces(
    [("affine", 0.0, 0.5, 1.0, 0.0), ("affine", 0.5, 1.5, 1.0, 1.0)]
)
jumpy = HeatProblem(g, h, 0.5, 1.0, 2.0)
print(f"eigenvalues in (-50, 0]: {find_periodic_eigenvalues(jumpy, (-50.0, 0.0), count=5)}")
print("(the jump breaks the oscillatory return condition; only 0 survives)")

print("\n== sine / cosine vanishing conditions, L = 1 ==")
for lam in (-math.pi**2, -2.0):
    value, tail, ok = check_sin_condition(classical.h, lam, 1.0)
    print(f"sin condition at lam = {lam:+.4f}: value {value:+.3e} "
          f"(tail {tail:.1e}) -> {ok}")
value, tail, ok = check_cos_condition(classical.h, -((2 * math.pi) ** 2), 1.0)
print(f"cos condition at lam = -4pi^2: value {value:+.6f} -> {ok}")

print("\n== classical collapses ==")
d = dirichlet_solution(classical, -math.pi**2, a=1.5)
t, x = 0.4, 0.7
want = 1.5 * math.exp(-math.pi**2 * t) * math.sin(math.pi * x)
print(f"dirichlet u({t}, {x}) = {d(t, x):.12f}  vs  1.5 e^(lam t) sin(pi x) = {want:.12f}")

n = neumann_solution(classical, -((2 * math.pi) ** 2), b=0.75)
want = 0.75 * math.exp(-((2 * math.pi) ** 2) * t) * math.cos(2 * math.pi * x)
print(f"neumann   u({t}, {x}) = {n(t, x):.12f}  vs  0.75 e^(lam t) cos(2pi x) = {want:.12f}")
print(f"wall flux at x=0: {n.dhx_rule(t, 0.0):+.3e}, at x=1: {n.dhx_rule(t, 1.0):+.3e}")
