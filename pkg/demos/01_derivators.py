"""Tour of the derivator type: a left-continuous nondecreasing driver that
mixes an absolutely continuous part with jumps and flat stretches.

Run from the repo root after installing:  python3 demos/01_derivators.py
"""

import json

from stieltjes_heat import Derivator

# time driver: slope 1 everywhere, unit jump at t = 1/2
g = Derivator.from_pieces(
    [("affine", 0.0, 0.5, 1.0, 0.0), ("affine", 0.5, 1.5, 1.0, 1.0)]
)

# space driver: x + 2, then a plateau at 3 on (1, 3/2], then 2x + 1.
# the atom at 3/2 has gap 4 - 3 = 1.
h = Derivator.from_pieces(
    [
        ("affine", 0.0, 1.0, 1.0, 2.0),
        ("flat", 1.0, 1.5, 3.0),
        ("affine", 1.5, 2.5, 2.0, 1.0),
    ]
)

print("== values and one-sided limits ==")
print(f"g(0.25) = {g(0.25)}")
print(f"g(0.5)  = {g(0.5)}   (left-continuous: the jump is not yet included)")
print(f"g(0.5+) = {g.right_limit(0.5)}   jump = {g.jump(0.5)}")
print(f"h(1.5)  = {h(1.5)}, h(1.5+) = {h.right_limit(1.5)}")

print("\n== measures of half-open windows [a, b) ==")
# the window [0.4, 0.6) straddles the atom: length 0.2 plus mass 1
print(f"mu_g[0.4, 0.6)        = {g.measure(0.4, 0.6)}")
print(f"continuous part       = {g.continuous_measure(0.4, 0.6)}")
print(f"atoms in the window   = {g.atoms_in(0.4, 0.6)}")
# a window inside the plateau of h has measure zero
print(f"mu_h[1.1, 1.4)        = {h.measure(1.1, 1.4)}")

print("\n== constancy runs and t* ==")
run = h.constancy_run(1.2)
print(f"h is constant on {run}; points there defer to t* = {h.t_star(1.2)}")
print(f"all runs of h: {h.constancy_runs}")

print("\n== JSON round trip ==")
blob = json.dumps(g.to_json())
print(blob)
g2 = Derivator.from_json(blob)
print(f"round trip equal: {g2 == g}")
