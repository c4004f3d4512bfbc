"""Iteration of self-maps of the disk and the half-plane.

Run with ``python3 demos/denjoy_wolff.py``.  Fixed-point-free self-maps push
every orbit to one boundary point; how fast depends on the type of the map.
"""
import numpy as np

from slithyp import MobiusSelfMap, classify, denjoy_wolff_point, divergence_rate, iterate, julia_invariance_check
from slithyp.dynamics import parabolic_example

f = parabolic_example()  # z -> ((1-i) z + i)/(-i z + 1 + i)
print("type:", classify(f).kind)
orb = iterate(f, 0j, 2000)
print("orbit of 0 after 10, 100, 2000 steps:", np.round(orb.points[[10, 100, 2000]], 5))
sd = orb.step_distances
print("relative spread of the step distances (an isometry):", f"{np.ptp(sd) / sd[0]:.1e}")

dw = denjoy_wolff_point(f)
print("Denjoy-Wolff point", np.round(dw.point, 6), "after", dw.iterations, "iterations")

# horocycles at the Denjoy-Wolff point are mapped into themselves
rep = julia_invariance_check(f, 1.0, [0.5, 1.0, 2.0], 10000)
print("Julia violations at tau = 1:", rep.violations)
print("Julia violations at the wrong point tau = -1:", julia_invariance_check(f, -1.0, [1.0], 10000).violations)

# divergence rates in the half-plane: zero for translations, ln(2)/2 for w -> 2w
trans = MobiusSelfMap.halfplane(1.0, -1.0, 0.0, 1.0)  # w -> w + i in the chart u = i w
dil = MobiusSelfMap.halfplane(np.sqrt(2), 0.0, 0.0, 1 / np.sqrt(2))  # w -> 2w
for name, m, n in (("w + i", trans, 100000), ("2 w", dil, 64)):
    d = divergence_rate(m, 1.0 + 0j, n)
    print(f"{name:6s} rate {d.rate:.3e} (n = {n})")
print("ln(2)/2 =", np.log(2) / 2)
