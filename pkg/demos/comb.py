"""The comb: a domain whose only bad prime end still has a Busemann limit.

Run with ``python3 demos/comb.py`` (about half a minute).  The comb is the
square minus the segment [-1, 0] and the teeth Im z = +-2^-n, Re z <= 0.
"""
import numpy as np

from slithyp import comb_localization_report, comb_report, fit_map, make_comb
from slithyp.bounds import curve_length_bounds
from slithyp.conformal import conformal_distance
from slithyp.horolab import busemann_horosphere_contact, cluster_set, h_limit_test

# formula-level certificate: the lower bound eventually beats the upper one
r = comb_report(k=0.5, h=0.02, r0=0.5, M=0.0, n_max=20)
print("n   lower      upper")
for row in r.rows[::4]:
    print(f"{row[0]:<3d} {row[3]:10.3f} {row[4]:10.3f}")
print("lower > upper from n* =", r.summary["n_star"], "  limit", r.summary["limit_lower"], ">", r.summary["limit_upper"])

# a numerical Riemann map of the truncation with four pairs of teeth
m = fit_map(make_comb(N=4), 512, 0.5)
print("held-out boundary error", f"{m.accuracy:.2e}", " h(0) =", m.forward(0))

# conformal distances sit inside the Koebe sandwich of the straight segment
for a, b in ((0.5, 0.9), (0.5, 0.5 + 0.4j), (0.1, 0.5)):
    bp = curve_length_bounds(make_comb(N=4), [a, b])
    print(f"k({a}, {b}) = {conformal_distance(m, a, b):.4f} in [{bp.lower:.4f}, {bp.upper:.4f}]")

# sigma = 1 goes to the tip of [-1, 0]: cluster sets shrink toward 0
e = cluster_set(m, 1.0, "horospheric", {"R": 1.0}, 6)
print("horospheric cluster diameters", {k: f"{v:.1e}" for k, v in e.per_level.items()})
print(h_limit_test(m, 1.0, 1.0, 0.05).to_dict()["verdict"], "| contact witnesses", np.round(busemann_horosphere_contact(m, 1.0, 0.0), 4))

# the two localization steps of the argument, checked on the truncation
loc = comb_localization_report(m)
for row in loc.rows:
    x = dict(zip(loc.columns, row))
    print(f"gap {x['n']}: theta/eps = {x['theta_over_eps']:+.4f}  k_gap/k_strip = {x['ratio']:.4f}")
print(loc.summary["label"])
