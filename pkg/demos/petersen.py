"""The Petersen domain: horospheres that touch a whole line.

Run with ``python3 demos/petersen.py``.  The domain is the right half-plane
minus the rays Re z = 2^-n, |Im z| >= 2^-n exp(-3^n).  The gaps close so fast
that the certificate below lives in log-space; the numerical maps only see
the first few gaps.
"""
import numpy as np

from slithyp import fit_map, make_petersen, petersen_report
from slithyp.domains import petersen_log_y
from slithyp.horolab import h_limit_test

print("log y_n:", [round(float(petersen_log_y(n)), 3) for n in range(7)], "(y_6 is already subnormal)")

r = petersen_report(y=1.0, M=0.0, n_max=60)
T = r.column("T_n")
print("T_3 =", round(T[3], 6), " T_4 =", round(T[4], 6), " T_60 =", f"{T[60]:.3e}")
print("first certified n:", r.summary["n_M"], " with the corrected gap weights:", r.summary["n_M_corrected"])
for y in (0.0, 0.5, 1.0, 10.0, 1000.0):
    print(f"y = {y:7}: n_M = {petersen_report(y, 0.0, 60).summary['n_M']}")

# truncated maps, boxed to make the boundary a Jordan curve
for N in (1, 2, 3):
    m = fit_map(make_petersen(N=N, box=(2, 1)), 512)
    print(f"N = {N}: boundary error {m.accuracy:.1e}, h(1) = {m.boundary_point(1.0)}")
# every truncation has a limit at sigma = 1; only the certificate above sees the full domain
res = h_limit_test(m, 1.0, 1.0, 0.05, levels=4)
print("horospheric limit at sigma = 1:", res.to_dict()["verdict"], "-", res.label)
