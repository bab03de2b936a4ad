"""The Page curve on a desk-size chain: entropy rises, peaks, and falls.

A filled 12-site system empties through a weak bond into a 600-site
environment.  The entanglement entropy grows while particles leak out, peaks
when the system is partly emptied, then *decreases* back toward zero --
instead of saturating at a volume law.  The particle number itself shows no
feature at the Page time.
"""

import numpy as np

from pagecurve import ModelParams, Propagator, boundary_current
from pagecurve.runner import compute_records

params = ModelParams(M=12, N=600, g=0.5, t_sys=1.0, t_env=4.0)
prop = Propagator(params)
dt = 2.0
times = np.arange(0.0, 120.0, dt)
records = compute_records(params, times, renyi=(2.0,), propagator=prop)

m = np.array([r.m for r in records])
current = boundary_current(m, dt)

print(" t      m/M    I=dm/dt   S_vN/M   S_2/M   S_min/M   bound/M")
for i, r in enumerate(records[::3]):
    j = 3 * i
    bar = "#" * int(40 * r.S_vN / (params.M * 0.6))
    print(f"{r.time:5.0f}  {r.m / params.M:.3f}  {current[j]:+.4f}   "
          f"{r.S_vN / params.M:.4f}  {r.S_q[2.0] / params.M:.4f}  "
          f"{r.S_min / params.M:.4f}   {r.bound / params.M:.4f}  |{bar}")

i_peak = int(np.argmax([r.S_vN for r in records]))
peak = records[i_peak]
print(f"\nPage time ~ {peak.time:g} (S_vN/M = {peak.S_vN / params.M:.4f}, "
      f"emitted fraction = {1 - peak.m / params.M:.3f})")
print("note: the current is smooth through the Page time; only the")
print("entropy bends down, breaking the semiclassical current~entropy link.")
