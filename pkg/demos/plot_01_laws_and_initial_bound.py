"""
Initial control: original vs corrected law
==========================================

Both predefined-time laws are evaluated at the start of the horizon for a
range of initial states. For negative states the original law grows like
e^|x0|, while the corrected one never reaches eta/(tf - t0).
"""

import numpy as np

from ptcontrol import PredefParams, initial_bound_scan

p = PredefParams.make(eta=2.0, t0=0.0, tf=1.0)
grid = np.arange(-10, 11, 2.0)

print(f"bound eta/(tf - t0) = {p.initial_bound()}")
print(f"{'x0':>6} {'u0 original':>16} {'u0 corrected':>14}")
for row in initial_bound_scan(p, grid):
    print(f"{row.x0:6.1f} {row.u0_original:16.6g} {row.u0_corrected:14.8f}")

# Each unit step further into negative states multiplies the original
# control by slightly more than e.
rows = initial_bound_scan(p, [-3.0, -4.0, -5.0, -6.0, -7.0])
for a, b in zip(rows, rows[1:]):
    print(f"u0({b.x0:+.0f}) / u0({a.x0:+.0f}) = {b.u0_original / a.u0_original:.6f}")
print(f"e = {np.e:.6f}")
