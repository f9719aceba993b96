"""
Where the control peaks
=======================

The fixed-time law depends on the state only, and |x| decreases, so its
largest control is at t0. The predefined-time law depends on time as well
and can peak in the middle of the horizon: with C1 = 4 and eta = 2 the
largest |u| = 2 occurs at t = 0.5.
"""

import math

from ptcontrol import (
    FixedTimeParams,
    IntegrationSettings,
    PredefParams,
    find_peak,
    integrate,
    velocity_lower_bound_check,
)

settings = IntegrationSettings(1e-4, 1e-3)
p = PredefParams.make(eta=2.0)
ft = FixedTimeParams(k1=1.0, k2=1.0, alpha=0.5, beta=2.0)

for x0 in (0.2, math.log(2), math.log(5), 3.0):
    pk = find_peak(integrate("corrected", p, x0, settings))
    threshold = math.expm1(abs(x0)) > p.eta - 1
    print(f"corrected x0={x0:.4f}: t_peak={pk.t_peak:.6f} |u|={pk.magnitude:.6f} "
          f"{pk.location:9s} (C1 > eta - 1: {threshold})")

for x0 in (0.5, 1.0, 4.0):
    pk = find_peak(integrate("fixed_time", ft, x0, IntegrationSettings(1e-3, 1e-3), span=5.0))
    print(f"fixed-time x0={x0}: t_peak={pk.t_peak} |u|={pk.magnitude} {pk.location}")

# Reaching zero from x0 within the horizon needs |x'| >= |x0|/(tf - t0) at least once.
for x0 in (1.0, 2.0, 4.0, 8.0, -10.0):
    vc = velocity_lower_bound_check(integrate("corrected", p, x0, settings))
    print(f"x0={x0:+5.1f}: max |u| = {vc.max_speed:10.4f} >= {vc.required:5.2f}: {vc.holds}")
