"""
Simulating the corrected law up to the terminal time
====================================================

RK4 runs up to a small standoff before tf; the exact solution is zero from
tf on, so a final (tf, 0, 0) sample closes the trajectory. The maximum
deviation from the closed form shrinks about 16x per step halving.
"""

import math

from ptcontrol import IntegrationSettings, PredefParams, integrate, solution_error

p = PredefParams.make(eta=2.0)
x0 = -math.log(2)

traj = integrate("corrected", p, x0, IntegrationSettings(step=1e-4, terminal_margin=1e-3))
print(f"samples: {len(traj)}, last integrated t = {traj.t[-2]:.6f}, clamp row = "
      f"({traj.t[-1]}, {traj.x[-1]}, {traj.u[-1]})")
print(f"max |x - x_exact| = {solution_error(traj, p, 'corrected'):.3e}")

prev = None
for step in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
    err = solution_error(integrate("corrected", p, x0, IntegrationSettings(step, 1e-2)), p, "corrected")
    note = f"  ratio {prev / err:5.1f}" if prev else ""
    print(f"step {step:8.2e}: error {err:.3e}{note}")
    prev = err

# The same initial state through the original law is fine for moderate x0,
# but a very negative start produces a numerically unfollowable transient.
for start in (-5.0, -50.0):
    tr = integrate("original", p, start, IntegrationSettings(1e-4, 1e-3))
    print(f"original law from x0={start}: diverged={tr.diverged}, samples={len(tr)}")
