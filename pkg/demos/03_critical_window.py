"""The critical window c = 1 + theta n^(-1/3).

The largest component, divided by n^(2/3), is compared with the longest
excursion of the reflected Brownian motion with parabolic drift.  The
moderate-deviation rate of the rescaled largest size vanishes at 2 theta
and changes curvature where the leftover block saturates, u = theta/(k + 1/2).
"""

import numpy as np

from giantscope import limits, mc_harness
from giantscope.rates import breve_i_beta

reps, n = 300, 20_000
for theta in (0.0, 1.0):
    g = mc_harness(limits.CriticalGraphEstimator(n, theta), reps, 11, keep=True)
    lim = mc_harness(limits.CriticalLimitEstimator(theta, dt=1e-3), reps, 12, keep=True)
    ks = limits.ks_distance(g.values[:, 0], lim.values[:, 0])
    print(
        f"theta={theta}: graph mean {g.mean['largest']:.3f}, limit mean {lim.mean['largest']:.3f}, "
        f"KS {ks:.3f}; excess {g.mean['excess']:.2f} vs marks {lim.mean['excess']:.2f}"
    )

theta = 2.0
print(f"\nrate of the rescaled largest size at theta={theta}:")
for u in np.linspace(0.25, 6.0, 24):
    print(f"  u={u:5.2f}  {breve_i_beta(float(u), theta):.6f}")
print("zero at u = 2 theta:", breve_i_beta(2 * theta, theta))
