"""Large deviations of the giant component at c = 3.

Below 1 - 1/c a small largest component forces the remaining mass into
several equal blocks; the floor formula counts them.  The same function
written as k K(u) + L(ku) on the intervals [x_k, x_(k-1)] agrees with it.
"""

import numpy as np

from giantscope.rates import i_beta, i_beta_blocks, lln_constants, block_thresholds

c = 3.0
beta = lln_constants(c)[1]
print(f"typical giant fraction beta = {beta:.6f}, rate there = {i_beta(beta, c):.2e}")
xs = block_thresholds(c, kmax=5)
print("block thresholds x_k:", ", ".join(f"{x:.4f}" for x in xs))
for u in np.linspace(0.05, 1.0, 20):
    u = float(u)
    alt = i_beta_blocks(u, c)
    print(f"  u={u:.3f}  I={i_beta(u, c):.8f}  k-form={alt:.8f}")
