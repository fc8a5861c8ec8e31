"""Where the component-count rate stops being convex.

For c <= 2 the rate of the component count is convex.  For c > 2 it is
convex up to a~, concave between a~ and the breakup point a^, where a
giant component gives way to a dust of small ones, and convex again after.
The log-moment generating function only sees the convex hull, so its
Legendre bidual lies strictly below the rate on (a~, a^).
"""

import numpy as np

from giantscope import i_alpha, phase_points
from giantscope.rates import convex_hull_i_alpha, lln_constants

for c in (1.5, 2.0, 2.5, 3.0, 5.0):
    pp = phase_points(c)
    alpha = lln_constants(c)[0]
    if pp.a_hat is None:
        print(f"c={c}: typical count {alpha:.4f}, no concave stretch")
    else:
        print(f"c={c}: typical count {alpha:.4f}, a~={pp.a_tilde:.4f}, a^={pp.a_hat:.4f}, a*={pp.a_star:.4f}")

c = 3.0
pp = phase_points(c)
print(f"\nc={c}: rate vs convex hull between a~ and a^")
for a in np.linspace(pp.a_tilde, pp.a_hat, 6):
    r, hull = i_alpha(float(a), c), convex_hull_i_alpha(float(a), c)
    print(f"  a={a:.4f}  I={r:.6f}  hull={hull:.6f}  gap={r - hull:.2e}")

e = 1e-7
left = (i_alpha(pp.a_hat, c) - i_alpha(pp.a_hat - e, c)) / e
right = (i_alpha(pp.a_hat + e, c) - i_alpha(pp.a_hat, c)) / e
print(f"\nslope jumps at a^ from {left:.4f} down to {right:.4f}: the breakup is abrupt")
