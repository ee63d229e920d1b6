# Coefficient decay of a three-tone signal
#
# A smooth signal is replaced by its piecewise-linear interpolant on 2^10
# elements and then sampled on 2^12 elements.  The linear CG transform sees
# exact linear data on every element finer than 2^-10, so its finest details
# vanish.  Hierarchical interpolation of the raw samples does not get that
# for free.

import numpy as np

from pwav import forward, make_plan
from pwav.codec import CodecConfig, coefficient_decay


def f(x):
    return np.sin(2 * np.pi * x) + np.sin(11 * np.pi * x) / 3 + np.sin(23 * np.pi * x) / 5


J = 12
x = np.linspace(0, 1, 2**J + 1)
knots = np.linspace(0, 1, 2**10 + 1)
interpolant = np.interp(x, knots, f(knots))

# Per-level maxima first

cg = forward(make_plan("cg", 1, J), interpolant)
hi = forward(make_plan("interp", 1, J), f(x))
print("level   cg(interpolant)   interp(raw)")
for j, (a, b) in enumerate(zip(cg.betas, hi.betas)):
    print(f"{j:5d}   {np.abs(a).max():15.3e}   {np.abs(b).max():11.3e}")

# Then the sorted, norm-weighted magnitudes, the curve one would plot

for kind, data in (("cg", interpolant), ("interp", f(x))):
    mag, _, _ = coefficient_decay(data, CodecConfig(q=1, kind=kind))
    picks = [0, 10, 100, 1000, 2000, 3000, 4000]
    print(kind, " ".join(f"{mag[i]:.1e}" for i in picks))
