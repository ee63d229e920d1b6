# What the wavelets look like
#
# The cascade algorithm synthesises a unit coefficient on a fine grid.  Three
# kinds share the same predictor and differ only in the update step, which
# is what decides how far a wavelet reaches.

import numpy as np

from pwav import cascade_primal, make_plan
from pwav.basis import support_interval
from pwav.grid import GridHierarchy

q, j, J, k = 2, 2, 8, 3
x = GridHierarchy(q, J).coordinates(J)
lo, hi = support_interval(q, j, k)
outside = (x < lo) | (x > hi)

for kind in ("interp", "dg", "cg"):
    _, psi = cascade_primal(make_plan(kind, q, J), j)
    w = psi[k]
    nz = x[np.abs(w) > 0]
    print(f"{kind:6s} support [{nz.min():.3f}, {nz.max():.3f}]  "
          f"max outside [{lo:.2f}, {hi:.2f}] = {np.abs(w[outside]).max():.1e}")

# Haar: the q = 0 case reproduces the classical step

_, psi = cascade_primal(make_plan("cg", 0, 3), 0)
print("haar psi_0,0:", psi[0])
