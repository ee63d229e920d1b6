# Does a higher polynomial order pay off?
#
# For a smooth field the order-4 transform reaches a small L2 error with far
# fewer coefficients than the linear one.  For a field made of kinks the
# extra order buys nothing and the linear transform is as good or better.

import numpy as np

from pwav.codec import CodecConfig, Encoder, rd_sweep, threshold_for_error

g = np.linspace(0, 1, 257)
x, y = np.meshgrid(g, g, indexing="ij")
fields = {
    "gaussian": (np.exp(-20 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)), 1e-6),
    "kinks": (np.abs(x - 0.3) + np.abs(y - 0.61) + 0.5 * np.abs(x + y - 1.13), 1e-3),
}

for name, (field, target) in fields.items():
    for q in (1, 2, 4):
        enc = Encoder(field, CodecConfig(q=q, kind="cg"))
        rep, _ = threshold_for_error(enc, target)
        print(f"{name:9s} q={q}  CR={rep.cr:.4f}  L2={rep.l2_error:.2e}  Linf={rep.linf_error:.2e}")

# A full rate-distortion curve for one setting

field = fields["gaussian"][0]
for rep in rd_sweep(field, CodecConfig(q=4, kind="cg"), np.geomspace(1e-9, 1e-3, 7)):
    print(f"tau={rep.threshold:.0e}  CR={rep.cr:.4f}  L2={rep.l2_error:.2e}")
