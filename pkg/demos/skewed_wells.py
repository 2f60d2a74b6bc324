"""
Skewing the potential without moving the levels
===============================================

Mixing in the odd seed solution tilts the potential. The spectrum does not
change, but the ground state slides into whichever well becomes deeper.
"""
import numpy as np

from susyqho.model import PartnerParams, eigenstate, partner_potential

x = np.linspace(-6, 6, 1201)

for s_hat in [0.0, -0.9, -0.99, -0.999]:
    params = PartnerParams(-0.9, s_hat)
    v = partner_potential(params, x)
    ground = eigenstate(-1, params, x)
    first = eigenstate(0, params, x)
    print(f"s_hat={s_hat:+.3f}  s_raw={params.s_raw:+.4f}  "
          f"left well {v[x < 0].min():6.3f}  right well {v[x > 0].min():6.3f}  "
          f"ground peak x={x[np.abs(ground).argmax()]:+.2f}  "
          f"first excited peak x={x[np.abs(first).argmax()]:+.2f}")

print("lowest pair at p=-0.9:", 1 - 2 * -0.9, "and", 3.0, "(a near-degenerate two-level system)")

# flipping the sign of s mirrors the potential
a = partner_potential(PartnerParams(4.0, 0.9), x)
b = partner_potential(PartnerParams(4.0, -0.9), -x)
print("mirror symmetry defect:", np.max(np.abs(a - b)))
