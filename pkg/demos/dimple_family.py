"""
Dimples and double wells from one seed
======================================

Each p > -1 gives a partner of the oscillator with the same ladder
2k + 3 plus one extra level at 1 - 2p. Positive p digs a dimple at the
origin, negative p raises a bump there.
"""
import numpy as np

from susyqho.model import PartnerParams, eigenstate, energy, partner_potential

x = np.linspace(-5, 5, 1001)

for p in [4.0, 1.0, 0.0, -0.5, -0.9]:
    params = PartnerParams(p)
    v = partner_potential(params, x)
    print(f"p={p:5.1f}  V(0)={v[500]:7.3f}  min V={v.min():7.3f} at x={x[v.argmin()]:+.2f}"
          f"  levels {[energy(k, params) for k in range(-1, 3)]}")

# the ground state is 1/phi, normalized in closed form
params = PartnerParams(2.0)
psi = eigenstate(-1, params, x)
print("ground state norm by trapezoid:", np.trapezoid(psi ** 2, x))

# at p = 0 the whole family collapses to the textbook oscillator
print("p=0 potential minus x^2:", np.max(np.abs(partner_potential(PartnerParams(0.0), x) - x ** 2)))
