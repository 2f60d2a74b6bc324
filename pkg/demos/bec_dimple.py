"""
Condensation in a dimple trap
=============================

Lowering only the ground level by 2p (in units of hbar omega/2) widens the
gap to the excited levels, which raises the critical temperature. Units
below are hbar omega / k_B.
"""
from susyqho.bec import TrapSpec, critical_temperature, occupation_closedform, occupation_sum, tc_curve

n_atoms = 10 ** 5
for p in [0, 50, 100, 200, 300]:
    print(f"p={p:3d}  Tc={critical_temperature(TrapSpec(n_atoms, p)):9.1f}")

rows = tc_curve(n_atoms, [0, 100, 200, 300])
print("ratios:", [round(r, 3) for _, r in rows])

# the closed form drops half of the first term of the sum; at small p that matters
for p in [0, 10]:
    beta = 1e-3
    s, c = occupation_sum(beta, p), occupation_closedform(beta, p)
    print(f"p={p:2d}  sum {s:9.2f}  closed form {c:9.2f}  gap {100 * (s - c) / s:.1f}%")
