"""Potentials from the mode sum against the retarded-time oracle.

Reconstructs phi and A at a handful of points a few wavelengths out, once
by summing plane-wave modes over a band-limited grid and once by solving
for the retarded emission times of both charges. The two routes share no
code beyond the trajectory itself.

The grid here trades accuracy for speed (about 1e-3 relative at these
radii); the test suite runs the same comparison on a denser grid.
"""

import math
import time

import numpy as np

from dipole_lab import (
    DipoleSpec,
    KGrid,
    retarded_potential_oracle,
    scalar_potential,
    vector_potential,
)

spec = DipoleSpec(amp_minus=0.01, omega0=1.0, t_stop=20.0 * math.pi)

# radial spacing must resolve phase rates up to k*(r + c*t), which is why
# reconstruction grids are dense in k and band-limited
grid = KGrid(n_k=416, n_theta=144, n_phi=36, k_max=5.0, k_min=0.05,
             taper_fraction=0.08, narrow_band=True)

points = [
    (np.array([4.0, 0.0, 2.0]), spec.t_stop + 1.5),
    (np.array([-3.0, 3.5, 1.0]), spec.t_stop + 2.0),
    (np.array([0.0, -5.0, 3.0]), spec.t_stop + 3.0),
    (np.array([5.0, 2.0, -3.0]), spec.t_stop + 2.5),
]

print(f"filling {grid.n_k}x{grid.n_theta}x{grid.n_phi} mode table ...")
t0 = time.perf_counter()
for r, t in points:
    phi_modes = scalar_potential(spec, grid, r, t)
    a_modes = vector_potential(spec, grid, r, t)
    phi_ret, a_ret = retarded_potential_oracle(spec, r, t)
    dphi = abs(phi_modes - phi_ret) / abs(phi_ret)
    da = np.linalg.norm(a_modes - a_ret) / np.linalg.norm(a_ret)
    print(f"r = {np.array2string(r, precision=1):>18}  t - t_stop = {t - spec.t_stop:.1f}")
    print(f"    phi: modes {phi_modes: .6e}   retarded {phi_ret: .6e}   rel {dphi:.1e}")
    print(f"    A_z: modes {a_modes[2]: .6e}   retarded {a_ret[2]: .6e}   rel {da:.1e}")
print(f"done in {time.perf_counter() - t0:.1f}s")
