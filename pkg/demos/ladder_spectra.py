"""Truncated ladder operators and the spectra built from them.

Shows where the finite basis is exact ([a, a+] = I below the edge), where
it must fail (the top level), and the resulting mode and stimulated-emission
spectra with their characteristic spacings.
"""

import math

import numpy as np

from dipole_lab import (
    build_ladder,
    commutator_check,
    commutator_float_residue,
    mode_hamiltonian,
    stimulated_hamiltonian,
)

dim, omega, theta = 8, 1.0, 0.5 * math.pi
ops = build_ladder(dim, omega=omega, theta=theta)

restricted, top_defect = commutator_check(ops)
print(f"dim = {dim}: [a, a+] - I vanishes below the edge (error {restricted:g});")
print(f"the top diagonal entry misses by exactly {top_defect:g} = dim.")
print(f"float matmul residue: {commutator_float_residue(ops):.2e} "
      "(fl(sqrt(n))^2 != n, so the float route cannot be exact)")

h = mode_hamiltonian(ops)
scale = omega * math.sin(theta) ** 2
print(f"\nmode spectrum in units of hbar omega sin^2(theta) = {scale:g}:")
diag = np.diag(h) / scale
for n, level in enumerate(diag):
    note = "  <- truncation edge, defective" if n == dim - 1 else ""
    print(f"  n={n}: {level:6.3f}{note}")

h_se = stimulated_hamiltonian(omega_s=omega, theta_s=theta, dim=dim)
spacing = np.diff(np.diag(h_se))[: dim - 2] / scale
print(f"\nstimulated-emission level spacing / single-mode scale: {spacing[0]:.3f}")
print("every reliable step is exactly 2: the interference term moves two")
print("quanta's worth of energy per level.")
