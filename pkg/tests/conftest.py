"""Shared fixtures: one canonical dipole and the grids the tests agree on.

Amplitude tables are cached inside the package keyed on (spec, grid,
effective time), so session-scoped fixtures here mostly exist to spell the
frozen grid parameters once. The wide-band oracle grid is expensive (about
a minute to fill); every test that needs it shares the same table.
"""

from __future__ import annotations

import math

import pytest

from dipole_lab import DipoleSpec, KGrid, build_amplitude_grid

OMEGA0 = 1.0
T_STOP = 20.0 * math.pi  # ten cycles, enough for the spectral line to form
AMP = 0.01  # keeps peak speed ~0.013c, comfortably non-relativistic


@pytest.fixture(scope="session")
def spec() -> DipoleSpec:
    return DipoleSpec(amp_minus=AMP, omega0=OMEGA0, t_stop=T_STOP)


@pytest.fixture(scope="session")
def spec_sym() -> DipoleSpec:
    """Equal-mass pair: charge positions are exactly mirror images, so
    every direction-odd integrand cancels identically."""
    return DipoleSpec(amp_minus=AMP, omega0=OMEGA0, t_stop=T_STOP, mass_ratio=1.0)


@pytest.fixture(scope="session")
def t_after(spec) -> float:
    return spec.t_stop + 0.5


@pytest.fixture(scope="session")
def grid_main() -> KGrid:
    """Wide-band working grid: resolves the emission line at k = 1 with a
    long tail, cheap enough for every observable test."""
    return KGrid(n_k=96, n_theta=48, n_phi=32, k_max=20.0)


@pytest.fixture(scope="session")
def grid_polar_fine() -> KGrid:
    """Angularly fine, azimuth collapsed: for binned angular densities the
    polar rule is what limits accuracy, so spend the nodes there."""
    return KGrid(n_k=96, n_theta=256, n_phi=1, k_max=20.0)


@pytest.fixture(scope="session")
def grid_oracle() -> KGrid:
    """Grid tuned for pointwise field reconstruction out to |r| ~ 15.

    The band [0.05, 5] keeps the radial node count affordable while the
    spectral tails it cuts sit below 1e-3 of the reconstructed potentials.
    Radial spacing must track phase rates up to k(r + ct), hence 832 nodes;
    288 polar by 72 azimuthal nodes keep the transverse phase k*r aliasing
    below the same budget.
    """
    return KGrid(n_k=832, n_theta=288, n_phi=72, k_max=5.0, k_min=0.05,
                 taper_fraction=0.08, narrow_band=True)


@pytest.fixture(scope="session")
def amp_main(spec, grid_main, t_after):
    return build_amplitude_grid(spec, grid_main, t_after)


@pytest.fixture(scope="session")
def amp_polar_fine(spec, grid_polar_fine, t_after):
    return build_amplitude_grid(spec, grid_polar_fine, t_after)
