"""Energy, momentum, and angular statistics of the emitted field.

All reductions run over an amplitude table and the grid weights it was built
with, untapered: the taper is a reconstruction window, not part of the field
content. Sums rely on numpy's pairwise reduction, so results are stable
against grid ordering to about an ulp times log of the node count.

The angular density and the direction sampler are deliberately independent
artifacts: the density bins the energy functional's integrand, while the
sampler inverts the normalized sin^2 law directly. Their agreement is a
cross-check, not a shared code path.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .kspace import ModeAmplitudeGrid

__all__ = [
    "AngularSpectrum",
    "EmissionSample",
    "hamiltonian_exact",
    "hamiltonian_standard",
    "momentum_exact",
    "angular_density",
    "invert_angular_cdf",
    "sample_emission_direction",
    "sample_emission_directions",
]

_EIGHT_PI3 = 8.0 * math.pi**3


def _check_time(amp: ModeAmplitudeGrid, t: float) -> None:
    t_eff = max(min(float(t), amp.spec.t_stop), 0.0)
    if t_eff != amp.t_eff:
        raise ValueError(
            f"amplitude table frozen at t_eff={amp.t_eff:g} but t={t:g} "
            f"implies t_eff={t_eff:g}; rebuild the table for this time"
        )


def _node_energy(amp: ModeAmplitudeGrid):
    """Energy-functional summand per (k, u) ring, azimuth already summed.

    Returns (k_nodes, u_nodes, ring_energy) where ring_energy[i, j] carries
    everything except the radial dk weight: the k^2 volume Jacobian, omega^2,
    the polar weight with sin^2(theta), the azimuth ring sum, and 2|A|^2.
    Summed against the radial weights this is the total energy; left unsummed
    it is dE/dk on the radial nodes.
    """
    grid = amp.grid
    c = amp.spec.constants.c
    k, _ = grid.radial
    u, w_u = grid.polar
    sin2 = 1.0 - u * u
    abs2 = np.abs(amp.Az) ** 2
    if amp.phi_collapsed:
        ring = 2.0 * math.pi * abs2[:, :, 0]
    else:
        ring = grid.phi_weight * np.sum(abs2, axis=2)
    radial = (c * c) * k**4
    energy = (_EIGHT_PI3 * amp.spec.constants.eps_v * 2.0) * (
        radial[:, None] * (w_u * sin2)[None, :] * ring
    )
    return k, u, energy


def hamiltonian_exact(amp: ModeAmplitudeGrid, t: float) -> float:
    """Total field energy with the sin^2(theta) transversality weight."""
    _check_time(amp, t)
    k, _, energy = _node_energy(amp)
    w_k = amp.grid.radial[1]
    return float(np.sum(w_k[:, None] * energy))


def hamiltonian_standard(amp: ModeAmplitudeGrid, t: float) -> float:
    """Total field energy without the angular weight (the plane-wave
    orthonormality shortcut); exceeds hamiltonian_exact on any grid."""
    _check_time(amp, t)
    grid = amp.grid
    c = amp.spec.constants.c
    k, w_k = grid.radial
    u, w_u = grid.polar
    abs2 = np.abs(amp.Az) ** 2
    if amp.phi_collapsed:
        ring = 2.0 * math.pi * abs2[:, :, 0]
    else:
        ring = grid.phi_weight * np.sum(abs2, axis=2)
    radial = (c * c) * k**4
    total = np.sum((w_k * radial)[:, None] * w_u[None, :] * ring)
    return float(_EIGHT_PI3 * amp.spec.constants.eps_v * 2.0 * total)


def momentum_exact(amp: ModeAmplitudeGrid, t: float) -> np.ndarray:
    """Total field momentum; zero for a dipole at rest by +k/-k symmetry."""
    _check_time(amp, t)
    grid = amp.grid
    c = amp.spec.constants.c
    k, w_k = grid.radial
    u, w_u = grid.polar
    sin2 = 1.0 - u * u
    abs2 = np.abs(amp.Az) ** 2
    pref = _EIGHT_PI3 * amp.spec.constants.eps_v * 2.0
    # omega_k * k_vec = c k^2 khat, times the k^2 volume Jacobian
    radial = pref * c * (k**4) * w_k
    if amp.phi_collapsed:
        g_z = np.sum(radial[:, None] * (w_u * sin2 * u)[None, :] * (2.0 * math.pi * abs2[:, :, 0]))
        return np.array([0.0, 0.0, float(g_z)])
    su = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    phis = grid.phi_nodes
    base = radial[:, None, None] * (w_u * sin2)[None, :, None] * grid.phi_weight * abs2
    g_x = np.sum(base * su[None, :, None] * np.cos(phis)[None, None, :])
    g_y = np.sum(base * su[None, :, None] * np.sin(phis)[None, None, :])
    g_z = np.sum(base * u[None, :, None])
    return np.array([float(g_x), float(g_y), float(g_z)])


@dataclasses.dataclass(frozen=True)
class AngularSpectrum:
    """Energy split by polar emission angle, plus the radial marginal.

    density[b] is energy per solid angle in bin b (zero for bins the polar
    rule leaves empty); solid_angle[b] is the quadrature measure of the bin,
    so sum(density * solid_angle) recovers the total energy. k_marginal is
    dE/dk sampled on the radial nodes.
    """

    theta_bins: np.ndarray
    density: np.ndarray
    k_marginal: np.ndarray
    solid_angle: np.ndarray
    total: float


def angular_density(amp: ModeAmplitudeGrid, t: float, n_theta_bins: int) -> AngularSpectrum:
    """Bin the energy functional's integrand by polar angle.

    Bins are uniform in theta over [0, pi]. Each polar node's full azimuth
    ring lands in one bin; the bin density is ring energy over ring solid
    angle, which for a slow envelope reproduces the sin^2 law bin-averaged.
    """
    if n_theta_bins < 8:
        raise ValueError("need at least 8 polar bins")
    _check_time(amp, t)
    k, u, energy = _node_energy(amp)
    w_k = amp.grid.radial[1]
    w_u = amp.grid.polar[1]
    k_marginal = np.sum(energy, axis=1)
    e_ring = np.sum(w_k[:, None] * energy, axis=0)
    theta = np.arccos(np.clip(u, -1.0, 1.0))
    idx = np.minimum((theta / math.pi * n_theta_bins).astype(int), n_theta_bins - 1)
    e_bin = np.zeros(n_theta_bins)
    omega_bin = np.zeros(n_theta_bins)
    np.add.at(e_bin, idx, e_ring)
    np.add.at(omega_bin, idx, 2.0 * math.pi * w_u)
    density = np.divide(e_bin, omega_bin, out=np.zeros_like(e_bin), where=omega_bin > 0.0)
    centers = (np.arange(n_theta_bins) + 0.5) * math.pi / n_theta_bins
    total = float(np.sum(density * omega_bin))
    return AngularSpectrum(
        theta_bins=centers,
        density=density,
        k_marginal=k_marginal,
        solid_angle=omega_bin,
        total=total,
    )


@dataclasses.dataclass(frozen=True)
class EmissionSample:
    """One sampled emission direction in polar form plus the unit vector."""

    theta: float
    phi: float
    direction: np.ndarray


def invert_angular_cdf(x, tol: float = 1e-12, max_iter: int = 80) -> np.ndarray:
    """Solve 0.75 u - 0.25 u^3 + 0.5 = x for u in [-1, 1], elementwise.

    Safeguarded Newton from u0 = 2x - 1: steps that leave the current
    bracket fall back to bisection, which also handles the flat endpoints
    where the density vanishes.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("CDF values must lie in [0, 1]")
    lo = np.full(x.shape, -1.0)
    hi = np.full(x.shape, 1.0)
    u = 2.0 * x - 1.0
    for _ in range(max_iter):
        f = 0.75 * u - 0.25 * u**3 + 0.5 - x
        lo = np.where(f <= 0.0, u, lo)
        hi = np.where(f > 0.0, u, hi)
        if np.all((np.abs(f) < 1e-15) | (hi - lo < tol)):
            break
        deriv = 0.75 * (1.0 - u * u)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(deriv > 0.0, f / deriv, np.inf)
        candidate = u - step
        bad = ~np.isfinite(candidate) | (candidate <= lo) | (candidate >= hi)
        u = np.where(bad, 0.5 * (lo + hi), candidate)
    return u


def sample_emission_directions(rng: np.random.Generator, n: int):
    """Draw n directions: phi uniform, cos(theta) from (3/4)(1 - u^2).

    Returns (theta, phi, directions) with directions of shape (n, 3).
    """
    phi = 2.0 * math.pi * rng.random(n)
    u = invert_angular_cdf(rng.random(n))
    su = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    directions = np.stack([su * np.cos(phi), su * np.sin(phi), u], axis=-1)
    theta = np.arccos(np.clip(u, -1.0, 1.0))
    return theta, phi, directions


def sample_emission_direction(rng: np.random.Generator) -> EmissionSample:
    """Draw one emission direction from the dipole's angular law."""
    theta, phi, directions = sample_emission_directions(rng, 1)
    return EmissionSample(theta=float(theta[0]), phi=float(phi[0]), direction=directions[0])
