"""Spacetime field reconstruction from mode-amplitude tables.

Every reconstruction is a weighted sum over the k-grid of the amplitude times
the plane-wave factor exp(i(k.r - k c t)) plus its conjugate, with the grid's
radial taper applied. The scalar potential is assembled in three groups: the
longitudinal projection of the axial amplitude, a closed-form Coulomb pair at
the present-time charge positions (which resums the 1/k^2 static content the
truncated ball cannot), and the longitudinal projection of the drift
amplitude. The electric field uses the transverse structure (u khat - zhat)
per node and the magnetic field the k x zhat structure, so B.zhat is exactly
zero by construction.

retarded_potential_oracle shares nothing with the k-space route: it finds the
retarded time of each point charge by bisection and evaluates the retarded
potentials with the 1/(1 - nhat.v/c) Jacobian. Agreement between the two
routes is the module's main acceptance evidence.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import (
    AliasingRisk,
    RootNotBracketed,
    SingularPoint,
    SuperluminalSpec,
    UnsupportedConfig,
)
from .kspace import (
    DEFAULT_QUADRATURE,
    KGrid,
    ModeAmplitudeGrid,
    QuadratureSettings,
    build_amplitude_grid,
    _cis,
)
from .trajectory import DipoleSpec, lab_positions, lab_velocities, max_charge_speed

__all__ = [
    "FieldSample",
    "vector_potential",
    "scalar_potential",
    "scalar_potential_direct",
    "electric_field",
    "magnetic_field",
    "small_dipole_fields",
    "sample_fields",
    "retarded_potential_oracle",
]

_FOUR_PI = 4.0 * math.pi
DEFAULT_EPS_DIST = 1e-9


@dataclasses.dataclass(frozen=True)
class FieldSample:
    """Potentials and fields at one spacetime point, all components real."""

    position: tuple
    time: float
    phi: float
    Avec: np.ndarray
    E: np.ndarray
    B: np.ndarray


def _check_resolvable(grid: KGrid, r: np.ndarray) -> None:
    radius = float(np.linalg.norm(r))
    if radius * grid.max_radial_spacing > math.pi / 4.0:
        raise AliasingRisk(
            f"|r|={radius:g} with radial node spacing {grid.max_radial_spacing:g} "
            f"undersamples exp(ikr); keep |r| <= {math.pi / 4.0 / grid.max_radial_spacing:g} "
            "or refine the radial rule"
        )


def _node_tables(amp: ModeAmplitudeGrid, r: np.ndarray, t: float):
    """Plane-wave factors and full quadrature weights for one field point."""
    grid = amp.grid
    c = amp.spec.constants.c
    k, w_k = grid.radial
    u, w_u = grid.polar
    phis = grid.phi_nodes
    su = np.sqrt(np.maximum(0.0, 1.0 - u * u))
    cphi = np.cos(phis)
    sphi = np.sin(phis)
    proj = r[0] * cphi + r[1] * sphi
    ang = su[:, None] * proj[None, :] + r[2] * u[:, None]
    cis = _cis(k[:, None, None] * (ang[None, :, :] - c * t))
    # full d^3k node weight: radial dk weight, k^2 Jacobian, taper, dO weights
    W = (w_k * k * k * grid.taper_weights)[:, None, None] * w_u[None, :, None] * grid.phi_weight
    return k, u, su, cphi, sphi, cis, W


def _amp_table(spec: DipoleSpec, grid: KGrid, t: float,
               quad: QuadratureSettings) -> ModeAmplitudeGrid:
    return build_amplitude_grid(spec, grid, t, quad)


def vector_potential(spec: DipoleSpec, grid: KGrid, r, t: float,
                     quad: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """Vector potential of the relative motion at (r, t); along zhat exactly."""
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    _, _, _, _, _, cis, W = _node_tables(amp, r, t)
    a_z = 2.0 * float(np.sum(W * (amp.Az * cis).real))
    return np.array([0.0, 0.0, a_z])


def scalar_potential(spec: DipoleSpec, grid: KGrid, r, t: float,
                     quad: QuadratureSettings = DEFAULT_QUADRATURE,
                     eps_dist: float = DEFAULT_EPS_DIST) -> float:
    """Scalar potential at (r, t): two longitudinal mode sums plus the
    present-time Coulomb pair. The pair cancels exactly whenever the charges
    coincide (before the pulse and after it ends)."""
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    _, u, su, cphi, sphi, cis, W = _node_tables(amp, r, t)
    c = spec.constants.c
    group1 = 2.0 * float(np.sum(W * (c * u)[None, :, None] * (amp.Az * cis).real))
    group3 = 0.0
    if amp.Vvec.any():
        k_dot_v = (
            su[None, :, None] * cphi[None, None, :] * amp.Vvec[..., 0]
            + su[None, :, None] * sphi[None, None, :] * amp.Vvec[..., 1]
            + u[None, :, None] * amp.Vvec[..., 2]
        )
        group3 = 2.0 * float(np.sum(W * c * (k_dot_v * cis).real))
    pos_plus, pos_minus = lab_positions(spec, float(t))
    r_plus = float(np.linalg.norm(r - pos_plus))
    r_minus = float(np.linalg.norm(r - pos_minus))
    if min(r_plus, r_minus) < eps_dist:
        raise SingularPoint(
            f"field point within {eps_dist:g} of a charge (distances "
            f"{r_plus:.3e}, {r_minus:.3e})"
        )
    consts = spec.constants
    pair = spec.charge_e / (_FOUR_PI * consts.eps_v) * (1.0 / r_plus - 1.0 / r_minus)
    return group1 + pair + group3


def scalar_potential_direct(spec: DipoleSpec, grid: KGrid, r, t: float,
                            quad: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Scalar potential as the bare mode sum of the scalar amplitude.

    Mutual oracle for scalar_potential. After the pulse the two agree
    node-by-node; during it this form carries the static 1/k^2 tail the
    truncated ball resolves only slowly, so prefer scalar_potential.
    """
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    _, _, _, _, _, cis, W = _node_tables(amp, r, t)
    return 2.0 * float(np.sum(W * (amp.F * cis).real))


def _require_no_drift(spec: DipoleSpec, op: str) -> None:
    if any(v != 0.0 for v in spec.cm_velocity):
        raise UnsupportedConfig(f"{op} assumes a dipole at rest; cm_velocity={spec.cm_velocity}")


def electric_field(spec: DipoleSpec, grid: KGrid, r, t: float,
                   quad: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """Radiated electric field at (r, t) for a dipole at rest.

    Each node contributes along (u khat - zhat), the transverse projection of
    zhat, so axial nodes cancel and the equatorial ones dominate.
    """
    _require_no_drift(spec, "electric_field")
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    k, u, su, cphi, sphi, cis, W = _node_tables(amp, r, t)
    c = spec.constants.c
    core = W * (c * k)[:, None, None] * (amp.Az * cis).imag
    usu = (u * su)[None, :, None]
    e_x = 2.0 * float(np.sum(core * usu * cphi[None, None, :]))
    e_y = 2.0 * float(np.sum(core * usu * sphi[None, None, :]))
    e_z = 2.0 * float(np.sum(core * (u * u - 1.0)[None, :, None]))
    return np.array([e_x, e_y, e_z])


def magnetic_field(spec: DipoleSpec, grid: KGrid, r, t: float,
                   quad: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """Radiated magnetic field at (r, t); z component is exactly zero."""
    _require_no_drift(spec, "magnetic_field")
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    k, _, su, cphi, sphi, cis, W = _node_tables(amp, r, t)
    core = W * k[:, None, None] * (amp.Az * cis).imag
    ksu = su[None, :, None]
    b_x = -2.0 * float(np.sum(core * ksu * sphi[None, None, :]))
    b_y = 2.0 * float(np.sum(core * ksu * cphi[None, None, :]))
    return np.array([b_x, b_y, 0.0])


def small_dipole_fields(spec: DipoleSpec, grid: KGrid, r, t: float,
                        quad: QuadratureSettings = DEFAULT_QUADRATURE):
    """Point-dipole shortcut: E strictly along zhat, B as in magnetic_field.

    Kept for contrast with electric_field, which it matches only near the
    equator; away from it the missing transverse projection is an order-one
    effect.
    """
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    k, _, su, cphi, sphi, cis, W = _node_tables(amp, r, t)
    c = spec.constants.c
    core = W * k[:, None, None] * (amp.Az * cis).imag
    e_z = -2.0 * float(np.sum(core * c))
    b_x = -2.0 * float(np.sum(core * su[None, :, None] * sphi[None, None, :]))
    b_y = 2.0 * float(np.sum(core * su[None, :, None] * cphi[None, None, :]))
    return np.array([0.0, 0.0, e_z]), np.array([b_x, b_y, 0.0])


def sample_fields(spec: DipoleSpec, grid: KGrid, r, t: float,
                  quad: QuadratureSettings = DEFAULT_QUADRATURE,
                  eps_dist: float = DEFAULT_EPS_DIST) -> FieldSample:
    """All potentials and fields at one point from a single plane-wave table."""
    _require_no_drift(spec, "sample_fields")
    r = np.asarray(r, dtype=float)
    _check_resolvable(grid, r)
    amp = _amp_table(spec, grid, t, quad)
    k, u, su, cphi, sphi, cis, W = _node_tables(amp, r, t)
    c = spec.constants.c
    az_cis = amp.Az * cis
    re_part = W * az_cis.real
    im_core = W * k[:, None, None] * az_cis.imag
    a_z = 2.0 * float(np.sum(re_part))
    group1 = 2.0 * float(np.sum(re_part * (c * u)[None, :, None]))
    pos_plus, pos_minus = lab_positions(spec, float(t))
    r_plus = float(np.linalg.norm(r - pos_plus))
    r_minus = float(np.linalg.norm(r - pos_minus))
    if min(r_plus, r_minus) < eps_dist:
        raise SingularPoint(f"field point within {eps_dist:g} of a charge")
    consts = spec.constants
    pair = spec.charge_e / (_FOUR_PI * consts.eps_v) * (1.0 / r_plus - 1.0 / r_minus)
    usu = (u * su)[None, :, None]
    e_x = 2.0 * c * float(np.sum(im_core * usu * cphi[None, None, :]))
    e_y = 2.0 * c * float(np.sum(im_core * usu * sphi[None, None, :]))
    e_z = 2.0 * c * float(np.sum(im_core * (u * u - 1.0)[None, :, None]))
    b_x = -2.0 * float(np.sum(im_core * su[None, :, None] * sphi[None, None, :]))
    b_y = 2.0 * float(np.sum(im_core * su[None, :, None] * cphi[None, None, :]))
    return FieldSample(
        position=tuple(float(x) for x in r),
        time=float(t),
        phi=group1 + pair,
        Avec=np.array([0.0, 0.0, a_z]),
        E=np.array([e_x, e_y, e_z]),
        B=np.array([b_x, b_y, 0.0]),
    )


def _retarded_time(spec: DipoleSpec, r: np.ndarray, t: float, which: int,
                   tol: float) -> float:
    """Solve tau + |r - r_q(tau)|/c = t for one charge by bisection.

    The worldline is bounded around the drifting CM and subluminal, so the
    lag is an increasing function of tau with exactly one root.
    """
    c = spec.constants.c

    def lag(tau: float) -> float:
        pos = lab_positions(spec, tau)[which]
        return tau + float(np.linalg.norm(r - pos)) / c - t

    hi = float(t)
    cm0 = np.asarray(spec.cm_position, dtype=float)
    drift = math.sqrt(sum(v * v for v in spec.cm_velocity))
    reach = float(np.linalg.norm(r - cm0)) + drift * abs(t) + spec.amp_minus * (1.0 + spec.mass_ratio)
    lo = t - reach / c - 2.0 * math.pi / spec.omega0
    width = hi - lo
    for _ in range(64):
        if lag(lo) <= 0.0:
            break
        width *= 2.0
        lo = hi - width
    else:
        raise RootNotBracketed(f"no causal emission time for field point {tuple(r)} at t={t:g}")
    n_steps = min(200, max(1, math.ceil(math.log2(max(width / tol, 2.0)))))
    for _ in range(n_steps):
        mid = 0.5 * (lo + hi)
        if lag(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def retarded_potential_oracle(spec: DipoleSpec, r, t: float,
                              eps_dist: float = DEFAULT_EPS_DIST):
    """(phi, Avec) from the retarded point-charge potentials of both charges.

    Independent of the k-space machinery. Each charge contributes
    q/(4 pi eps R kappa) and mu q v/(4 pi R kappa) at its own retarded time,
    kappa being the approach Jacobian 1 - nhat.v/c. A charge with no causal
    intersection contributes zero.
    """
    c = spec.constants.c
    if max_charge_speed(spec) >= c:
        raise SuperluminalSpec(
            "charge speed reaches c; retarded potentials are undefined for this spec"
        )
    r = np.asarray(r, dtype=float)
    tol = 1e-12 * spec.t_stop
    consts = spec.constants
    phi = 0.0
    a_vec = np.zeros(3)
    for which, q in ((0, spec.charge_e), (1, -spec.charge_e)):
        try:
            tau_ret = _retarded_time(spec, r, t, which, tol)
        except RootNotBracketed:
            continue
        pos = lab_positions(spec, tau_ret)[which]
        vel = lab_velocities(spec, tau_ret)[which]
        r_vec = r - pos
        dist = float(np.linalg.norm(r_vec))
        if dist < eps_dist:
            raise SingularPoint(
                f"field point within {eps_dist:g} of a charge at its retarded time"
            )
        kappa = 1.0 - float(np.dot(r_vec, vel)) / (dist * c)
        phi += q / (_FOUR_PI * consts.eps_v * dist * kappa)
        a_vec += consts.mu_v * q / (_FOUR_PI * dist * kappa) * vel
    return phi, a_vec
