"""Independent reference routes used by the tests.

Everything here deliberately avoids the package's panelized Gauss-Legendre
time quadrature and its vectorized assembly: amplitudes are integrated with
composite Simpson on breakpoint-aligned panels, straight from the lab-frame
charge trajectories. Agreement with the package is then a check of two
different integration schemes on the same integrand, not of one code path
against itself.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import simpson

from dipole_lab import DipoleSpec, KPoint
from dipole_lab.trajectory import lab_positions, lab_velocities

SIXTEEN_PI3 = 16.0 * math.pi**3


def _tau_panels(spec: DipoleSpec, t_eff: float, nodes_per_panel: int):
    """Simpson grids between envelope breakpoints, odd count per panel."""
    edges = [b for b in spec.envelope.breakpoints(spec.t_stop) if b < t_eff]
    edges.append(t_eff)
    if nodes_per_panel % 2 == 0:
        nodes_per_panel += 1
    lo = 0.0
    for hi in edges[1:] if edges[0] == 0.0 else edges:
        if hi > lo:
            yield np.linspace(lo, hi, nodes_per_panel)
        lo = hi


def simpson_mode_integrals(spec: DipoleSpec, kp: KPoint, t: float,
                           nodes_per_panel: int = 4097):
    """Position- and velocity-bracket time integrals via Simpson panels.

    Only dipoles at rest are handled; a drifting center of mass folds the
    drift velocity into the bracket in a way this plain route does not
    reproduce.
    """
    if any(v != 0.0 for v in spec.cm_velocity):
        raise ValueError("Simpson oracle only covers dipoles at rest")
    t_eff = min(float(t), spec.t_stop)
    if t_eff <= 0.0:
        return 0j, 0j
    su = math.sqrt(max(0.0, 1.0 - kp.cos_theta**2))
    khat = np.array([su * math.cos(kp.phi), su * math.sin(kp.phi), kp.cos_theta])
    kvec = kp.k * khat
    c = spec.constants.c
    i_pos = 0j
    i_vel = 0j
    for tau in _tau_panels(spec, t_eff, nodes_per_panel):
        r_plus, r_minus = lab_positions(spec, tau)
        v_plus, v_minus = lab_velocities(spec, tau)
        carrier = np.exp(1j * kp.k * c * tau)
        e_plus = np.exp(-1j * (r_plus @ kvec)) * carrier
        e_minus = np.exp(-1j * (r_minus @ kvec)) * carrier
        i_pos += simpson(e_plus - e_minus, x=tau)
        i_vel += simpson(e_plus * v_plus[:, 2] - e_minus * v_minus[:, 2], x=tau)
    return i_pos, i_vel


def simpson_amplitudes(spec: DipoleSpec, kp: KPoint, t: float,
                       nodes_per_panel: int = 4097):
    """(F, A_z) built from the Simpson integrals and the bare prefactors."""
    i_pos, i_vel = simpson_mode_integrals(spec, kp, t, nodes_per_panel)
    consts = spec.constants
    pref_f = 1j * spec.charge_e * consts.c / (SIXTEEN_PI3 * consts.eps_v * kp.k)
    pref_a = 1j * spec.charge_e * consts.mu_v * consts.c / (SIXTEEN_PI3 * kp.k)
    return pref_f * i_pos, pref_a * i_vel
