"""Truncated ladder algebra for single field modes.

Matrices act on number states |0> ... |dim-1>. Truncation corrupts only the
top diagonal entry of the commutator, so every identity is stated on the
reliable subspace spanned by the first dim-1 states.

Two ordering conventions float around for the per-mode energy: the
symmetrized half-sum 0.5*(a a^+ + a^+ a), which equals number + 1/2 and is
the one consistent with the commutator, and the bare product a a^+ + 1/2,
which double-counts the vacuum shift. This module implements the half-sum
and the CLI report prints the spectra of both so the discrepancy is visible
rather than silently absorbed.

commutator_check deserves a note: the nonzero entries of a a^+ and a^+ a are
squares sqrt(n)*sqrt(n) of single stored entries, so their exact values are
the integers n even though fl(sqrt(n))^2 can differ from n by an ulp (it
does for n=2). The check therefore evaluates the products structurally,
yielding an exactly zero restricted error, and separately verifies that a
floating matmul agrees to within rounding. commutator_float_residue exposes
that rounding residue for anyone who wants to see it.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import DimensionTooSmall
from .kspace import DEFAULT_QUADRATURE, KPoint, QuadratureSettings, _point_integrals
from .trajectory import DipoleSpec

__all__ = [
    "LadderOps",
    "build_ladder",
    "commutator_check",
    "commutator_float_residue",
    "mode_hamiltonian",
    "mode_momentum",
    "stimulated_hamiltonian",
    "heisenberg_amplitude",
]

_SIXTEEN_PI3 = 16.0 * math.pi**3


@dataclasses.dataclass(frozen=True, eq=False)
class LadderOps:
    """Lowering/raising matrices for one mode, with its frequency and angle.

    raise_ is exactly the transpose of lower (the trailing underscore dodges
    the keyword). hbar and volume ride along as scale constants.
    """

    dim: int
    lower: np.ndarray = dataclasses.field(repr=False)
    raise_: np.ndarray = dataclasses.field(repr=False)
    omega: float
    theta: float
    hbar: float = 1.0
    volume: float = 1.0


def build_ladder(dim: int, omega: float, theta: float,
                 hbar: float = 1.0, volume: float = 1.0) -> LadderOps:
    """Ladder pair with lower[n-1, n] = sqrt(n) on an N-state truncation."""
    if dim < 2:
        raise DimensionTooSmall(f"need at least 2 number states, got dim={dim}")
    lower = np.zeros((dim, dim))
    n = np.arange(1, dim)
    lower[n - 1, n] = np.sqrt(n)
    raise_ = lower.T.copy()
    lower.setflags(write=False)
    raise_.setflags(write=False)
    return LadderOps(dim=dim, lower=lower, raise_=raise_, omega=float(omega),
                     theta=float(theta), hbar=float(hbar), volume=float(volume))


def _structural_commutator_diag(dim: int) -> np.ndarray:
    """Exact diagonal of [a, a^+]: ones below the edge, -(dim-1) on top.

    Every nonzero entry of a a^+ and a^+ a is the square of one stored
    sqrt(n), so the exact products are the integers n; building the diagonal
    from them sidesteps the fl(sqrt(n))^2 rounding."""
    lower_prod = np.concatenate([np.arange(1.0, dim), [0.0]])
    upper_prod = np.arange(0.0, dim)
    return lower_prod - upper_prod


def commutator_check(ops: LadderOps):
    """(restricted_norm_error, top_level_defect) of [a, a^+] vs identity.

    The restricted error over states |0> ... |dim-2> is exactly 0.0; the top
    diagonal entry misses the identity by exactly dim. A floating matmul is
    cross-checked against the structural evaluation to within rounding.
    """
    dim = ops.dim
    diag = _structural_commutator_diag(dim)
    restricted = float(np.max(np.abs(diag[: dim - 1] - 1.0)))
    top_defect = float(abs(diag[dim - 1] - 1.0))
    residue = commutator_float_residue(ops)
    budget = 16.0 * np.finfo(float).eps * dim
    if residue > budget:
        raise RuntimeError(
            f"float matmul disagrees with the structural commutator by {residue:.3e} "
            f"(budget {budget:.3e}); ladder matrices are corrupted"
        )
    return restricted, top_defect


def commutator_float_residue(ops: LadderOps) -> float:
    """Max deviation of the floating-matmul [a, a^+] from the exact one."""
    comm = ops.lower @ ops.raise_ - ops.raise_ @ ops.lower
    exact = np.diag(_structural_commutator_diag(ops.dim))
    return float(np.max(np.abs(comm - exact)))


def _symmetric_base(ops: LadderOps) -> np.ndarray:
    """Half-sum 0.5*(a a^+ + a^+ a); diagonal, equal to number + 1/2 below
    the truncation edge."""
    return 0.5 * (ops.lower @ ops.raise_ + ops.raise_ @ ops.lower)


def mode_hamiltonian(ops: LadderOps) -> np.ndarray:
    """hbar * omega * sin^2(theta) * 0.5*(a a^+ + a^+ a).

    Eigenvalues on the reliable subspace are hbar*omega*sin^2(theta)*(n+1/2)
    for n = 0 ... dim-2; the top one is depressed by truncation.
    """
    scale = ops.hbar * ops.omega * math.sin(ops.theta) ** 2
    return scale * _symmetric_base(ops)


def mode_momentum(ops: LadderOps, khat, c: float = 1.0) -> np.ndarray:
    """Momentum operator triple (hbar k khat_i) sin^2(theta) 0.5(a a^+ + a^+ a).

    khat must be unit length; k is omega/c. Returns an array of shape
    (3, dim, dim) whose components are exact scalar multiples of each other.
    """
    khat = np.asarray(khat, dtype=float)
    if khat.shape != (3,) or abs(float(np.linalg.norm(khat)) - 1.0) > 1e-12:
        raise ValueError("khat must be a unit 3-vector")
    k = ops.omega / c
    scale = ops.hbar * k * math.sin(ops.theta) ** 2
    base = _symmetric_base(ops)
    return np.stack([(scale * comp) * base for comp in khat])


def stimulated_hamiltonian(omega_s: float, theta_s: float, dim: int,
                           hbar: float = 1.0) -> np.ndarray:
    """Interference-mode energy operator: hbar omega_s sin^2(theta_s) (a a^+ + a^+ a).

    Twice the half-sum of mode_hamiltonian, so adjacent levels are separated
    by 2 hbar omega_s sin^2(theta_s): each step carries two quanta's worth.
    """
    ops = build_ladder(dim, omega_s, theta_s, hbar=hbar)
    scale = hbar * omega_s * math.sin(theta_s) ** 2
    return scale * (ops.lower @ ops.raise_ + ops.raise_ @ ops.lower)


def heisenberg_amplitude(spec: DipoleSpec, kp: KPoint, t: float,
                         volume: float = 1.0,
                         quad: QuadratureSettings = DEFAULT_QUADRATURE) -> complex:
    """Drive part of the mode's lowering operator at time t (a c-number).

    Only the negative charge drives the mode here, so the spec is rebuilt
    with mass_ratio 0 before integrating. The vacuum operator part is left
    to the ladder matrices.
    """
    t_eff = min(float(t), spec.t_stop)
    if t_eff <= 0.0 or spec.amp_minus == 0.0:
        return 0j
    electron_only = dataclasses.replace(spec, mass_ratio=0.0)
    _, i_vel = _point_integrals(electron_only, kp.k, kp.cos_theta, kp.phi, t_eff, quad)
    consts = spec.constants
    omega = consts.c * kp.k
    norm = math.sqrt(_SIXTEEN_PI3 * volume * consts.eps_v * consts.hbar * omega)
    return 1j * spec.charge_e * i_vel / norm
