"""Numerical verification of the support identities the build leans on.

Each check produces an IdentityReport with the computed sides, errors, and a
pass flag against its own tolerance. The odd-angular check exploits exact
floating-point parity: Gauss-Legendre nodes are exactly antisymmetric and
libm's sin is exactly odd, so accumulating mirror pairs yields a bitwise
zero, which the report demands (its tolerance is 0).
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .fields import electric_field, magnetic_field, scalar_potential, vector_potential
from .kspace import DEFAULT_QUADRATURE, KGrid, QuadratureSettings
from .trajectory import DipoleSpec

__all__ = [
    "IdentityReport",
    "DEFAULT_TOLERANCES",
    "sinc_integral_with_tail",
    "verify_odd_angular_integral",
    "verify_coulomb_recovery",
    "verify_vector_identities",
    "verify_field_consistency",
]

DEFAULT_TOLERANCES = {
    "odd_angular_integral": 0.0,
    "coulomb_recovery": 1e-4,
    "vector_identities": 1e-12,
    "field_consistency": 1e-3,
}


@dataclasses.dataclass(frozen=True)
class IdentityReport:
    """Outcome of one identity check. passed <=> rel_err <= tolerance."""

    name: str
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _report(name: str, lhs: float, rhs: float, rel_scale: float | None = None,
            tolerance: float | None = None) -> IdentityReport:
    abs_err = abs(lhs - rhs)
    scale = rel_scale if rel_scale is not None else max(abs(rhs), 1e-300)
    rel_err = abs_err / scale if abs_err != 0.0 else 0.0
    tol = DEFAULT_TOLERANCES[name] if tolerance is None else tolerance
    return IdentityReport(
        name=name, lhs=float(lhs), rhs=float(rhs), abs_err=float(abs_err),
        rel_err=float(rel_err), tolerance=float(tol), passed=bool(rel_err <= tol),
    )


def _legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _paired_odd_sum(values: np.ndarray, weights: np.ndarray) -> float:
    """Sum w_j f_j over antisymmetric nodes by accumulating mirror pairs.

    With f odd and the node set exactly antisymmetric, every pair sums to a
    bitwise zero before the weight multiplies it, so the total is exactly 0.
    """
    n = values.size
    half = n // 2
    left = values[:half]
    right = values[n - 1: n - 1 - half: -1]
    total = float(np.sum(weights[:half] * (left + right)))
    if n % 2 == 1:
        total += float(weights[half] * values[half])
    return total


def verify_odd_angular_integral(k_max: float, R: float, dt: float,
                                n_k: int = 64, n_u: int = 48,
                                split_polar: bool = False) -> IdentityReport:
    """Triple k-sum of (1/k) sin(ck dt) sin(k R u), which vanishes by parity.

    The reported magnitude is relative to the same sum with the odd angular
    factor replaced by its even cosine partner. With the symmetric polar rule
    the result is exactly zero; split_polar uses two unequal polar subpanels,
    which breaks the parity and leaves genuine quadrature residue that
    refinement shrinks.
    """
    if min(k_max, R, dt) <= 0.0:
        raise ValueError("k_max, R, dt must all be positive")
    k_nodes, k_w = _legendre(n_k)
    k = 0.5 * k_max * (k_nodes + 1.0)
    w_k = 0.5 * k_max * k_w
    if split_polar:
        xa, wa = _legendre(max(2, n_u // 2))
        xb, wb = _legendre(max(2, n_u // 2) + 3)
        u = np.concatenate([0.5 * (xa - 1.0), 0.5 * (xb + 1.0)])
        w_u = np.concatenate([0.5 * wa, 0.5 * wb])
    else:
        u, w_u = _legendre(n_u)
    radial = 2.0 * math.pi * w_k * k * np.sin(k * dt)
    odd_total = 0.0
    even_total = 0.0
    for i in range(k.size):
        args = k[i] * R * u
        if split_polar:
            ang_odd = float(np.sum(w_u * np.sin(args)))
        else:
            ang_odd = _paired_odd_sum(np.sin(args), w_u)
        ang_even = float(np.sum(w_u * np.cos(args)))
        odd_total += radial[i] * ang_odd
        even_total += radial[i] * ang_even
    scale = max(abs(even_total), 1e-300)
    return _report("odd_angular_integral", odd_total, 0.0, rel_scale=scale)


def sinc_integral_with_tail(x_max: float, points_per_panel: int = 8,
                            refine: int = 1) -> float:
    """Integral of sin(x)/x over [0, inf) as panel quadrature to x_max plus
    the leading asymptotic tail cos(x_max)/x_max."""
    if x_max <= 0.0:
        raise ValueError("x_max must be positive")
    n_panels = refine * max(1, math.ceil(x_max / math.pi))
    edges = np.linspace(0.0, x_max, n_panels + 1)
    nodes, weights = _legendre(points_per_panel)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    body = float(np.sum(w * np.sin(x) / x))
    return body + math.cos(x_max) / x_max


def verify_coulomb_recovery(R_plus: float, R_minus: float, k_max: float,
                            points_per_panel: int = 8, refine: int = 1,
                            charge_e: float = 1.0, eps_v: float = 1.0) -> IdentityReport:
    """Static-pair potential rebuilt from its radial k-integral.

    Each charge contributes (e/(2 pi^2 eps)) (1/R) times the sinc integral up
    to k_max R with the asymptotic tail; the closed form is the plain Coulomb
    pair. Equal radii cancel bitwise.
    """
    if min(R_plus, R_minus, k_max) <= 0.0:
        raise ValueError("R_plus, R_minus, k_max must all be positive")
    pref = charge_e / (2.0 * math.pi**2 * eps_v)
    term_plus = sinc_integral_with_tail(k_max * R_plus, points_per_panel, refine) / R_plus
    term_minus = sinc_integral_with_tail(k_max * R_minus, points_per_panel, refine) / R_minus
    value = pref * (term_plus - term_minus)
    closed = charge_e / (4.0 * math.pi * eps_v) * (1.0 / R_plus - 1.0 / R_minus)
    scale = abs(closed) if closed != 0.0 else charge_e / (4.0 * math.pi * eps_v * max(R_plus, R_minus))
    return _report("coulomb_recovery", value, closed, rel_scale=scale)


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _transverse_bilinear(k1: np.ndarray, k: np.ndarray, z: np.ndarray) -> float:
    """[(k1.z)k1 - z].[(k.z)k - z] + (k1.k) - (k1.z)(k.z)."""
    a = np.dot(k1, z) * k1 - z
    b = np.dot(k, z) * k - z
    return float(np.dot(a, b) + np.dot(k1, k) - np.dot(k1, z) * np.dot(k, z))


def verify_vector_identities(n_random: int, seed: int = 0) -> IdentityReport:
    """Random-draw check of the angular contraction pair and the two
    cross-product expansions.

    For unit khat and axis z: the bilinear at k1 = -khat vanishes, at
    k1 = +khat it equals 2[1 - (khat.z)^2]; plus the scalar and vector
    quadruple/triple product expansions. Reports the worst absolute error.
    """
    if n_random < 1:
        raise ValueError("need at least one draw")
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_lhs = 0.0
    worst_rhs = 0.0
    for _ in range(n_random):
        khat = _random_unit(rng)
        z = _random_unit(rng)
        cases = [
            (_transverse_bilinear(-khat, khat, z), 0.0),
            (_transverse_bilinear(khat, khat, z), 2.0 * (1.0 - np.dot(khat, z) ** 2)),
        ]
        a, b, c, d = (_random_unit(rng) for _ in range(4))
        cases.append((
            float(np.dot(np.cross(a, b), np.cross(c, d))),
            float(np.dot(a, c) * np.dot(b, d) - np.dot(a, d) * np.dot(b, c)),
        ))
        triple = np.cross(a, np.cross(b, c)) - (np.dot(a, c) * b - np.dot(a, b) * c)
        cases.append((float(np.max(np.abs(triple))), 0.0))
        for lhs, rhs in cases:
            err = abs(lhs - rhs)
            if err >= worst:
                worst, worst_lhs, worst_rhs = err, lhs, rhs
    return _report("vector_identities", worst_lhs, worst_rhs, rel_scale=1.0)


def verify_field_consistency(spec: DipoleSpec, grid: KGrid, sample_points,
                             quad: QuadratureSettings = DEFAULT_QUADRATURE,
                             h_r: float = 1e-3, h_t: float = 1e-3) -> IdentityReport:
    """Worst relative defect of E = -grad(phi) - dA/dt and B = curl(A).

    Derivatives come from central differences with steps h_r and h_t; errors
    are normalized by the largest direct field magnitude over the sample, so
    near-null points do not inflate the ratio. Sample points should be
    post-emission: during the pulse the reconstruction's bound part lives in
    the Coulomb pair and the mode sum alone cannot satisfy the pair exactly.
    """
    points = [(np.asarray(r, dtype=float), float(t)) for r, t in sample_points]
    if not points:
        raise ValueError("need at least one sample point")
    e_direct, e_fd, b_direct, b_fd = [], [], [], []
    for r, t in points:
        e_direct.append(electric_field(spec, grid, r, t, quad))
        b_direct.append(magnetic_field(spec, grid, r, t, quad))
        grad_phi = np.zeros(3)
        curl_a = np.zeros(3)
        for axis in range(3):
            step = np.zeros(3)
            step[axis] = h_r
            phi_hi = scalar_potential(spec, grid, r + step, t, quad)
            phi_lo = scalar_potential(spec, grid, r - step, t, quad)
            grad_phi[axis] = (phi_hi - phi_lo) / (2.0 * h_r)
            a_hi = vector_potential(spec, grid, r + step, t, quad)
            a_lo = vector_potential(spec, grid, r - step, t, quad)
            d_az = (a_hi[2] - a_lo[2]) / (2.0 * h_r)
            if axis == 0:
                curl_a[1] -= d_az
            elif axis == 1:
                curl_a[0] += d_az
        da_dt = (vector_potential(spec, grid, r, t + h_t, quad)
                 - vector_potential(spec, grid, r, t - h_t, quad)) / (2.0 * h_t)
        e_fd.append(-grad_phi - da_dt)
        b_fd.append(curl_a)
    e_scale = max(max(float(np.linalg.norm(v)) for v in e_direct), 1e-300)
    b_scale = max(max(float(np.linalg.norm(v)) for v in b_direct), 1e-300)
    worst = 0.0
    for direct, fd, scale in [(e_direct, e_fd, e_scale), (b_direct, b_fd, b_scale)]:
        for v_direct, v_fd in zip(direct, fd):
            worst = max(worst, float(np.max(np.abs(v_direct - v_fd))) / scale)
    return _report("field_consistency", worst, 0.0, rel_scale=1.0)
