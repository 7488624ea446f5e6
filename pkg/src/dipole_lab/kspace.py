"""Complex mode amplitudes of the dipole's potentials, one per wavevector.

Each amplitude is a time integral of a fast phase factor along the charge
worldlines over [0, min(t, t_stop)]. The integrals are evaluated on composite
Gauss-Legendre panels sized to a fraction of the shortest phase period
2*pi/(k*c + omega0*(1 + a*k) + k*|v_d|); a second pass with halved panels
provides the convergence estimate. Three amplitudes share the two phase
exponentials per node:

- the scalar-potential amplitude F, from the position bracket
  exp(+i k_z z_plus) - exp(-i k_z z_minus),
- the vector-potential amplitude (along zhat, since the relative motion is
  axial), from the velocity-weighted bracket,
- the CM-drift amplitude Vvec = v_d times the position-bracket integral with
  the vector prefactor.

check_separation verifies that F equals c khat . Avec plus the instantaneous
position-bracket boundary term plus c khat . Vvec. The boundary term is
evaluated at min(t, t_stop); for envelopes whose displacement returns to zero
continuously (raised cosine always, rectangular with whole-period t_stop) it
coincides with the printed static form and vanishes after emission. For a
rectangular envelope cut mid-cycle the displacement jumps at t_stop and the
post-emission identity genuinely misses the jump's boundary value; pick
t_stop a multiple of pi/omega0 if that matters.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import functools
import math
import os

import numpy as np

from .errors import QuadratureNotConverged, UnsupportedConfig
from .trajectory import (
    DipoleSpec,
    cm_trajectory,
    displacement_scalar,
    velocity_scalar,
)

__all__ = [
    "KPoint",
    "KGrid",
    "QuadratureSettings",
    "DEFAULT_QUADRATURE",
    "ModeAmplitude",
    "ModeAmplitudeGrid",
    "scalar_amplitude",
    "vector_amplitude",
    "velocity_amplitude",
    "mode_amplitude",
    "separation_static_term",
    "check_separation",
    "build_amplitude_grid",
    "amplitude_table_csv",
]

_SIXTEEN_PI3 = 16.0 * math.pi**3
_MAX_CHUNK_ELEMENTS = 6_000_000


@dataclasses.dataclass(frozen=True)
class KPoint:
    """One spherical k-space node: magnitude, cos(polar angle), azimuth, weight."""

    k: float
    cos_theta: float
    phi: float = 0.0
    weight: float = 1.0

    def __post_init__(self) -> None:
        if not self.k > 0.0:
            raise ValueError("k must be positive")
        if abs(self.cos_theta) > 1.0:
            raise ValueError("cos_theta must lie in [-1, 1]")
        if not self.weight > 0.0:
            raise ValueError("weight must be positive")
        object.__setattr__(self, "phi", float(self.phi) % (2.0 * math.pi))

    @property
    def sin_theta(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.cos_theta * self.cos_theta))

    def khat(self) -> np.ndarray:
        s = self.sin_theta
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), self.cos_theta])


@dataclasses.dataclass(frozen=True)
class QuadratureSettings:
    """Panel sizing and convergence policy for the oscillatory time integrals.

    panel_fraction is the largest panel width as a fraction of the shortest
    phase period. The refinement pass halves the panels; the two results must
    agree to rel_tol relative to the larger of the integral magnitude and
    norm_floor times an upper bound on the integrand's L1 norm (so that
    near-cancelling integrals are not held to an impossible relative bar).
    """

    panel_fraction: float = 0.125
    points_per_panel: int = 6
    rel_tol: float = 1e-6
    norm_floor: float = 1e-8

    def __post_init__(self) -> None:
        if not 0.0 < self.panel_fraction <= 0.5:
            raise ValueError("panel_fraction must lie in (0, 0.5]")
        if self.points_per_panel < 2:
            raise ValueError("points_per_panel must be at least 2")
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be positive")
        if not self.norm_floor > 0.0:
            raise ValueError("norm_floor must be positive")


DEFAULT_QUADRATURE = QuadratureSettings()


@functools.lru_cache(maxsize=32)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def _cis(arg: np.ndarray) -> np.ndarray:
    """exp(1j*arg) without the complex-argument intermediate."""
    out = np.empty(arg.shape, dtype=complex)
    np.cos(arg, out=out.real)
    np.sin(arg, out=out.imag)
    return out


def _phase_rate(spec: DipoleSpec, k: float) -> float:
    """Upper bound on |d(phase)/dtau| across the integrand's factors."""
    c = spec.constants.c
    drift = math.sqrt(sum(v * v for v in spec.cm_velocity))
    return k * c + spec.omega0 * (1.0 + spec.amp_minus * k) + k * drift


def _tau_nodes(spec: DipoleSpec, t_eff: float, k: float, quad: QuadratureSettings, refine: bool):
    """Composite GL nodes over [0, t_eff], segmented at envelope breakpoints."""
    fraction = quad.panel_fraction * (0.5 if refine else 1.0)
    max_width = fraction * 2.0 * math.pi / _phase_rate(spec, k)
    base_x, base_w = _gauss_legendre(quad.points_per_panel)
    knots = [b for b in spec.envelope.breakpoints(spec.t_stop) if b < t_eff]
    edges_all = sorted(set(knots + [t_eff]))
    xs, ws = [], []
    lo = 0.0
    for hi in edges_all:
        if hi <= lo:
            continue
        n_panels = max(1, math.ceil((hi - lo) / max_width))
        edges = np.linspace(lo, hi, n_panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1:] - edges[:-1])
        xs.append((mid[:, None] + half[:, None] * base_x[None, :]).ravel())
        ws.append((half[:, None] * base_w[None, :]).ravel())
        lo = hi
    return np.concatenate(xs), np.concatenate(ws)


def _integrals_level(spec, k, u_arr, phi_arr, t_eff, quad, refine):
    """Position- and velocity-bracket integrals at one refinement level.

    Returns complex arrays of shape (len(u_arr), len(phi_arr) or 1). The
    second axis collapses to 1 for axisymmetric specs, where the integrand
    has no azimuth dependence.
    """
    tau, w = _tau_nodes(spec, t_eff, k, quad, refine)
    z = displacement_scalar(spec, tau)
    v = velocity_scalar(spec, tau)
    mu = spec.mass_ratio
    c = spec.constants.c
    dz = spec.cm_position[2] + spec.cm_velocity[2] * tau
    base = (k * c) * tau
    wv = w * v
    axisym = spec.axisymmetric()
    phis = np.array([0.0]) if axisym else np.asarray(phi_arr, dtype=float)
    u_arr = np.asarray(u_arr, dtype=float)
    n_u = u_arr.size
    I_pos = np.empty((n_u, phis.size), dtype=complex)
    I_vel = np.empty((n_u, phis.size), dtype=complex)
    if not axisym:
        dx = spec.cm_position[0] + spec.cm_velocity[0] * tau
        dy = spec.cm_position[1] + spec.cm_velocity[1] * tau
        s_arr = np.sqrt(np.maximum(0.0, 1.0 - u_arr * u_arr))
    chunk = max(1, _MAX_CHUNK_ELEMENTS // max(1, tau.size))
    for j, phi in enumerate(phis):
        for a in range(0, n_u, chunk):
            b = min(a + chunk, n_u)
            u = u_arr[a:b, None]
            arg_plus = base[None, :] + (k * u) * (mu * z - dz)[None, :]
            arg_minus = base[None, :] - (k * u) * (z + dz)[None, :]
            if not axisym:
                trans = (k * s_arr[a:b, None]) * (math.cos(phi) * dx + math.sin(phi) * dy)[None, :]
                arg_plus -= trans
                arg_minus -= trans
            e_plus = _cis(arg_plus)
            e_minus = _cis(arg_minus)
            I_pos[a:b, j] = e_plus @ w - e_minus @ w
            I_vel[a:b, j] = -(mu * (e_plus @ wv) + e_minus @ wv)
    return I_pos, I_vel


def _integrals_checked(spec, k, u_arr, phi_arr, t_eff, quad):
    """Refined integrals with the two-level convergence check applied."""
    coarse = _integrals_level(spec, k, u_arr, phi_arr, t_eff, quad, refine=False)
    fine = _integrals_level(spec, k, u_arr, phi_arr, t_eff, quad, refine=True)
    # L1-norm bounds: |position bracket| <= 2, |velocity bracket| <= (1+mu)*vmax.
    vmax = spec.amp_minus * spec.omega0 * (1.0 + math.pi)  # generous slope bound
    floors = (2.0 * t_eff, (1.0 + spec.mass_ratio) * vmax * t_eff)
    names = ("position-bracket", "velocity-bracket")
    for lvl1, lvl2, floor, name in zip(coarse, fine, floors, names):
        err = float(np.max(np.abs(lvl2 - lvl1)))
        scale = max(float(np.max(np.abs(lvl2))), quad.norm_floor * floor)
        if err > quad.rel_tol * scale:
            raise QuadratureNotConverged(
                f"{name} integral at k={k:g}, t_eff={t_eff:g}: refinement moved the "
                f"result by {err:.3e} against scale {scale:.3e} (rel_tol {quad.rel_tol:g})"
            )
    return fine


@functools.lru_cache(maxsize=2048)
def _point_integrals(spec: DipoleSpec, k: float, u: float, phi: float, t_eff: float,
                     quad: QuadratureSettings):
    I_pos, I_vel = _integrals_checked(spec, k, (u,), (phi,), t_eff, quad)
    return complex(I_pos[0, 0]), complex(I_vel[0, 0])


def _pref_scalar(spec: DipoleSpec, k: float) -> complex:
    consts = spec.constants
    return 1j * spec.charge_e * consts.c / (_SIXTEEN_PI3 * consts.eps_v * k)


def _pref_vector(spec: DipoleSpec, k: float) -> complex:
    consts = spec.constants
    return 1j * spec.charge_e * consts.mu_v * consts.c / (_SIXTEEN_PI3 * k)


def _effective_time(spec: DipoleSpec, t: float) -> float:
    return min(float(t), spec.t_stop)


@dataclasses.dataclass(frozen=True, eq=False)
class ModeAmplitude:
    """Amplitude triple at one wavevector: scalar F, vector Avec, drift Vvec."""

    F: complex
    Avec: np.ndarray
    Vvec: np.ndarray


def scalar_amplitude(spec: DipoleSpec, kp: KPoint, t: float,
                     quad: QuadratureSettings = DEFAULT_QUADRATURE) -> complex:
    """Scalar-potential amplitude at kp, integrated over [0, min(t, t_stop)]."""
    t_eff = _effective_time(spec, t)
    if t_eff <= 0.0 or spec.amp_minus == 0.0:
        return 0j
    I_pos, _ = _point_integrals(spec, kp.k, kp.cos_theta, kp.phi, t_eff, quad)
    return _pref_scalar(spec, kp.k) * I_pos


def vector_amplitude(spec: DipoleSpec, kp: KPoint, t: float,
                     quad: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """Vector-potential amplitude at kp; along zhat since the motion is axial."""
    t_eff = _effective_time(spec, t)
    out = np.zeros(3, dtype=complex)
    if t_eff <= 0.0 or spec.amp_minus == 0.0:
        return out
    _, I_vel = _point_integrals(spec, kp.k, kp.cos_theta, kp.phi, t_eff, quad)
    out[2] = _pref_vector(spec, kp.k) * I_vel
    return out


def velocity_amplitude(spec: DipoleSpec, kp: KPoint, t: float,
                       quad: QuadratureSettings = DEFAULT_QUADRATURE) -> np.ndarray:
    """CM-drift amplitude: v_d times the position-bracket integral."""
    t_eff = _effective_time(spec, t)
    vd = np.asarray(spec.cm_velocity, dtype=float)
    if t_eff <= 0.0 or spec.amp_minus == 0.0 or not vd.any():
        return np.zeros(3, dtype=complex)
    I_pos, _ = _point_integrals(spec, kp.k, kp.cos_theta, kp.phi, t_eff, quad)
    return (_pref_vector(spec, kp.k) * I_pos) * vd


def mode_amplitude(spec: DipoleSpec, kp: KPoint, t: float,
                   quad: QuadratureSettings = DEFAULT_QUADRATURE) -> ModeAmplitude:
    """All three amplitudes from a single quadrature pass."""
    return ModeAmplitude(
        F=scalar_amplitude(spec, kp, t, quad),
        Avec=vector_amplitude(spec, kp, t, quad),
        Vvec=velocity_amplitude(spec, kp, t, quad),
    )


def separation_static_term(spec: DipoleSpec, kp: KPoint, t: float) -> complex:
    """Instantaneous position-bracket boundary term of the separation identity.

    Evaluated at t_eff = min(t, t_stop), where the integration by parts of the
    position-bracket integral leaves its boundary value.
    """
    t_eff = _effective_time(spec, t)
    if t_eff <= 0.0:
        return 0j
    consts = spec.constants
    k, u = kp.k, kp.cos_theta
    z = float(displacement_scalar(spec, t_eff))
    d = cm_trajectory(spec, t_eff)
    s = kp.sin_theta
    k_dot_d = k * (s * math.cos(kp.phi) * d[0] + s * math.sin(kp.phi) * d[1] + u * d[2])
    bracket = np.exp(1j * k * u * spec.mass_ratio * z) - np.exp(-1j * k * u * z)
    phase = np.exp(1j * (k * consts.c * t_eff - k_dot_d))
    return complex(spec.charge_e / (_SIXTEEN_PI3 * consts.eps_v * k * k) * phase * bracket)


def check_separation(spec: DipoleSpec, kp: KPoint, t: float,
                     quad: QuadratureSettings = DEFAULT_QUADRATURE) -> complex:
    """Residual of the scalar-amplitude separation identity at one wavevector.

    Returns F - (c khat . Avec + boundary term + c khat . Vvec); the magnitude
    should stay below rel_tol * (|F| + |boundary|).
    """
    c = spec.constants.c
    khat = kp.khat()
    F = scalar_amplitude(spec, kp, t, quad)
    Avec = vector_amplitude(spec, kp, t, quad)
    Vvec = velocity_amplitude(spec, kp, t, quad)
    static = separation_static_term(spec, kp, t)
    return F - (c * np.dot(khat, Avec) + static + c * np.dot(khat, Vvec))


@dataclasses.dataclass(frozen=True)
class KGrid:
    """Product quadrature grid over the k-space ball of radius k_max.

    Radial nodes are Gauss-Legendre on [k_min, k_max], either as one panel or
    as the composite panels given by radial_panels, a tuple of
    (upper_edge, node_count) pairs whose edges ascend from k_min to k_max and
    whose counts sum to n_k (composite panels concentrate nodes on the
    emission line, which plain GL cannot resolve during the pulse). Polar
    nodes are Gauss-Legendre in cos(theta); azimuthal nodes are uniform.
    narrow_band acknowledges a deliberately band-limited grid that would
    otherwise fail the k_max >= 20*omega0/c coverage check at table build.
    """

    n_k: int
    n_theta: int
    n_phi: int
    k_max: float
    k_min: float = 0.0
    taper_fraction: float = 0.1
    radial_panels: tuple = ()
    narrow_band: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "radial_panels",
            tuple((float(edge), int(count)) for edge, count in self.radial_panels),
        )
        if self.n_k < 2 or self.n_theta < 2 or self.n_phi < 1:
            raise ValueError("grid needs n_k >= 2, n_theta >= 2, n_phi >= 1")
        if not 0.0 <= self.k_min < self.k_max:
            raise ValueError("need 0 <= k_min < k_max")
        if not 0.0 <= self.taper_fraction < 1.0:
            raise ValueError("taper_fraction must lie in [0, 1)")
        if self.radial_panels:
            edges = [edge for edge, _ in self.radial_panels]
            counts = [count for _, count in self.radial_panels]
            if sorted(edges) != edges or edges[0] <= self.k_min or edges[-1] != self.k_max:
                raise ValueError("radial panel edges must ascend from k_min to k_max")
            if any(c < 2 for c in counts):
                raise ValueError("each radial panel needs at least 2 nodes")
            if sum(counts) != self.n_k:
                raise ValueError("radial panel node counts must sum to n_k")

    @classmethod
    def with_panels(cls, panels, n_theta: int, n_phi: int, k_min: float = 0.0, **kwargs):
        """Build a composite-radial grid from (upper_edge, node_count) pairs."""
        panels = tuple((float(edge), int(count)) for edge, count in panels)
        return cls(
            n_k=sum(count for _, count in panels),
            n_theta=n_theta,
            n_phi=n_phi,
            k_max=panels[-1][0],
            k_min=k_min,
            radial_panels=panels,
            **kwargs,
        )

    @functools.cached_property
    def radial(self):
        """(nodes, weights) of the radial rule on [k_min, k_max]."""
        panels = self.radial_panels or (((self.k_max), self.n_k),)
        nodes, weights = [], []
        lo = self.k_min
        for hi, count in panels:
            x, w = _gauss_legendre(count)
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (x + 1.0))
            weights.append(half * w)
            lo = hi
        return np.concatenate(nodes), np.concatenate(weights)

    @functools.cached_property
    def polar(self):
        """(cos(theta) nodes, weights) of the Gauss-Legendre polar rule."""
        return _gauss_legendre(self.n_theta)

    @functools.cached_property
    def phi_nodes(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi

    @property
    def phi_weight(self) -> float:
        return 2.0 * math.pi / self.n_phi

    @functools.cached_property
    def taper_weights(self) -> np.ndarray:
        """Cosine roll-off over the last taper_fraction of the radial range."""
        k_nodes = self.radial[0]
        if self.taper_fraction == 0.0:
            return np.ones_like(k_nodes)
        k_start = self.k_max - self.taper_fraction * (self.k_max - self.k_min)
        ramp = 0.5 * (1.0 + np.cos(np.pi * (k_nodes - k_start) / (self.k_max - k_start)))
        return np.where(k_nodes <= k_start, 1.0, ramp)

    @functools.cached_property
    def max_radial_spacing(self) -> float:
        return float(np.max(np.diff(self.radial[0])))

    @property
    def node_count(self) -> int:
        return self.n_k * self.n_theta * self.n_phi


@dataclasses.dataclass(frozen=True, eq=False)
class ModeAmplitudeGrid:
    """Amplitude tables on a KGrid at one effective time.

    F and Az have shape (n_k, n_theta, P) and Vvec (n_k, n_theta, P, 3),
    where P is 1 for axisymmetric specs (no azimuth dependence) and n_phi
    otherwise. Arrays are read-only; grids are cached and shared.
    """

    spec: DipoleSpec
    grid: KGrid
    t_eff: float
    quad: QuadratureSettings
    F: np.ndarray = dataclasses.field(repr=False)
    Az: np.ndarray = dataclasses.field(repr=False)
    Vvec: np.ndarray = dataclasses.field(repr=False)

    @property
    def phi_collapsed(self) -> bool:
        return self.F.shape[2] == 1


def _worker_count() -> int:
    env = os.environ.get("DIPOLE_LAB_THREADS")
    if env is not None:
        return max(1, int(env))
    return os.cpu_count() or 1


def build_amplitude_grid(spec: DipoleSpec, grid: KGrid, t: float,
                         quad: QuadratureSettings = DEFAULT_QUADRATURE) -> ModeAmplitudeGrid:
    """Evaluate the amplitude triple on every grid node at time t.

    Tables are cached on (spec, grid, min(t, t_stop), quad), so all
    post-emission times share one table. Raises UnsupportedConfig when the
    grid cannot cover the emission line (k_max < 20*omega0/c) unless the
    grid is flagged narrow_band.
    """
    c = spec.constants.c
    if grid.k_max < 20.0 * spec.omega0 / c and not grid.narrow_band:
        raise UnsupportedConfig(
            f"k_max={grid.k_max:g} < 20*omega0/c={20.0 * spec.omega0 / c:g}; "
            "set narrow_band=True on the grid if the band limit is intentional"
        )
    t_eff = max(_effective_time(spec, t), 0.0)
    return _build_grid_cached(spec, grid, t_eff, quad)


@functools.lru_cache(maxsize=8)
def _build_grid_cached(spec: DipoleSpec, grid: KGrid, t_eff: float,
                       quad: QuadratureSettings) -> ModeAmplitudeGrid:
    k_nodes = grid.radial[0]
    u_nodes = grid.polar[0]
    phis = grid.phi_nodes
    n_p = 1 if spec.axisymmetric() else grid.n_phi
    shape = (grid.n_k, grid.n_theta, n_p)
    F = np.zeros(shape, dtype=complex)
    Az = np.zeros(shape, dtype=complex)
    Vvec = np.zeros(shape + (3,), dtype=complex)
    if t_eff > 0.0 and spec.amp_minus > 0.0:
        vd = np.asarray(spec.cm_velocity, dtype=float)

        def fill_slice(i: int) -> None:
            k = float(k_nodes[i])
            I_pos, I_vel = _integrals_checked(spec, k, u_nodes, phis, t_eff, quad)
            F[i] = _pref_scalar(spec, k) * I_pos
            Az[i] = _pref_vector(spec, k) * I_vel
            Vvec[i] = (_pref_vector(spec, k) * I_pos)[..., None] * vd

        workers = _worker_count()
        if workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(fill_slice, range(grid.n_k)))
        else:
            for i in range(grid.n_k):
                fill_slice(i)
    for arr in (F, Az, Vvec):
        arr.setflags(write=False)
    return ModeAmplitudeGrid(spec=spec, grid=grid, t_eff=t_eff, quad=quad, F=F, Az=Az, Vvec=Vvec)


def amplitude_table_csv(amp: ModeAmplitudeGrid, path) -> None:
    """Dump the table as CSV rows k,cos_theta,phi,Re(F),Im(F),Re(Az),Im(Az).

    Rows run phi fastest, then cos_theta, then k, with 17 significant digits
    so binary64 values round-trip exactly.
    """
    k_nodes = amp.grid.radial[0]
    u_nodes = amp.grid.polar[0]
    phis = amp.grid.phi_nodes
    with open(path, "w", newline="\n") as fh:
        fh.write("k,cos_theta,phi,re_f,im_f,re_az,im_az\n")
        for i, k in enumerate(k_nodes):
            for j, u in enumerate(u_nodes):
                for m, phi in enumerate(phis):
                    p = 0 if amp.phi_collapsed else m
                    f = amp.F[i, j, p]
                    az = amp.Az[i, j, p]
                    fh.write(
                        f"{k:.17g},{u:.17g},{phi:.17g},"
                        f"{f.real:.17g},{f.imag:.17g},{az.real:.17g},{az.imag:.17g}\n"
                    )
