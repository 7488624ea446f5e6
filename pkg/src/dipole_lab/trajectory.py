"""Worldlines of a two-point-charge dipole with a finite emission window.

The negative charge (the light, electron-like one) is displaced by
z_minus(tau) * zhat from the center of mass and the positive charge by
-mass_ratio * z_minus(tau) * zhat, so the mass-weighted centroid never moves.
The displacement is a sinusoid under a rectangular or raised-cosine envelope,
switched on at tau = 0 and off at tau = t_stop. Everything downstream (mode
amplitudes, fields, observables) integrates over these worldlines.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = [
    "PhysicalConstants",
    "NATURAL_UNITS",
    "SI_UNITS",
    "constants_for",
    "Envelope",
    "DipoleSpec",
    "step_theta0",
    "charge_positions",
    "charge_velocities",
    "cm_trajectory",
    "lab_positions",
    "lab_velocities",
    "max_charge_speed",
    "ZHAT",
]

ZHAT = np.array([0.0, 0.0, 1.0])

_ENVELOPE_KINDS = ("rectangular", "raised_cosine")


@dataclasses.dataclass(frozen=True)
class PhysicalConstants:
    """Vacuum constants used by every module.

    Attributes
    ----------
    c : float
        Speed of light.
    eps_v : float
        Vacuum permittivity.
    mu_v : float
        Vacuum permeability.
    hbar : float
        Reduced Planck constant.
    """

    c: float
    eps_v: float
    mu_v: float
    hbar: float


NATURAL_UNITS = PhysicalConstants(c=1.0, eps_v=1.0, mu_v=1.0, hbar=1.0)

# CODATA 2018. c is exact by definition; eps0/mu0 are the recommended values.
SI_UNITS = PhysicalConstants(
    c=299792458.0,
    eps_v=8.8541878128e-12,
    mu_v=1.25663706212e-6,
    hbar=1.054571817e-34,
)


def constants_for(units_mode: str) -> PhysicalConstants:
    """Return the constant set for a units mode, one of 'natural' or 'si'."""
    mode = units_mode.lower()
    if mode == "natural":
        return NATURAL_UNITS
    if mode == "si":
        return SI_UNITS
    raise ValueError(f"unknown units_mode {units_mode!r}; expected 'natural' or 'si'")


@dataclasses.dataclass(frozen=True)
class Envelope:
    """Dimensionless modulation of the dipole displacement on (0, t_stop).

    'rectangular' is 1 inside the window (with the velocity jumps that
    implies at both ends); 'raised_cosine' ramps from exactly 0 at tau = 0
    up over ramp_fraction * t_stop with a half-cosine, holds at 1, and ramps
    back to exactly 0 at t_stop, so displacement and velocity are continuous.
    """

    kind: str = "raised_cosine"
    ramp_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.kind not in _ENVELOPE_KINDS:
            raise ValueError(f"envelope kind {self.kind!r} not in {_ENVELOPE_KINDS}")
        if self.kind == "raised_cosine" and not 0.0 < self.ramp_fraction <= 0.5:
            raise ValueError("ramp_fraction must lie in (0, 0.5]")

    def value(self, tau: np.ndarray, t_stop: float) -> np.ndarray:
        """Envelope value, exactly zero outside the open window (0, t_stop)."""
        tau = np.asarray(tau, dtype=float)
        inside = (tau > 0.0) & (tau < t_stop)
        if self.kind == "rectangular":
            return np.where(inside, 1.0, 0.0)
        ramp = self.ramp_fraction * t_stop
        out = np.ones_like(tau)
        up = tau < ramp
        down = tau > t_stop - ramp
        out = np.where(up, 0.5 * (1.0 - np.cos(np.pi * tau / ramp)), out)
        out = np.where(down, 0.5 * (1.0 - np.cos(np.pi * (t_stop - tau) / ramp)), out)
        return np.where(inside, out, 0.0)

    def slope(self, tau: np.ndarray, t_stop: float) -> np.ndarray:
        """Analytic d(value)/dtau, exactly zero outside (0, t_stop)."""
        tau = np.asarray(tau, dtype=float)
        inside = (tau > 0.0) & (tau < t_stop)
        if self.kind == "rectangular":
            return np.zeros_like(tau)
        ramp = self.ramp_fraction * t_stop
        rate = 0.5 * np.pi / ramp
        out = np.zeros_like(tau)
        up = tau < ramp
        down = tau > t_stop - ramp
        out = np.where(up, rate * np.sin(np.pi * tau / ramp), out)
        out = np.where(down, -rate * np.sin(np.pi * (t_stop - tau) / ramp), out)
        return np.where(inside, out, 0.0)

    def breakpoints(self, t_stop: float) -> tuple[float, ...]:
        """Times in [0, t_stop] where the envelope is not smooth."""
        if self.kind == "rectangular":
            return (0.0, t_stop)
        ramp = self.ramp_fraction * t_stop
        if 2.0 * ramp >= t_stop:
            return (0.0, 0.5 * t_stop, t_stop)
        return (0.0, ramp, t_stop - ramp, t_stop)


@dataclasses.dataclass(frozen=True)
class DipoleSpec:
    """Parametric dipole: charge, displacement amplitude, frequency, window.

    The mass_ratio range is [0, 1]; 0 means an infinitely heavy positive
    charge that never moves (the one-moving-charge limit used to isolate
    the light charge's contribution), 1 a symmetric pair.
    """

    amp_minus: float
    omega0: float
    t_stop: float
    charge_e: float = 1.0
    mass_ratio: float = 1.0 / 1836.0
    envelope: Envelope = Envelope()
    cm_position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    cm_velocity: tuple[float, float, float] = (0.0, 0.0, 0.0)
    units_mode: str = "natural"

    def __post_init__(self) -> None:
        object.__setattr__(self, "cm_position", tuple(float(x) for x in self.cm_position))
        object.__setattr__(self, "cm_velocity", tuple(float(x) for x in self.cm_velocity))
        if len(self.cm_position) != 3 or len(self.cm_velocity) != 3:
            raise ValueError("cm_position and cm_velocity must be 3-vectors")
        if not self.t_stop > 0.0:
            raise ValueError("t_stop must be positive")
        if not self.omega0 > 0.0:
            raise ValueError("omega0 must be positive")
        if self.amp_minus < 0.0:
            raise ValueError("amp_minus must be nonnegative")
        if not 0.0 <= self.mass_ratio <= 1.0:
            raise ValueError("mass_ratio must lie in [0, 1]")
        constants_for(self.units_mode)  # validates the mode string

    @property
    def constants(self) -> PhysicalConstants:
        return constants_for(self.units_mode)

    def axisymmetric(self) -> bool:
        """True when the CM offset and drift have no transverse component."""
        return (
            self.cm_position[0] == 0.0
            and self.cm_position[1] == 0.0
            and self.cm_velocity[0] == 0.0
            and self.cm_velocity[1] == 0.0
        )


def step_theta0(tau):
    """Causal switch: 0 for tau <= 0, 1 for tau > 0. Vectorized."""
    arr = np.asarray(tau, dtype=float)
    out = np.where(arr > 0.0, 1.0, 0.0)
    return float(out) if out.ndim == 0 else out


def displacement_scalar(spec: DipoleSpec, tau) -> np.ndarray:
    """Signed displacement z_minus(tau) of the negative charge along zhat."""
    tau = np.asarray(tau, dtype=float)
    env = spec.envelope.value(tau, spec.t_stop)
    return spec.amp_minus * env * np.sin(spec.omega0 * tau)


def velocity_scalar(spec: DipoleSpec, tau) -> np.ndarray:
    """Analytic d(z_minus)/dtau including the envelope slope term."""
    tau = np.asarray(tau, dtype=float)
    env = spec.envelope.value(tau, spec.t_stop)
    slope = spec.envelope.slope(tau, spec.t_stop)
    phase = spec.omega0 * tau
    return spec.amp_minus * (slope * np.sin(phase) + env * spec.omega0 * np.cos(phase))


def _along_z(scalar: np.ndarray) -> np.ndarray:
    return np.multiply.outer(np.asarray(scalar, dtype=float), ZHAT)


def charge_positions(spec: DipoleSpec, tau):
    """Displacement 3-vectors (zplus, zminus) of the two charges.

    zminus is the negative charge's displacement from the center of mass;
    zplus = mass_ratio * zminus is the positive charge's, which physically
    sits at -zplus so the mass-weighted centroid stays fixed. Both vanish
    outside the emission window.
    """
    zminus = _along_z(displacement_scalar(spec, tau))
    return spec.mass_ratio * zminus, zminus


def charge_velocities(spec: DipoleSpec, tau):
    """Analytic time derivatives (vplus, vminus) of charge_positions."""
    vminus = _along_z(velocity_scalar(spec, tau))
    return spec.mass_ratio * vminus, vminus


def cm_trajectory(spec: DipoleSpec, tau) -> np.ndarray:
    """Center-of-mass position at tau (uniform drift for all times)."""
    tau = np.asarray(tau, dtype=float)
    pos = np.asarray(spec.cm_position)
    vel = np.asarray(spec.cm_velocity)
    return pos + np.multiply.outer(tau, vel)


def lab_positions(spec: DipoleSpec, tau):
    """Absolute positions (r_plus, r_minus) of the charges in the lab frame."""
    cm = cm_trajectory(spec, tau)
    zplus, zminus = charge_positions(spec, tau)
    return cm - zplus, cm + zminus


def lab_velocities(spec: DipoleSpec, tau):
    """Absolute velocities (v_plus, v_minus) of the charges in the lab frame."""
    vel = np.asarray(spec.cm_velocity)
    vplus, vminus = charge_velocities(spec, tau)
    return vel - vplus, vel + vminus


def max_charge_speed(spec: DipoleSpec, n_samples: int = 8192) -> float:
    """Largest lab-frame charge speed over a dense scan of the window.

    The relative velocity peaks inside (0, t_stop); outside the window both
    charges move at the CM drift speed, which is included in the scan.
    """
    tau = np.linspace(0.0, spec.t_stop, n_samples)
    vplus, vminus = lab_velocities(spec, tau)
    speeds = np.sqrt(np.sum(vplus * vplus, axis=-1))
    speeds = np.maximum(speeds, np.sqrt(np.sum(vminus * vminus, axis=-1)))
    drift = math.sqrt(sum(v * v for v in spec.cm_velocity))
    return max(float(speeds.max()), drift)
