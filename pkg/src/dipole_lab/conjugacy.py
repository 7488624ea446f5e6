"""Canonical coordinates per mode and the Hamilton-equation checks.

After the pulse ends the mode amplitude freezes, so q and p built from the
amplitude with harmonic phases e^{-i omega t} evolve exactly like a unit
oscillator of mass m. Both constructions pair a complex number with its
conjugate, so their imaginary parts cancel identically; we keep the real
part and the cancellation is asserted in tests.

The mass m and quantization volume V are free positive scale constants.
q scales as 1/sqrt(m) and p as sqrt(m), leaving the residuals of Hamilton's
equations invariant; that covariance is itself tested.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import PreEmissionTime
from .kspace import DEFAULT_QUADRATURE, KPoint, QuadratureSettings, vector_amplitude
from .trajectory import DipoleSpec

__all__ = ["CanonicalPair", "canonical_pair", "hamilton_residuals"]

_THIRTYTWO_PI3 = 32.0 * math.pi**3


@dataclasses.dataclass(frozen=True)
class CanonicalPair:
    """Real canonical coordinate and momentum of one mode, with its scales."""

    q: float
    p: float
    m: float
    omega: float


def _mode_phase_pair(spec: DipoleSpec, kp: KPoint, t: float, m: float, volume: float,
                     quad: QuadratureSettings):
    consts = spec.constants
    omega = consts.c * kp.k
    a_z = vector_amplitude(spec, kp, t, quad)[2]
    rotating = a_z * np.exp(-1j * omega * t)
    c_q = math.sqrt(_THIRTYTWO_PI3 * consts.eps_v / (m * volume))
    c_p = math.sqrt(_THIRTYTWO_PI3 * consts.eps_v * m / volume)
    q = c_q * (rotating + rotating.conjugate())
    p = (-1j * omega * c_p) * (rotating - rotating.conjugate())
    return q, p, omega


def canonical_pair(spec: DipoleSpec, kp: KPoint, t: float,
                   m: float = 1.0, volume: float = 1.0,
                   quad: QuadratureSettings = DEFAULT_QUADRATURE) -> CanonicalPair:
    """Canonical (q, p) of the mode at kp for post-emission time t.

    q = C_q (A e^{-i omega t} + conj), p = -i omega C_p (A e^{-i omega t} - conj)
    with C_q = sqrt(32 pi^3 eps/(m V)) and C_p = sqrt(32 pi^3 eps m/V). Raises
    PreEmissionTime for t <= t_stop, where the amplitude still depends on t
    and the pair is not conjugate.
    """
    if t <= spec.t_stop:
        raise PreEmissionTime(
            f"canonical variables are defined for t > t_stop={spec.t_stop:g}, got t={t:g}"
        )
    q, p, omega = _mode_phase_pair(spec, kp, t, m, volume, quad)
    return CanonicalPair(q=float(q.real), p=float(p.real), m=float(m), omega=float(omega))


def hamilton_residuals(spec: DipoleSpec, kp: KPoint, t: float, h: float,
                       m: float = 1.0, volume: float = 1.0,
                       quad: QuadratureSettings = DEFAULT_QUADRATURE,
                       eps: float = 1e-30):
    """Relative residuals (r1, r2) of qdot = p/m and pdot = -m omega^2 q.

    Time derivatives come from central differences at steps h and h/2 with
    one Richardson extrapolation, so the leading h^2 error cancels. Residuals
    are normalized by the oscillator scale (omega times the phase-space
    radius), not by the pointwise right-hand side: the rhs passes through
    zero twice per cycle and a pointwise quotient would blow up there. An
    eps floor keeps the amp=0 case at 0, not 0/0.
    """
    if not h > 0.0:
        raise ValueError("step h must be positive")
    if t - 2.0 * h <= spec.t_stop:
        raise PreEmissionTime(
            f"need t - 2h > t_stop={spec.t_stop:g} so all stencil points are "
            f"post-emission; got t={t:g}, h={h:g}"
        )

    def pair(at: float) -> CanonicalPair:
        return canonical_pair(spec, kp, at, m, volume, quad)

    center = pair(t)

    def richardson(values: str) -> float:
        def diff(step: float) -> float:
            hi = getattr(pair(t + step), values)
            lo = getattr(pair(t - step), values)
            return (hi - lo) / (2.0 * step)

        return (4.0 * diff(0.5 * h) - diff(h)) / 3.0

    q_dot = richardson("q")
    p_dot = richardson("p")
    rhs1 = center.p / m
    rhs2 = -m * center.omega**2 * center.q
    radius = math.hypot(center.q, center.p / (m * center.omega))
    r1 = abs(q_dot - rhs1) / max(center.omega * radius, eps)
    r2 = abs(p_dot - rhs2) / max(m * center.omega**2 * radius, eps)
    return r1, r2
