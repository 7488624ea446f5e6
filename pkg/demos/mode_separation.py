"""The scalar amplitude splits into transverse, static, and drift parts.

Checks the splitting at a few wavevectors, then shows the static part alone
rebuilding the Coulomb potential of the frozen pair from its radial
k-integral, with the sinc tail handled analytically.
"""

import math

from dipole_lab import (
    DipoleSpec,
    KPoint,
    check_separation,
    scalar_amplitude,
    separation_static_term,
    sinc_integral_with_tail,
    verify_coulomb_recovery,
)

spec = DipoleSpec(amp_minus=0.01, omega0=1.0, t_stop=20.0 * math.pi)

print("separation residual F - (c khat.A + static + c khat.V):")
for k, u, t_frac in [(0.7, 0.6, 0.4), (1.0, 0.3, 0.9), (2.5, -0.8, 1.2), (5.0, 0.15, 0.6)]:
    kp = KPoint(k=k, cos_theta=u)
    t = t_frac * spec.t_stop
    residual = abs(check_separation(spec, kp, t))
    scale = abs(scalar_amplitude(spec, kp, t)) + abs(separation_static_term(spec, kp, t))
    print(f"  k={k:4.1f} cos(theta)={u:5.2f} t={t_frac:.1f}*t_stop:"
          f"  |residual|/scale = {residual / scale:.2e}")

print("\nsin(x)/x integral against its pi/2 limit:")
for x_max in (20.0, 200.0, 2000.0):
    value = sinc_integral_with_tail(x_max)
    print(f"  x_max={x_max:7.0f}: {value:.10f}  (error {abs(value - math.pi / 2):.2e})")

report = verify_coulomb_recovery(R_plus=2.0, R_minus=1.0, k_max=100.0)
print(f"\nCoulomb pair from the k-integral: {report.lhs:.8e}")
print(f"closed form e/(4 pi eps) (1/R+ - 1/R-): {report.rhs:.8e}")
print(f"relative error {report.rel_err:.2e} (tolerance {report.tolerance:g})")
