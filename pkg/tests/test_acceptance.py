"""Acceptance gate: fourteen end-to-end checks, one verdict line apiece.

Run with `pytest -s tests/test_acceptance.py` to see the verdict lines as
they happen; without -s they appear for failing checks only. Frozen
reference values and grid choices are explained next to each check.
"""

import math
import subprocess
import sys
import time

import numpy as np
from scipy.stats import chi2 as chi2_dist

import dataclasses

from dipole_lab import (
    DEFAULT_QUADRATURE,
    KPoint,
    ModeAmplitudeGrid,
    angular_density,
    build_amplitude_grid,
    canonical_pair,
    check_separation,
    commutator_check,
    build_ladder,
    hamiltonian_exact,
    hamiltonian_standard,
    heisenberg_amplitude,
    mode_hamiltonian,
    momentum_exact,
    retarded_potential_oracle,
    sample_emission_directions,
    scalar_amplitude,
    scalar_potential,
    separation_static_term,
    sinc_integral_with_tail,
    stimulated_hamiltonian,
    vector_amplitude,
    vector_potential,
    verify_coulomb_recovery,
    verify_field_consistency,
)


def verdict(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def sin2_fit(spectrum):
    """Least-squares scale of A sin^2(theta) over the populated bins."""
    filled = spectrum.solid_angle > 0.0
    sin2 = np.sin(spectrum.theta_bins) ** 2
    scale = float(np.sum(spectrum.density[filled] * sin2[filled])
                  / np.sum(sin2[filled] ** 2))
    return filled, sin2, scale


def test_01_angular_law(spec, grid_main, grid_polar_fine, t_after):
    t0 = time.perf_counter()
    amp = build_amplitude_grid(spec, grid_main, spec.t_stop)
    angular_density(amp, spec.t_stop, 24)
    elapsed = time.perf_counter() - t0
    # the fit itself runs on the polar-fine table: binned density accuracy
    # is limited by node placement inside the bins, not by the physics
    fine = build_amplitude_grid(spec, grid_polar_fine, t_after)
    spectrum = angular_density(fine, t_after, 36)
    filled, sin2, scale = sin2_fit(spectrum)
    sup_dev = float(np.max(np.abs(spectrum.density[filled] - scale * sin2[filled]))) / scale
    # the axis sample has to sit well inside 5 degrees: averaging the whole
    # 5-degree cap gives ~theta^2/2 ~ 4e-3 of the equator under the exact
    # sin^2 law itself. 128 bins put the first populated bin at 0.7 degrees.
    narrow = angular_density(fine, t_after, 128)
    pop = narrow.solid_angle > 0.0
    first = int(np.argmax(pop & (narrow.theta_bins < math.radians(5.0))))
    equator = float(np.interp(0.5 * math.pi, narrow.theta_bins[pop], narrow.density[pop]))
    axis_ratio = narrow.density[first] / equator
    ok = elapsed < 60.0 and sup_dev < 0.01 and axis_ratio < 1e-3
    verdict("01 angular sin^2 law", ok,
            f"96x48x32 pattern in {elapsed:.1f}s (<60s), sup dev {sup_dev:.2e} (<1e-2), "
            f"axis/equator {axis_ratio:.2e} (<1e-3)")


def test_02_half_power_ratio(amp_polar_fine, t_after):
    # no uniform binning centers both pi/4 and pi/2, so interpolate the
    # 128-bin density linearly at the two angles
    spectrum = angular_density(amp_polar_fine, t_after, 128)
    filled = spectrum.solid_angle > 0.0
    theta = spectrum.theta_bins[filled]
    dens = spectrum.density[filled]
    quarter = float(np.interp(0.25 * math.pi, theta, dens))
    half = float(np.interp(0.5 * math.pi, theta, dens))
    ratio = quarter / half
    ok = abs(ratio - 0.5) < 0.005
    verdict("02 half-power ratio", ok, f"density(45)/density(90) = {ratio:.5f} (0.500 +- 0.005)")


def test_03_zero_net_momentum(spec, spec_sym, grid_main, t_after):
    # the equal-mass pair has exact mirror symmetry in cos(theta); the
    # physical mass split (1/1836) leaves a small genuine asymmetry in the
    # plane-wave brackets, reported here but held to a looser, honest bar
    amp_sym = build_amplitude_grid(spec_sym, grid_main, t_after)
    g_sym = momentum_exact(amp_sym, t_after)
    h_sym = hamiltonian_exact(amp_sym, t_after)
    c = spec_sym.constants.c
    ratio_sym = float(np.linalg.norm(g_sym)) * c / h_sym
    amp_phys = build_amplitude_grid(spec, grid_main, t_after)
    ratio_phys = float(np.linalg.norm(momentum_exact(amp_phys, t_after))) * c \
        / hamiltonian_exact(amp_phys, t_after)
    ok = ratio_sym < 1e-8 and ratio_phys < 1e-3
    verdict("03 zero net momentum", ok,
            f"|G|c/H = {ratio_sym:.2e} (<1e-8, equal masses); "
            f"physical mass split gives {ratio_phys:.2e}")


def test_04_isotropic_amplitude_ratio(spec, grid_main, t_after):
    # a hand-built table with |A| = 1 in every direction: the energy ratio
    # collapses to the angular average of sin^2, which is 2/3
    t_eff = spec.t_stop
    shape = (grid_main.n_k, grid_main.n_theta, 1)
    flat = ModeAmplitudeGrid(
        spec=spec, grid=grid_main, t_eff=t_eff, quad=DEFAULT_QUADRATURE,
        F=np.zeros(shape, dtype=complex),
        Az=np.ones(shape, dtype=complex),
        Vvec=np.zeros(shape + (3,), dtype=complex),
    )
    ratio = hamiltonian_exact(flat, t_after) / hamiltonian_standard(flat, t_after)
    dev = abs(ratio - 2.0 / 3.0)
    amp = build_amplitude_grid(spec, grid_main, t_after)
    physical = hamiltonian_exact(amp, t_after) / hamiltonian_standard(amp, t_after)
    ok = dev < 1e-3
    verdict("04 isotropic amplitude ratio", ok,
            f"flat |A|: ratio - 2/3 = {dev:.2e} (<1e-3); "
            f"physical table sits at {abs(physical - 2.0 / 3.0):.2e}")


# Frozen sample for the oracle equivalence sweep: positions across all
# octants, radii 6.7 to 15.3, observation delays chosen off the structural
# nulls (the retarded carrier's zero crossings and the equatorial node of
# the scalar potential), where a relative comparison stops meaning anything.
ORACLE_POINTS = [
    ((11.0, 0.0, 4.0), 2.0), ((8.0, -6.0, 3.0), 1.0), ((0.0, 12.0, -5.0), 4.0),
    ((-9.0, 3.0, 7.0), 3.0), ((6.0, 0.0, -3.0), 1.5), ((-7.0, -8.0, 2.0), 2.2),
    ((10.0, 5.0, -6.0), 3.5), ((-12.0, 0.0, 5.0), 4.2), ((4.0, -9.0, -7.0), 3.44),
    ((12.0, 2.0, 4.0), 4.17), ((0.0, -8.0, 6.0), 2.0), ((7.0, 7.0, 7.0), 3.0),
    ((-5.0, 9.0, -6.0), 3.26), ((9.0, -4.0, 8.0), 4.0), ((-10.0, -6.0, -4.0), 2.0),
    ((12.0, -3.0, 3.0), 4.09), ((-6.0, 9.0, 5.0), 1.5), ((5.0, 13.0, -2.0), 5.43),
    ((-8.0, -2.0, -9.0), 3.0), ((10.0, 0.0, 10.0), 2.5),
]


def test_05_oracle_equivalence(spec, grid_oracle):
    worst = 0.0
    for (x, y, z), dt in ORACLE_POINTS:
        r = np.array([x, y, z])
        t = spec.t_stop + dt
        phi_k = scalar_potential(spec, grid_oracle, r, t)
        a_k = vector_potential(spec, grid_oracle, r, t)
        phi_o, a_o = retarded_potential_oracle(spec, r, t)
        worst = max(worst,
                    abs(phi_k - phi_o) / abs(phi_o),
                    float(np.linalg.norm(a_k - a_o) / np.linalg.norm(a_o)))
    ok = worst < 1e-3
    verdict("05 retarded-oracle equivalence", ok,
            f"20 points, worst rel err {worst:.2e} (<1e-3)")


def test_06_field_consistency(spec, grid_main, t_after):
    points = [((1.5, 0.0, 0.3), t_after), ((-0.8, 0.9, 0.4), t_after),
              ((0.3, -0.5, 1.1), t_after)]
    report = verify_field_consistency(spec, grid_main, points)
    ok = report.passed and report.rel_err < 1e-3
    verdict("06 field consistency", ok,
            f"grad/curl vs direct fields, worst rel err {report.rel_err:.2e} (<1e-3)")


def test_07_separation_identity(spec):
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        k = 0.1 + 7.9 * rng.random()
        u = float(rng.choice([-1.0, 1.0])) * (0.01 + 0.98 * rng.random())
        kp = KPoint(k=k, cos_theta=u, phi=2.0 * math.pi * rng.random())
        t = spec.t_stop * (0.05 + 1.35 * rng.random())
        residual = abs(check_separation(spec, kp, t))
        scale = abs(scalar_amplitude(spec, kp, t)) + abs(separation_static_term(spec, kp, t))
        worst = max(worst, residual / scale)
    coulomb = verify_coulomb_recovery(2.0, 1.0, 100.0)
    sinc_err = abs(sinc_integral_with_tail(200.0) - 0.5 * math.pi) / (0.5 * math.pi)
    ok = worst < 1e-6 and coulomb.rel_err < 1e-4 and sinc_err < 1e-4
    verdict("07 separation identity", ok,
            f"100-point residual {worst:.2e} (<1e-6), Coulomb recovery "
            f"{coulomb.rel_err:.2e} (<1e-4), sinc limit {sinc_err:.2e} (<1e-4)")


def test_08_canonical_conjugacy(spec):
    from dipole_lab import hamilton_residuals

    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        k = 0.3 + 4.7 * rng.random()
        kp = KPoint(k=k, cos_theta=-0.95 + 1.9 * rng.random())
        h = 5e-3 * 2.0 * math.pi / k
        t = spec.t_stop + 2.0 * h + 0.5 + 5.5 * rng.random()
        r1, r2 = hamilton_residuals(spec, kp, t, h)
        worst = max(worst, r1, r2)
    # convergence order of the bare central difference: halving h must
    # shrink the defect against the oscillator's exact rhs by about 4
    kp = KPoint(k=1.1, cos_theta=0.4)
    t = 2.137 * spec.t_stop
    m = 1.0
    center = canonical_pair(spec, kp, t, m=m)

    def bare_defects(h):
        hi = canonical_pair(spec, kp, t + h, m=m)
        lo = canonical_pair(spec, kp, t - h, m=m)
        dq = abs((hi.q - lo.q) / (2 * h) - center.p / m)
        dp = abs((hi.p - lo.p) / (2 * h) + m * center.omega**2 * center.q)
        return dq, dp

    h0 = 5e-3 * 2.0 * math.pi / kp.k
    dq1, dp1 = bare_defects(h0)
    dq2, dp2 = bare_defects(0.5 * h0)
    ratio_q, ratio_p = dq1 / dq2, dp1 / dp2
    orders_ok = 3.5 < ratio_q < 4.5 and 3.5 < ratio_p < 4.5
    ok = worst < 1e-6 and orders_ok
    verdict("08 canonical conjugacy", ok,
            f"50-point Hamilton residual {worst:.2e} (<1e-6), h-halving defect "
            f"ratios {ratio_q:.2f}/{ratio_p:.2f} (expect ~4)")


def test_09_ladder_algebra():
    worst_restricted = 0.0
    defects_exact = True
    self_comm_zero = True
    for dim in (2, 4, 8, 16, 32):
        ops = build_ladder(dim, omega=1.0, theta=0.4)
        restricted, top = commutator_check(ops)
        worst_restricted = max(worst_restricted, restricted)
        defects_exact &= top == float(dim)
        lower, upper = ops.lower, ops.raise_
        self_comm_zero &= bool(np.all(lower @ lower - lower @ lower == 0.0))
        self_comm_zero &= bool(np.all(upper @ upper - upper @ upper == 0.0))
    ok = worst_restricted == 0.0 and defects_exact and self_comm_zero
    verdict("09 ladder algebra", ok,
            f"[a,a+]=I below the edge exactly (worst {worst_restricted:.1e}), "
            f"top defect = dim, [a,a]=[a+,a+]=0 for dims 2..32")


def test_10_mode_spectrum():
    dim, omega, theta, hbar = 8, 1.3, 0.9, 1.0
    ops = build_ladder(dim, omega=omega, theta=theta, hbar=hbar)
    h = mode_hamiltonian(ops)
    scale = hbar * omega * math.sin(theta) ** 2
    # reliable subspace: every level but the truncation edge; the defective
    # top entry lands mid-spectrum after sorting, so compare the diagonal
    levels = np.diag(h)[: dim - 1]
    expect = scale * (np.arange(dim - 1) + 0.5)
    worst = float(np.max(np.abs(levels - expect) / expect))
    zero_op = np.all(mode_hamiltonian(build_ladder(dim, omega, 0.0)) == 0.0)
    ok = worst < 1e-12 and bool(zero_op)
    verdict("10 mode spectrum", ok,
            f"levels = scale*(n+1/2) to {worst:.1e} (<1e-12), theta=0 gives the zero operator")


def test_11_stimulated_spacing():
    dim, omega_s, theta_s = 12, 1.7, 0.8
    h_se = stimulated_hamiltonian(omega_s, theta_s, dim)
    spacing = np.diff(np.diag(h_se)[: dim - 1])
    step = 2.0 * omega_s * math.sin(theta_s) ** 2
    worst = float(np.max(np.abs(spacing - step) / step))
    ok = worst < 1e-12
    verdict("11 stimulated-emission spacing", ok,
            f"level spacing = 2*hbar*omega*sin^2(theta) to {worst:.1e} (<1e-12): "
            f"each step carries two quanta's worth")


def test_12_heisenberg_amplitude_map(spec):
    electron_only = dataclasses.replace(spec, mass_ratio=0.0)
    worst = 0.0
    for kp in (KPoint(k=1.0, cos_theta=0.5, phi=0.3),
               KPoint(k=2.2, cos_theta=-0.7, phi=0.0)):
        t = spec.t_stop + 1.0
        alpha = heisenberg_amplitude(spec, kp, t)
        az = vector_amplitude(electron_only, kp, t)[2]
        target = math.sqrt(16.0 * math.pi**3 * kp.k) * az
        worst = max(worst, abs(alpha - target) / abs(target))
    ok = worst < 1e-8
    verdict("12 Heisenberg amplitude map", ok,
            f"drive integral vs scaled electron-only amplitude, rel err {worst:.1e} (<1e-8)")


def test_13_direction_sampler():
    rng = np.random.default_rng(0)
    theta, _, _ = sample_emission_directions(rng, 1_000_000)
    u = np.cos(theta)
    mean_dev = abs(float(np.mean(u**2)) - 0.2)
    # Var(u^2) = 3/35 - 1/25 under (3/4)(1-u^2); three standard errors at
    # one million draws is 6.4e-4
    three_sigma = 3.0 * math.sqrt(3.0 / 35.0 - 0.04) / 1000.0
    edges = np.linspace(-1.0, 1.0, 51)
    observed, _ = np.histogram(u, bins=edges)
    cdf = (2.0 + 3.0 * edges - edges**3) / 4.0
    expected = u.size * np.diff(cdf)
    stat = float(np.sum((observed - expected) ** 2 / expected))
    p_value = float(chi2_dist.sf(stat, df=49))
    ok = mean_dev < three_sigma and p_value > 0.01
    verdict("13 direction sampler", ok,
            f"<cos^2> dev {mean_dev:.2e} (<{three_sigma:.2e}), "
            f"50-bin chi-square p = {p_value:.3f} (>0.01)")


def test_14_deterministic_artifacts(tmp_path):
    def run_twice(sub, *extra):
        outputs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{sub}_{tag}"
            cmd = [sys.executable, "-m", "dipole_lab.cli", sub,
                   "--set", f"output_dir={out}", *extra]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            assert proc.returncode == 0, proc.stdout + proc.stderr
            outputs.append(out)
        return outputs

    identical = True
    pat_a, pat_b = run_twice("pattern", "--set", "grid.n_k=32",
                             "--set", "grid.n_theta=16", "--set", "grid.n_phi=8")
    identical &= (pat_a / "pattern.csv").read_bytes() == (pat_b / "pattern.csv").read_bytes()
    smp_a, smp_b = run_twice("sample")
    identical &= (smp_a / "samples.csv").read_bytes() == (smp_b / "samples.csv").read_bytes()
    verdict("14 deterministic artifacts", identical,
            "pattern.csv and samples.csv byte-identical across fresh processes")
