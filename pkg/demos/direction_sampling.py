"""Drawing photon directions from the sin^2 emission law.

Inverse-transform sampling of (3/4) sin^2(theta) in cos(theta): draws a
million directions, compares binned frequencies with the density, and
checks the exact second moment <cos^2 theta> = 1/5. Writes sampling.png
when matplotlib is installed.
"""

import numpy as np

from dipole_lab import sample_emission_directions

rng = np.random.default_rng(2024)
n = 1_000_000
theta, phi, dirs = sample_emission_directions(rng, n)
u = np.cos(theta)

print(f"{n} draws:")
print(f"  <cos^2 theta> = {np.mean(u**2):.6f}   (exact 0.200000)")
print(f"  <cos theta>   = {np.mean(u):+.6f}   (exact 0, odd symmetry)")
print(f"  mean direction norm: {np.linalg.norm(np.mean(dirs, axis=0)):.2e}")

edges = np.linspace(-1.0, 1.0, 21)
observed, _ = np.histogram(u, bins=edges, density=True)
centers = 0.5 * (edges[:-1] + edges[1:])
expected = 0.75 * (1.0 - centers**2)
print(f"\n{'cos(theta)':>11} {'sampled':>9} {'density':>9}")
for c, o, e in zip(centers, observed, expected):
    print(f"{c:11.2f} {o:9.4f} {e:9.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping the plot")
else:
    fig, ax = plt.subplots()
    ax.bar(centers, observed, width=0.1, alpha=0.5, label="sampled")
    fine = np.linspace(-1.0, 1.0, 200)
    ax.plot(fine, 0.75 * (1.0 - fine**2), "k-", label="(3/4)(1 - u^2)")
    ax.set_xlabel("cos(theta)")
    ax.set_ylabel("density")
    ax.legend()
    fig.savefig("sampling.png", dpi=150, bbox_inches="tight")
    print("wrote sampling.png")
