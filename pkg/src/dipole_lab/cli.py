"""Command-line front end: config parsing, dispatch, deterministic artifacts.

One YAML config drives everything; defaults live here, a config file deep-
merges over them, and --set key.path=value overrides merge last (dedicated
flags like --theta-bins are shorthand for specific keys). All numeric output
is written with 17 significant digits and '\n' line endings so a given
(config, seed) pair always produces byte-identical files.

Exit status: 0 success, 1 any failed check or evaluation error, 2 config
problems.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os

import numpy as np
import yaml

from . import conjugacy as conjugacy_mod
from . import identities as identities_mod
from . import observables as observables_mod
from . import quantum as quantum_mod
from .errors import ConfigParseError, DipoleLabError
from .fields import sample_fields
from .kspace import KGrid, KPoint, QuadratureSettings, build_amplitude_grid
from .trajectory import DipoleSpec, Envelope

__all__ = ["RunConfig", "load_config", "run", "main"]

SUBCOMMANDS = ("pattern", "fields", "verify", "sample", "quantum", "conjugacy")


def default_config() -> dict:
    """Fresh copy of the built-in configuration tree."""
    t_stop = 20.0 * math.pi
    return copy.deepcopy({
        "dipole": {
            "amp_minus": 0.01,
            "omega0": 1.0,
            "t_stop": t_stop,
            "charge_e": 1.0,
            "mass_ratio": 1.0 / 1836.0,
            "envelope": {"kind": "raised_cosine", "ramp_fraction": 0.1},
            "cm_position": [0.0, 0.0, 0.0],
            "cm_velocity": [0.0, 0.0, 0.0],
        },
        "grid": {
            "n_k": 96,
            "n_theta": 48,
            "n_phi": 32,
            "k_max": 20.0,
            "k_min": 0.0,
            "taper_fraction": 0.1,
            "radial_panels": [],
            "narrow_band": False,
        },
        "quadrature": {
            "panel_fraction": 0.125,
            "points_per_panel": 6,
            "rel_tol": 1e-6,
            "norm_floor": 1e-8,
        },
        "tolerances": {
            "hamilton": 1e-6,
            "field_consistency": 1e-3,
            "coulomb_recovery": 1e-4,
            "vector_identities": 1e-12,
        },
        "seed": 0,
        "output_dir": "out",
        "units_mode": "natural",
        "pattern": {"theta_bins": 24, "time": None},
        "fields": {
            "points": [
                [1.5, 0.0, 0.3, t_stop + 0.5],
                [-0.8, 0.9, 0.4, t_stop + 0.5],
                [0.3, -0.5, 1.1, t_stop + 0.5],
            ],
        },
        "sample": {"count": 10000},
        "quantum": {"dim": 8, "omega": 1.0, "theta": math.pi / 2.0},
        "conjugacy": {
            "n_points": 50,
            "m": 1.0,
            "volume": 1.0,
            "h_factor": 1e-4,
            "k_range": [0.5, 1.5],
            "t_range_factors": [1.05, 3.0],
        },
        "verify": {
            "odd_angular": {"k_max": 20.0, "R": 2.0, "dt": 3.0},
            "coulomb": {"R_plus": 2.0, "R_minus": 1.0, "k_max": 100.0},
            "vector": {"n_random": 1000},
            "consistency_points": [
                [1.5, 0.0, 0.3, t_stop + 0.5],
                [-0.8, 0.9, 0.4, t_stop + 0.5],
                [0.3, -0.5, 1.1, t_stop + 0.5],
            ],
        },
    })


def _deep_merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def _apply_dotted(tree: dict, dotted: str, raw_value: str) -> None:
    node = tree
    *parents, leaf = dotted.split(".")
    for part in parents:
        nxt = node.get(part)
        if not isinstance(nxt, dict):
            nxt = {}
            node[part] = nxt
        node = nxt
    node[leaf] = yaml.safe_load(raw_value)


class RunConfig:
    """Materialized configuration: domain objects plus raw subcommand options."""

    def __init__(self, tree: dict):
        self.tree = tree
        try:
            dip = tree["dipole"]
            env = dip.get("envelope", {})
            self.dipole = DipoleSpec(
                amp_minus=float(dip["amp_minus"]),
                omega0=float(dip["omega0"]),
                t_stop=float(dip["t_stop"]),
                charge_e=float(dip.get("charge_e", 1.0)),
                mass_ratio=float(dip.get("mass_ratio", 1.0 / 1836.0)),
                envelope=Envelope(
                    kind=str(env.get("kind", "raised_cosine")),
                    ramp_fraction=float(env.get("ramp_fraction", 0.1)),
                ),
                cm_position=tuple(float(x) for x in dip.get("cm_position", (0.0, 0.0, 0.0))),
                cm_velocity=tuple(float(x) for x in dip.get("cm_velocity", (0.0, 0.0, 0.0))),
                units_mode=str(tree.get("units_mode", "natural")),
            )
            g = tree["grid"]
            self.grid = KGrid(
                n_k=int(g["n_k"]),
                n_theta=int(g["n_theta"]),
                n_phi=int(g["n_phi"]),
                k_max=float(g["k_max"]),
                k_min=float(g.get("k_min", 0.0)),
                taper_fraction=float(g.get("taper_fraction", 0.1)),
                radial_panels=tuple(
                    (float(edge), int(count)) for edge, count in g.get("radial_panels", ())
                ),
                narrow_band=bool(g.get("narrow_band", False)),
            )
            q = tree.get("quadrature", {})
            self.quadrature = QuadratureSettings(
                panel_fraction=float(q.get("panel_fraction", 0.125)),
                points_per_panel=int(q.get("points_per_panel", 6)),
                rel_tol=float(q.get("rel_tol", 1e-6)),
                norm_floor=float(q.get("norm_floor", 1e-8)),
            )
            self.tolerances = {str(k): float(v) for k, v in tree.get("tolerances", {}).items()}
            if any(v <= 0.0 for v in self.tolerances.values()):
                raise ValueError("tolerances must all be positive")
            self.seed = int(tree.get("seed", 0))
            if self.seed < 0:
                raise ValueError("seed must be a nonnegative integer")
            self.output_dir = str(tree.get("output_dir", "out"))
            self.units_mode = str(tree.get("units_mode", "natural"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigParseError(f"bad configuration: {exc}") from exc

    def section(self, name: str) -> dict:
        return self.tree.get(name, {})


def load_config(config_path=None, overrides=(), flag_overrides=None) -> RunConfig:
    """Defaults, then the config file, then --set pairs, then flag shorthands."""
    tree = default_config()
    if config_path is not None:
        if not os.path.exists(config_path):
            raise ConfigParseError(f"config file not found: {config_path}")
        try:
            with open(config_path) as fh:
                loaded = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigParseError(f"config file does not parse: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigParseError("config file must hold a mapping at top level")
        tree = _deep_merge(tree, loaded)
    for item in overrides:
        if "=" not in item:
            raise ConfigParseError(f"--set expects key.path=value, got {item!r}")
        dotted, _, raw = item.partition("=")
        try:
            _apply_dotted(tree, dotted.strip(), raw)
        except yaml.YAMLError as exc:
            raise ConfigParseError(f"bad --set value {item!r}: {exc}") from exc
    for dotted, value in (flag_overrides or {}).items():
        node = tree
        *parents, leaf = dotted.split(".")
        for part in parents:
            node = node.setdefault(part, {})
        node[leaf] = value
    return RunConfig(tree)


def _fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: str, payload) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _out_path(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return os.path.join(cfg.output_dir, name)


def _run_pattern(cfg: RunConfig) -> int:
    opts = cfg.section("pattern")
    n_bins = int(opts.get("theta_bins", 64))
    t = opts.get("time")
    t = cfg.dipole.t_stop if t is None else float(t)
    amp = build_amplitude_grid(cfg.dipole, cfg.grid, t, cfg.quadrature)
    spectrum = observables_mod.angular_density(amp, t, n_bins)
    filled = spectrum.solid_angle > 0.0
    sin2 = np.sin(spectrum.theta_bins) ** 2
    denom = float(np.sum(sin2[filled] ** 2))
    scale = float(np.sum(spectrum.density[filled] * sin2[filled])) / denom if denom > 0 else 0.0
    reference = scale * sin2
    rows = zip(spectrum.theta_bins, spectrum.density, reference)
    path = _out_path(cfg, "pattern.csv")
    _write_csv(path, ("theta", "density", "sin2_reference"), rows)
    print(f"pattern: wrote {path} ({n_bins} bins, total energy {spectrum.total:.6e})")
    return 0


def _run_fields(cfg: RunConfig) -> int:
    points = cfg.section("fields").get("points", [])
    rows = []
    for entry in points:
        x, y, z, t = (float(v) for v in entry)
        s = sample_fields(cfg.dipole, cfg.grid, (x, y, z), t, cfg.quadrature)
        rows.append((x, y, z, t, s.phi, *s.Avec, *s.E, *s.B))
    path = _out_path(cfg, "fields.csv")
    _write_csv(
        path,
        ("x", "y", "z", "t", "phi", "Ax", "Ay", "Az", "Ex", "Ey", "Ez", "Bx", "By", "Bz"),
        rows,
    )
    print(f"fields: wrote {path} ({len(rows)} points)")
    return 0


def _run_verify(cfg: RunConfig) -> int:
    opts = cfg.section("verify")
    tol = cfg.tolerances
    odd = opts.get("odd_angular", {})
    cou = opts.get("coulomb", {})
    vec = opts.get("vector", {})
    reports = [
        identities_mod.verify_odd_angular_integral(
            float(odd.get("k_max", 20.0)), float(odd.get("R", 2.0)), float(odd.get("dt", 3.0))
        ),
        identities_mod.verify_coulomb_recovery(
            float(cou.get("R_plus", 2.0)),
            float(cou.get("R_minus", 1.0)),
            float(cou.get("k_max", 100.0)),
        ),
        identities_mod.verify_vector_identities(int(vec.get("n_random", 1000)), cfg.seed),
    ]
    points = [((p[0], p[1], p[2]), p[3]) for p in opts.get("consistency_points", [])]
    if points:
        reports.append(
            identities_mod.verify_field_consistency(cfg.dipole, cfg.grid, points, cfg.quadrature)
        )
    renamed = []
    for report in reports:
        wanted = tol.get(report.name)
        if wanted is not None and wanted != report.tolerance:
            report = identities_mod.IdentityReport(
                name=report.name, lhs=report.lhs, rhs=report.rhs, abs_err=report.abs_err,
                rel_err=report.rel_err, tolerance=wanted, passed=report.rel_err <= wanted,
            )
        renamed.append(report)
    path = _out_path(cfg, "verify.json")
    _write_json(path, [r.to_dict() for r in renamed])
    n_fail = sum(not r.passed for r in renamed)
    print(f"verify: wrote {path} ({len(renamed)} checks, {n_fail} failed)")
    return 1 if n_fail else 0


def _run_sample(cfg: RunConfig) -> int:
    count = int(cfg.section("sample").get("count", 10000))
    rng = np.random.default_rng(cfg.seed)
    theta, phi, _ = observables_mod.sample_emission_directions(rng, count)
    path = _out_path(cfg, "samples.csv")
    _write_csv(path, ("theta", "phi"), zip(theta, phi))
    print(f"sample: wrote {path} ({count} draws, seed {cfg.seed})")
    return 0


def _run_quantum(cfg: RunConfig) -> int:
    opts = cfg.section("quantum")
    dim = int(opts.get("dim", 8))
    omega = float(opts.get("omega", 1.0))
    theta = float(opts.get("theta", math.pi / 2.0))
    ops = quantum_mod.build_ladder(dim, omega, theta)
    h_half = quantum_mod.mode_hamiltonian(ops)
    scale = omega * math.sin(theta) ** 2
    h_bare = scale * (ops.lower @ ops.raise_ + 0.5 * np.eye(dim))
    restricted, top_defect = quantum_mod.commutator_check(ops)
    payload = {
        "dim": dim,
        "omega": omega,
        "theta": theta,
        "eigenvalues": sorted(np.linalg.eigvalsh(h_half).tolist()),
        "eigenvalues_bare_product_convention": sorted(np.linalg.eigvalsh(h_bare).tolist()),
        "convention_note": (
            "primary spectrum uses the symmetrized half-sum (number + 1/2); the bare "
            "a a^+ + 1/2 ordering is listed alongside for comparison"
        ),
        "commutator": {
            "restricted_norm_error": restricted,
            "top_level_defect": top_defect,
            "float_matmul_residue": quantum_mod.commutator_float_residue(ops),
        },
    }
    path = _out_path(cfg, "quantum.json")
    _write_json(path, payload)
    print(f"quantum: wrote {path} (dim {dim}, restricted commutator error {restricted:g})")
    return 0


def _run_conjugacy(cfg: RunConfig) -> int:
    opts = cfg.section("conjugacy")
    n_points = int(opts.get("n_points", 50))
    m = float(opts.get("m", 1.0))
    volume = float(opts.get("volume", 1.0))
    h_factor = float(opts.get("h_factor", 1e-4))
    k_lo, k_hi = (float(v) for v in opts.get("k_range", (0.5, 1.5)))
    f_lo, f_hi = (float(v) for v in opts.get("t_range_factors", (1.05, 3.0)))
    tol = cfg.tolerances.get("hamilton", 1e-6)
    rng = np.random.default_rng(cfg.seed)
    spec = cfg.dipole
    entries = []
    worst = 0.0
    for _ in range(n_points):
        k = k_lo + (k_hi - k_lo) * rng.random()
        u = -0.95 + 1.9 * rng.random()
        t = spec.t_stop * (f_lo + (f_hi - f_lo) * rng.random())
        omega = spec.constants.c * k
        h = h_factor / omega
        kp = KPoint(k=k, cos_theta=u)
        r1, r2 = conjugacy_mod.hamilton_residuals(spec, kp, t, h, m, volume, cfg.quadrature)
        worst = max(worst, r1, r2)
        entries.append({"k": k, "cos_theta": u, "t": t, "r1": r1, "r2": r2})
    payload = {"points": entries, "max_residual": worst, "tolerance": tol, "pass": worst <= tol}
    path = _out_path(cfg, "conjugacy.json")
    _write_json(path, payload)
    print(f"conjugacy: wrote {path} (max residual {worst:.3e}, tolerance {tol:g})")
    return 0 if worst <= tol else 1


_RUNNERS = {
    "pattern": _run_pattern,
    "fields": _run_fields,
    "verify": _run_verify,
    "sample": _run_sample,
    "quantum": _run_quantum,
    "conjugacy": _run_conjugacy,
}


def run(subcommand: str, config_path=None, overrides=(), flag_overrides=None) -> int:
    """Execute one subcommand; returns the process exit status."""
    if subcommand not in _RUNNERS:
        print(f"error [ConfigParseError]: unknown subcommand {subcommand!r}")
        return 2
    try:
        cfg = load_config(config_path, overrides, flag_overrides)
    except ConfigParseError as exc:
        print(f"error [ConfigParseError]: {exc}")
        return 2
    try:
        return _RUNNERS[subcommand](cfg)
    except DipoleLabError as exc:
        print(f"error [{type(exc).__name__}]: {exc}")
        return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dipole-lab",
        description="Oscillating two-charge dipole: k-space amplitudes, fields, "
        "emission statistics, and mode quantization checks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    extras = {
        "pattern": [("--theta-bins", int, "pattern.theta_bins", "number of polar bins")],
        "sample": [
            ("--count", int, "sample.count", "number of direction draws"),
            ("--seed", int, "seed", "RNG seed"),
        ],
        "quantum": [("--dim", int, "quantum.dim", "truncation dimension")],
        "fields": [],
        "verify": [],
        "conjugacy": [],
    }
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} artifact")
        p.add_argument("--config", default=None, help="YAML config file")
        p.add_argument(
            "--set", action="append", default=[], metavar="KEY.PATH=VALUE",
            dest="overrides", help="override one config value (repeatable)",
        )
        for flag, typ, _, helptext in extras[name]:
            p.add_argument(flag, type=typ, default=None, help=helptext)
    args = parser.parse_args(argv)
    flag_overrides = {}
    for flag, _, dotted, _ in extras[args.subcommand]:
        value = getattr(args, flag.lstrip("-").replace("-", "_"))
        if value is not None:
            flag_overrides[dotted] = value
    return run(args.subcommand, args.config, args.overrides, flag_overrides)


if __name__ == "__main__":
    raise SystemExit(main())
