"""Command-line front end.

Subcommands: ``madelung``, ``pauli``, ``helix``, ``dirac``, ``suite``.
Every run writes CSV/JSON artifacts (and, with ``--plots``, PNG figures)
under ``--out`` plus a ``manifest.json`` index with content hashes.

Option precedence: command-line flag > ``ZITTERLAB_<NAME>`` environment
variable > ``--config`` key-value file > built-in default.  Config files
are flat ``key = value`` lines mirroring the flag names ('-' and '_' are
interchangeable, '#' starts a comment).

Exit codes: 0 all asserted checks pass, 1 a tolerance failed, 2 bad
usage or configuration.  Artifacts are deterministic: same options and
seed give byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, dirac, evolve, madelung, pauli, relkin
from .errors import ZitterlabError
from .fieldcalc import (
    Grid,
    ScalarField,
    convergence_slope,
    field_to_csv,
    interior_max,
    save_field,
)
from .suite import CHECK_IDS, SuiteParams, run_suite, summary_dict

ENV_PREFIX = "ZITTERLAB_"


@dataclass(frozen=True)
class Opt:
    flag: str
    type: type
    default: object
    help: str

    @property
    def dest(self) -> str:
        return self.flag.lstrip("-").replace("-", "_")

    @property
    def key(self) -> str:
        return self.dest.lower()


COMMON_OPTIONS = (
    Opt("--hbar", float, 1.0, "action constant (natural units)"),
    Opt("--mass", float, 1.0, "particle mass"),
    Opt("--charge", float, -1.0, "electric charge"),
    Opt("--seed", int, 7, "random seed for sampled checks"),
    Opt("--out", str, "zitterlab-out", "output directory"),
    Opt("--plots", bool, False, "render PNG figures next to the CSV/JSON output"),
)

SUBCOMMAND_OPTIONS = {
    "madelung": (
        Opt("--preset", str, "ho-ground", "state: ho-ground | plane-wave | gaussian | packet"),
        Opt("--grid", int, 256, "nodes per axis at the base resolution"),
        Opt("--refine", int, 1, "number of refinement levels (3 gives a slope)"),
        Opt("--perturb-E", float, 0.0, "shift the assumed energy by this amount (report mode)"),
        Opt("--omega", float, 1.0, "oscillator frequency for ho presets"),
        Opt("--half-width", float, 0.0, "half-width of the box (0 = preset default)"),
        Opt("--momentum", float, 1.0, "momentum for plane-wave/packet presets"),
        Opt("--sigma", float, 1.1, "packet width"),
    ),
    "pauli": (
        Opt("--state", str, "gaussian-up", "state: gaussian-up | plane-wave-up"),
        Opt("--grid", int, 128, "nodes per axis (2D)"),
        Opt("--half-width", float, 4.0, "half-width of the box"),
        Opt("--sigma", float, 1.0, "density width"),
        Opt("--boost", str, "0.7,0.4", "drift momentum components"),
        Opt("--spin-scale", float, 1.0, "scale |s| by this factor in the energy-split checks"),
    ),
    "helix": (
        Opt("--preset", str, "custom", "trajectory: custom | light-like"),
        Opt("--boost", str, "0", "CM velocity (scalar along x or comma 3-vector)"),
        Opt("--R", float, -1.0, "orbit radius (-1 = preset default)"),
        Opt("--omega", float, -1.0, "orbit frequency (-1 = use --omega-ratio)"),
        Opt("--omega-ratio", float, 1.0, "orbit frequency in units of 2m/hbar"),
        Opt("--phase", float, 0.0, "orbit phase offset"),
        Opt("--samples", int, 64, "number of sampled lab times"),
        Opt("--t-max", float, -1.0, "sampling window (-1 = two lab periods)"),
        Opt("--bz-check", bool, False, "assert the second-derivative closure at omega-ratio 1"),
        Opt("--modulate", str, "", "radius modulation 'amp,freq' (reported, not asserted)"),
    ),
    "dirac": (
        Opt("--waves", int, 4, "maximum plane waves per sampled state"),
        Opt("--samples", int, 200, "number of sampled (state, event) pairs"),
        Opt("--momentum-scale", float, 0.8, "momentum magnitudes up to this multiple of m"),
        Opt("--rest-frame", bool, False, "also check the rest-frame current contraction"),
    ),
    "suite": (
        Opt("--json", bool, False, "print the summary JSON to stdout"),
    ),
}

TOL_OPT = Opt("--tol", str, "", "override a named tolerance, 'key=value' (repeatable)")


# ---------------------------------------------------------------------------
# option resolution


def _parse_config_file(path: str) -> dict:
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ZitterlabError(f"config line without '=': {raw!r}")
        key, value = line.split("=", 1)
        cfg[key.strip().replace("-", "_").lower()] = value.strip()
    return cfg


def _coerce(opt: Opt, raw):
    if not isinstance(raw, str):
        return raw
    if opt.type is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    try:
        return opt.type(raw)
    except ValueError:
        raise ZitterlabError(f"bad value {raw!r} for option {opt.flag}") from None


def _resolve_options(args: argparse.Namespace, options, file_cfg: dict) -> dict:
    resolved = {}
    for opt in options:
        if hasattr(args, opt.dest):
            resolved[opt.key] = getattr(args, opt.dest)
            continue
        env = os.environ.get(ENV_PREFIX + opt.key.upper())
        if env is not None:
            resolved[opt.key] = _coerce(opt, env)
            continue
        if opt.key in file_cfg:
            resolved[opt.key] = _coerce(opt, file_cfg[opt.key])
            continue
        resolved[opt.key] = opt.default
    return resolved


def _resolve_tol(args, file_cfg) -> dict:
    entries = []
    if "tol" in file_cfg:
        entries.extend(file_cfg["tol"].split(","))
    env = os.environ.get(ENV_PREFIX + "TOL")
    if env:
        entries.extend(env.split(","))
    entries.extend(getattr(args, "tol", []) or [])
    overrides = {}
    for entry in entries:
        entry = entry.strip()
        if not entry:
            continue
        if "=" not in entry:
            raise ZitterlabError(f"--tol expects key=value, got {entry!r}")
        key, value = entry.split("=", 1)
        overrides[key.strip()] = float(value)
    return overrides


def _parse_vector(text: str) -> np.ndarray:
    parts = [float(p) for p in str(text).split(",") if p.strip() != ""]
    if len(parts) == 1:
        parts = [parts[0], 0.0, 0.0]
    while len(parts) < 3:
        parts.append(0.0)
    if len(parts) > 3:
        raise ZitterlabError(f"expected at most 3 components, got {text!r}")
    return np.array(parts)


# ---------------------------------------------------------------------------
# artifact writing


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _write_json(path: Path, obj) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _write_csv(path: Path, headers, rows) -> Path:
    lines = [",".join(headers)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_manifest(out_dir: Path, command: str, params: dict, artifacts) -> Path:
    entries = []
    for p in sorted(Path(a) for a in artifacts):
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        entries.append({
            "path": str(p.relative_to(out_dir)),
            "sha256": digest,
            "bytes": p.stat().st_size,
        })
    manifest = {
        "tool": "zitterlab",
        "version": __version__,
        "command": command,
        "parameters": params,
        "artifacts": entries,
    }
    return _write_json(out_dir / "manifest.json", manifest)


class CheckList:
    """Collect named pass/fail assertions for one command."""

    def __init__(self, tol_overrides: dict):
        self.checks = []
        self._tol = tol_overrides

    def tol(self, key: str, default: float) -> float:
        return float(self._tol.get(key, default))

    def require(self, name: str, measured: float, tol_key: str, default_tol: float,
                mode: str = "max") -> None:
        tol = self.tol(tol_key, default_tol)
        passed = measured <= tol if mode == "max" else measured >= tol
        self.checks.append({
            "name": name,
            "passed": bool(passed),
            "measured": None if not np.isfinite(measured) else float(measured),
            "tolerance": tol,
            "mode": mode,
        })

    def report(self, name: str, value) -> None:
        self.checks.append({"name": name, "passed": None, "measured": value,
                            "tolerance": None, "mode": "report"})

    @property
    def failures(self):
        return [c["name"] for c in self.checks if c["passed"] is False]

    def print_lines(self):
        for c in self.checks:
            if c["passed"] is None:
                print(f"  report {c['name']}: {c['measured']}")
            else:
                status = "ok" if c["passed"] else "FAIL"
                rel = "<=" if c["mode"] == "max" else ">="
                print(f"  {status} {c['name']}: {c['measured']:.6e} {rel} {c['tolerance']:.6e}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_madelung(opts: dict, tol: dict, out: Path) -> tuple[int, list]:
    from . import plots

    checks = CheckList(tol)
    artifacts = []
    hbar, mass = opts["hbar"], opts["mass"]
    preset = opts["preset"]
    n = opts["grid"]
    levels = max(1, opts["refine"])

    def grids_for(half):
        return [Grid.centered(((n - 1) * 2**k + 1,), (half,)) for k in range(levels)]

    provenance = {"preset": preset, "grid": n, "refine": levels}
    continuity_field = None

    if preset in ("ho-ground", "gaussian"):
        half = opts["half_width"] or 1.5
        omega = opts["omega"]
        energy = evolve.ho_energy(0, omega, hbar) + opts["perturb_e"]
        hj_errs, qp_rels, hs = [], [], []
        base_polar = base_hj = base_u = None
        for grid in grids_for(half):
            psi = evolve.make_state(
                evolve.StatePreset("ho-eigenstate", n=0, omega=omega),
                grid, hbar, mass, check_containment=False,
            )
            polar = madelung.polar_decompose(psi, hbar, mass)
            potential = evolve.harmonic_potential(grid, omega, mass)
            dphi = ScalarField(grid, np.full(grid.dims, -energy))
            hj = madelung.hj_residual(polar, potential, dphi)
            q_log = madelung.quantum_potential(polar.rho, hbar, mass, form="log")
            q_sqrt = madelung.quantum_potential(polar.rho, hbar, mass, form="sqrt")
            qp_rel = interior_max(ScalarField(grid, q_log.values - q_sqrt.values))
            qp_rel /= interior_max(q_sqrt)
            hj_errs.append(interior_max(hj))
            qp_rels.append(qp_rel)
            hs.append(grid.spacing[0])
            if base_polar is None:
                base_polar, base_hj, base_u = polar, hj, potential
        if preset == "ho-ground":
            checks.require("hj_residual_max", hj_errs[0], "hj_max", 5e-4)
            checks.require("qp_form_rel_diff", qp_rels[0], "qp_rel", 1e-3)
            if levels >= 3:
                checks.require("hj_slope", convergence_slope(hs, hj_errs), "slope_min", 1.9, "min")
                checks.require("qp_slope", convergence_slope(hs, qp_rels), "slope_min", 1.9, "min")
        else:
            checks.report("hj_residual_mean", float(np.nanmean(base_hj.values)))
            checks.report("expected_from_perturbation", -opts["perturb_e"])
        report = madelung.build_report(base_polar, base_u, ScalarField(
            base_polar.grid, np.full(base_polar.grid.dims, -energy)), provenance=provenance)
        if levels >= 2:
            rows = list(zip(hs, hj_errs, qp_rels))
            artifacts.append(_write_csv(out / "convergence.csv",
                                        ["h", "hj_residual_max", "qp_form_rel_diff"], rows))
            if opts["plots"]:
                artifacts.append(plots.save_convergence(
                    out / "convergence.png", hs, hj_errs,
                    convergence_slope(hs, hj_errs) if levels >= 2 else float("nan"),
                    "energy-balance residual under refinement"))

    elif preset == "plane-wave":
        half = opts["half_width"] or 8.0
        grid = Grid.centered((n,), (half,))
        p = opts["momentum"]
        psi = evolve.make_state(evolve.StatePreset("plane-wave", momentum=(p, 0.0, 0.0)),
                                grid, hbar, mass)
        polar = madelung.polar_decompose(psi, hbar, mass)
        potential = evolve.zero_potential(grid)
        energy = p * p / (2.0 * mass)
        dphi = ScalarField(grid, np.full(grid.dims, -energy))
        hj = madelung.hj_residual(polar, potential, dphi)
        pair = evolve.snapshot_pair(
            psi, evolve.EvolutionConfig(dt=1e-3, steps=0, hbar=hbar, mass=mass),
            stationary_energy=energy)
        continuity_field = madelung.continuity_residual(
            pair.rho_minus, pair.rho_plus, pair.phi, mass, pair.dt, rho_mid=pair.rho_mid)
        worst = max(interior_max(hj), interior_max(continuity_field))
        checks.require("max_residual", worst, "residual_max", 1e-10)
        report = madelung.build_report(polar, potential, dphi, continuity=continuity_field,
                                       provenance=provenance)
        base_hj = hj

    elif preset == "packet":
        half = opts["half_width"] or 12.0
        ratios = []
        residuals = []
        pair0 = None
        for k, grid in enumerate(grids_for(half)):
            h = grid.spacing[0]
            dt = h * h * mass / hbar / 8.0
            config = evolve.EvolutionConfig(dt=dt, steps=8 * 2**k, potential=None,
                                            hbar=hbar, mass=mass, enforce_dt_bound=True)
            psi = evolve.make_state(
                evolve.StatePreset("gaussian-packet", momentum=(opts["momentum"], 0.0, 0.0),
                                   sigma=opts["sigma"], center=(-1.5, 0.0, 0.0)),
                grid, hbar, mass)
            psi = evolve.step(psi, config)
            pair = evolve.snapshot_pair(psi, config)
            res = madelung.continuity_residual(pair.rho_minus, pair.rho_plus, pair.phi,
                                               mass, pair.dt, rho_mid=pair.rho_mid)
            residuals.append(interior_max(res))
            if pair0 is None:
                pair0, base_res = pair, res
        for a, b in zip(residuals, residuals[1:]):
            ratios.append(a / b)
        if ratios:
            checks.require("continuity_refinement_ratio", min(ratios), "ratio_min", 3.6, "min")
        else:
            checks.report("continuity_residual_max", residuals[0])
        polar = pair0.polar_mid
        report = madelung.build_report(polar, evolve.zero_potential(polar.grid), pair0.dphi_dt,
                                       continuity=base_res, provenance=provenance)
        base_hj = report.hj_residual
        continuity_field = base_res
    else:
        raise ZitterlabError(f"unknown madelung preset {preset!r}")

    artifacts.append(_write_json(out / "report.json", {
        **madelung.report_to_dict(report),
        "checks": checks.checks,
    }))
    artifacts.append(out / "quantum_potential.csv")
    field_to_csv(artifacts[-1], report.quantum_potential)
    artifacts.append(out / "hj_residual.csv")
    field_to_csv(artifacts[-1], report.hj_residual)
    save_field(out / "hj_residual.npz", report.hj_residual)
    artifacts.append(out / "hj_residual.npz")
    if continuity_field is not None:
        artifacts.append(out / "continuity_residual.csv")
        field_to_csv(artifacts[-1], continuity_field)
    if opts["plots"]:
        from . import plots as _plots

        artifacts.append(_plots.save_scalar_field(
            out / "hj_residual.png", report.hj_residual, "energy-balance residual"))
        artifacts.append(_plots.save_scalar_field(
            out / "quantum_potential.png", report.quantum_potential, "quantum potential"))
    checks.print_lines()
    return (1 if checks.failures else 0), artifacts


def _cmd_pauli(opts: dict, tol: dict, out: Path) -> tuple[int, list]:
    checks = CheckList(tol)
    artifacts = []
    hbar, mass, charge = opts["hbar"], opts["mass"], opts["charge"]
    n = opts["grid"]
    half = opts["half_width"]
    grid = Grid.centered((n, n), (half, half))
    state_name = opts["state"]

    if state_name == "gaussian-up":
        boost = _parse_vector(opts["boost"])
        scalar = evolve.make_state(
            evolve.StatePreset("gaussian-packet", momentum=tuple(boost), sigma=opts["sigma"]),
            grid, hbar, mass, check_containment=False)
    elif state_name == "plane-wave-up":
        boost = _parse_vector(opts["boost"])
        scalar = evolve.make_state(
            evolve.StatePreset("plane-wave", momentum=tuple(boost)), grid, hbar, mass)
    else:
        raise ZitterlabError(f"unknown pauli state {state_name!r}")

    psi = pauli.factorized_state(scalar, pauli.SPIN_UP, hbar, mass, charge)
    dec = pauli.decompose_current(psi)
    div = pauli.spin_current_divergence(psi)

    if state_name == "plane-wave-up":
        v_max = float(np.nanmax(np.abs(dec.V.values)))
        checks.require("internal_velocity_max", v_max, "v_max", 1e-12)
    else:
        checks.require("decomposition_residual_max", dec.residual_max_interior,
                       "decomposition_max", 1e-3)
    checks.require("spin_current_divergence_max", interior_max(div), "div_max", 1e-10)

    rho = psi.density()
    spin_scale = opts["spin_scale"]
    s = np.array([0.0, 0.0, 0.5 * hbar * spin_scale])
    vsq = pauli.vsq_identity_check(rho, s, mass)
    scale = interior_max(vsq.vsq_identity)
    checks.require("vsq_identity_rel_diff", vsq.max_abs_diff / scale, "vsq_rel", 1e-10)
    phi = dec.phi if dec.phi is not None else ScalarField(grid, np.zeros(grid.dims))
    koenig = pauli.koenig_split_check(rho, phi, s, hbar, mass)
    expected = spin_scale * spin_scale
    ratio_defect = max(abs(koenig.ratio_min - expected), abs(koenig.ratio_max - expected))
    checks.require("koenig_ratio_defect", ratio_defect, "koenig_ratio", 1e-10)
    if spin_scale == 1.0:
        checks.require("koenig_rel_diff", koenig.max_rel_diff, "koenig_rel", 1e-10)
    s_field = pauli.VectorField3(grid, np.broadcast_to(s, grid.dims + (3,)).copy())
    beta = pauli.takabayasi_beta(rho, s_field, mass)
    checks.require("takabayasi_beta_max", interior_max(beta.beta), "beta_max", 1e-12)
    nu = pauli.diffusion_coefficient(float(np.linalg.norm(s)), mass)
    checks.report("diffusion_coefficient", nu)

    artifacts.append(_write_json(out / "report.json", {
        "state": {"name": state_name, "grid": n, "half_width": half,
                  "boost": [float(b) for b in boost], "spin_scale": spin_scale},
        "parameters": {"hbar": hbar, "mass": mass, "charge": charge},
        "decomposition_mode": dec.mode,
        "koenig_ratio_band": [koenig.ratio_min, koenig.ratio_max],
        "koenig_expected_ratio": koenig.expected_ratio,
        "diffusion_coefficient": nu,
        "checks": checks.checks,
    }))
    for name, f in (("j_total", dec.j_total), ("j_convective", dec.j_convective),
                    ("j_spin", dec.j_spin), ("internal_velocity", dec.V),
                    ("decomposition_residual", dec.residual)):
        path = out / f"{name}.csv"
        field_to_csv(path, f)
        artifacts.append(path)
    if opts["plots"]:
        from . import plots as _plots

        mag = ScalarField(grid, np.sqrt(np.sum(dec.residual.values**2, axis=-1)))
        artifacts.append(_plots.save_scalar_field(
            out / "decomposition_residual.png", mag, "current recomposition residual", "|residual|"))
        vmag = ScalarField(grid, np.sqrt(np.nansum(dec.V.values**2, axis=-1)))
        artifacts.append(_plots.save_scalar_field(
            out / "internal_velocity.png", vmag, "internal velocity magnitude", "|V|"))
    checks.print_lines()
    return (1 if checks.failures else 0), artifacts


def _cmd_helix(opts: dict, tol: dict, out: Path) -> tuple[int, list]:
    checks = CheckList(tol)
    artifacts = []
    hbar, mass = opts["hbar"], opts["mass"]
    drift = _parse_vector(opts["boost"])

    mod_amp = mod_freq = 0.0
    if opts["modulate"]:
        mod = [float(p) for p in opts["modulate"].split(",")]
        if len(mod) != 2:
            raise ZitterlabError("--modulate expects 'amp,freq'")
        mod_amp, mod_freq = mod

    if opts["preset"] == "light-like":
        traj = relkin.HelicalTrajectory.light_like(mass, hbar, drift=drift, phase0=opts["phase"])
    elif opts["preset"] == "custom":
        omega = opts["omega"] if opts["omega"] > 0 else opts["omega_ratio"] * 2.0 * mass / hbar
        radius = opts["r"] if opts["r"] >= 0 else 0.5 * hbar / (2.0 * mass)
        traj = relkin.HelicalTrajectory(
            mass=mass, radius=radius, omega=omega, drift=drift, phase0=opts["phase"],
            mod_amp=mod_amp, mod_freq=mod_freq)
    else:
        raise ZitterlabError(f"unknown helix preset {opts['preset']!r}")

    speed = traj.omega * traj.radius
    t_max = opts["t_max"] if opts["t_max"] > 0 else 4.0 * np.pi * traj.gamma / traj.omega
    times = np.linspace(0.0, t_max, opts["samples"])

    rows = []
    worst_pv = worst_std = worst_inv = worst_v2 = worst_std_vs_new = 0.0
    n_std = 0
    labels_ok = True
    expected_v2 = 1.0 - speed * speed
    expected_label = relkin.classify_value(expected_v2, 1e-14)
    for t in times:
        sample = relkin.kinematic_sample(traj, float(t))
        rep = relkin.mass_constraint_check(traj, float(t))
        cls = relkin.classify_v2(traj, float(t))
        worst_pv = max(worst_pv, abs(rep.pv_new - mass))
        worst_inv = max(worst_inv, abs(cls.v2_boosted - cls.v2_lab))
        if traj.mod_amp == 0.0:
            worst_v2 = max(worst_v2, abs(sample.v2 - expected_v2))
            labels_ok = labels_ok and sample.classification == expected_label
        if rep.pv_std is not None:
            n_std += 1
            worst_std = max(worst_std, abs(rep.pv_std - rep.pv_std_predicted))
        v_std = sample.v_std
        if v_std is not None and traj.radius == 0.0:
            gap = (v_std - sample.v_new).as_array()
            worst_std_vs_new = max(worst_std_vs_new, float(np.max(np.abs(gap))))
        rows.append([
            sample.t, sample.tau,
            sample.x.t, *sample.x.xyz,
            sample.v2,
            None if v_std is None else v_std.square(),
            rep.pv_new,
            rep.pv_std,
            sample.classification,
        ])

    checks.require("pv_new_defect_max", worst_pv, "pv_tol", 1e-12)
    if n_std:
        checks.require("pv_std_prediction_defect_max", worst_std, "pv_tol", 1e-12)
    if traj.radius == 0.0:
        checks.require("scalar_limit_std_equals_new", worst_std_vs_new, "pv_tol", 1e-12)
    checks.require("v2_frame_invariance", worst_inv, "v2_tol", 1e-10)
    if traj.mod_amp == 0.0:
        checks.require("v2_value_defect_max", worst_v2, "v2_tol", 1e-10)
        if not labels_ok:
            checks.require("classification_consistent", 1.0, "exact", 0.0)
    if opts["preset"] == "light-like":
        worst_light = max(abs(r[6]) for r in rows)
        checks.require("lightlike_v2_max", worst_light, "v2_tol", 1e-10)

    bz = relkin.barut_zanghi_check(traj, float(times[1] if len(times) > 1 else 0.0), hbar)
    if opts["bz_check"]:
        if abs(traj.omega - bz.bz_omega) < 1e-12:
            checks.require("bz_defect", bz.defect, "bz_tol", 1e-12)
        else:
            checks.report("bz_defect_off_frequency", bz.defect)
    else:
        checks.report("bz_defect", bz.defect)

    headers = ["t", "tau", "x0", "x1", "x2", "x3", "v2_new", "v2_std",
               "pv_new", "pv_std", "classification"]
    artifacts.append(_write_csv(out / "series.csv", headers, rows))
    artifacts.append(_write_json(out / "summary.json", {
        "trajectory": {
            "mass": mass, "radius": traj.radius, "omega": traj.omega,
            "internal_speed": speed, "drift": [float(w) for w in traj.drift],
            "phase": traj.phase0, "mod_amp": traj.mod_amp, "mod_freq": traj.mod_freq,
        },
        "parameters": {"hbar": hbar, "mass": mass},
        "expected_v2": expected_v2 if traj.mod_amp == 0.0 else None,
        "classification": expected_label if traj.mod_amp == 0.0 else "varies",
        "bz": {"defect": bz.defect, "contraction": bz.vddot_dot_v,
               "omega_over_bz": traj.omega / bz.bz_omega},
        "checks": checks.checks,
    }))
    if opts["plots"]:
        from . import plots as _plots

        series = relkin.v2_time_dependence(traj, times)
        artifacts.append(_plots.save_series(
            out / "v2_series.png", series.taus,
            {"v.v": series.v2, "1 - V_cmf^2": 1.0 - series.cmf_speed_sq},
            "tau", "v.v", "four-velocity square along the orbit"))
        dense = np.linspace(0.0, t_max, 600)
        positions = traj.position(dense)
        artifacts.append(_plots.save_trajectory(
            out / "trajectory.png", positions, "charge trajectory (lab frame)"))
    checks.print_lines()
    return (1 if checks.failures else 0), artifacts


def _cmd_dirac(opts: dict, tol: dict, out: Path) -> tuple[int, list]:
    checks = CheckList(tol)
    artifacts = []
    hbar, mass = opts["hbar"], opts["mass"]
    rng = np.random.default_rng(opts["seed"])
    n_waves = opts["waves"]
    rows = []
    worst_gordon = worst_cons = worst_spin_single = 0.0
    for i in range(opts["samples"]):
        k = n_waves if n_waves == 1 else int(rng.integers(1, n_waves + 1))
        state = dirac.random_state(rng, k, mass, opts["momentum_scale"])
        x = dirac.random_event(rng)
        current = dirac.dirac_current(state, x)
        terms = dirac.gordon_decompose(state, x)
        total = terms.total
        residual = max(abs(current.t - total.t), float(np.max(np.abs(current.xyz - total.xyz))))
        conservation = dirac.current_conservation_residual(state)
        worst_gordon = max(worst_gordon, residual)
        worst_cons = max(worst_cons, conservation)
        if k == 1:
            worst_spin_single = max(worst_spin_single, abs(terms.spin_term.t),
                                    float(np.max(np.abs(terms.spin_term.xyz))))
        rows.append([i, k, x.t, *x.xyz, residual, conservation])

    checks.require("gordon_residual_max", worst_gordon, "gordon_tol", 1e-12)
    checks.require("current_conservation_max", worst_cons, "conservation_tol", 1e-12)
    if n_waves == 1:
        checks.require("single_wave_spin_term_max", worst_spin_single, "gordon_tol", 1e-12)

    worst_footnote = 0.0
    for _ in range(50):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        p = dirac.on_shell_momentum(direction * rng.uniform(0.0, 0.9) * mass, mass)
        for spin in (1, -1):
            worst_footnote = max(worst_footnote,
                                 abs(dirac.footnote_identity_check(p, spin, mass) - mass))
    checks.require("momentum_contraction_defect_max", worst_footnote, "contraction_tol", 1e-12)
    if opts["rest_frame"]:
        rest = dirac.on_shell_momentum(np.zeros(3), mass)
        defect = abs(dirac.footnote_identity_check(rest, 1, mass) - mass)
        checks.require("rest_frame_contraction_defect", defect, "contraction_tol", 1e-12)

    artifacts.append(_write_csv(
        out / "samples.csv",
        ["sample", "n_waves", "x0", "x1", "x2", "x3", "gordon_residual", "conservation_residual"],
        rows))
    artifacts.append(_write_json(out / "report.json", {
        "parameters": {"hbar": hbar, "mass": mass, "seed": opts["seed"],
                       "waves": n_waves, "samples": opts["samples"],
                       "momentum_scale": opts["momentum_scale"]},
        "checks": checks.checks,
    }))
    if opts["plots"]:
        from . import plots as _plots

        p1 = dirac.on_shell_momentum(np.array([0.4, 0.0, 0.0]) * mass, mass)
        p2 = dirac.on_shell_momentum(np.array([-0.3, 0.2, 0.0]) * mass, mass)
        beat_state = dirac.DiracPlaneWaveState(
            (dirac.PlaneWaveComponent(1.0, p1, 1), dirac.PlaneWaveComponent(0.7, p2, -1)), mass)
        period = 2.0 * np.pi / abs(p1.t - p2.t)
        ts = np.linspace(0.0, 2.0 * period, 400)
        js = np.array([dirac.dirac_current(beat_state, relkin.FourVector(t, np.zeros(3))).as_array()
                       for t in ts])
        artifacts.append(_plots.save_series(
            out / "current_beat.png", ts,
            {"j0": js[:, 0], "jx": js[:, 1], "jy": js[:, 2]},
            "t", "current", "two-wave interference in the current"))
    checks.print_lines()
    return (1 if checks.failures else 0), artifacts


def _cmd_suite(opts: dict, tol: dict, out: Path) -> tuple[int, list]:
    params = SuiteParams(hbar=opts["hbar"], mass=opts["mass"],
                         charge=opts["charge"], seed=opts["seed"])
    results = run_suite(params)
    summary = summary_dict(results, params)
    artifacts = [_write_json(out / "summary.json", summary)]
    rows = [[r.check_id, r.passed, r.verifies] for r in results]
    artifacts.append(_write_csv(out / "checks.csv", ["id", "passed", "verifies"], rows))
    if opts["plots"]:
        from . import plots as _plots

        artifacts.append(_plots.save_suite_margins(out / "margins.png", results))
    for r in results:
        print(f"  {'ok' if r.passed else 'FAIL'} {r.check_id}")
    failures = [r.check_id for r in results if not r.passed]
    if failures:
        print("failed checks: " + ", ".join(failures))
    if opts["json"]:
        print(json.dumps(summary, indent=2, sort_keys=True))
    return (1 if failures else 0), artifacts


COMMANDS = {
    "madelung": _cmd_madelung,
    "pauli": _cmd_pauli,
    "helix": _cmd_helix,
    "dirac": _cmd_dirac,
    "suite": _cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zitterlab",
        description="verification runs for spin-driven quantum hydrodynamics "
                    "and zitterbewegung kinematics",
    )
    parser.add_argument("--version", action="version", version=f"zitterlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, options in SUBCOMMAND_OPTIONS.items():
        p = sub.add_parser(name, help=f"run the {name} checks")
        for opt in COMMON_OPTIONS + options:
            if opt.type is bool:
                p.add_argument(opt.flag, dest=opt.dest, action="store_true",
                               default=argparse.SUPPRESS, help=opt.help)
            else:
                p.add_argument(opt.flag, dest=opt.dest, type=opt.type,
                               default=argparse.SUPPRESS, help=opt.help)
        p.add_argument("--config", type=str, default=None,
                       help="key-value file with option defaults")
        p.add_argument(TOL_OPT.flag, dest="tol", action="append",
                       default=argparse.SUPPRESS, help=TOL_OPT.help)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _parse_config_file(args.config) if args.config else {}
        options = COMMON_OPTIONS + SUBCOMMAND_OPTIONS[args.command]
        opts = _resolve_options(args, options, file_cfg)
        tol = _resolve_tol(args, file_cfg)

        out_root = Path(opts["out"])
        out_dir = out_root / args.command
        out_dir.mkdir(parents=True, exist_ok=True)

        print(f"zitterlab {args.command} (hbar={opts['hbar']}, mass={opts['mass']}, "
              f"charge={opts['charge']}, seed={opts['seed']})")
        code, artifacts = COMMANDS[args.command](opts, tol, out_dir)
        # the output location is not part of the run configuration: identical
        # runs into different directories must produce identical bytes
        echo = {k: v for k, v in sorted(opts.items()) if k != "out"}
        manifest = _write_manifest(out_root, args.command, echo, artifacts)
        print(f"artifacts: {len(artifacts)} files under {out_dir} (index {manifest})")
        if code != 0:
            print("status: TOLERANCE FAILURE", file=sys.stderr)
        return code
    except ZitterlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
