"""Experiment harness: JSON configs in, deterministic CSV/JSON/NLSF artifacts out.

Exit codes: 0 all assertions pass, 1 assertion failure, 2 config error,
3 numerical failure.  Artifacts never embed wall-clock times or absolute
paths, so consecutive runs of one config are byte-identical.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import grid as _grid
from .convexity1d import action_convexity_scan
from .errors import BlowUpDetected, ConfigError, LogNLSError
from .evolution import (
    EvolutionConfig,
    GaussianInit,
    GroundStateInit,
    Perturbation,
    SnapshotInit,
    evolve,
    pc_identity_rhs,
    pseudoconformal_residual,
)
from .groundstate import (
    find_ground_state,
    mass_asymptotics_sweep,
    radial_observables,
)
from .minimize import minimize_energy
from .model import Family, ModelParams, amplitude_roots
from .snapshots import format_float, model_from_config, write_csv, write_snapshot

EXPERIMENTS = (
    "ground",
    "evolve",
    "stability",
    "minimize",
    "sweep_mass",
    "convexity1d",
    "contrast_blowup",
    "pseudoconformal",
)

_MODEL_KEYS = {"family", "lambda", "omega"}
_GRID_KEYS = {"dim", "n", "half_width"}
_TIME_KEYS = {"dt", "t_final", "sample_every"}
_OUTPUT_KEYS = {"csv_path", "summary_json_path", "snapshot_paths", "snapshot_times"}
_INITIAL_KEYS = {
    "ground_state": {"kind", "omega", "center", "phase", "boost"},
    "gaussian": {"kind", "amplitude", "width", "center", "boost"},
    "snapshot": {"kind", "path"},
}
_PERTURBATION_KEYS = {"kind", "delta", "center", "width", "mode", "renormalize"}

_TOP_KEYS = {
    "ground": {"experiment", "model", "outputs", "seed", "tol"},
    "evolve": {"experiment", "model", "grid", "time", "initial", "perturbation", "outputs", "seed"},
    "stability": {"experiment", "model", "grid", "time", "initial", "perturbation", "outputs", "seed"},
    "minimize": {"experiment", "model", "grid", "outputs", "seed", "rho", "tol", "precondition"},
    "sweep_mass": {"experiment", "model", "outputs", "seed", "omega_list", "tol"},
    "convexity1d": {"experiment", "model", "outputs", "seed", "omega_grid", "fd_delta"},
    "contrast_blowup": {"experiment", "model", "grid", "time", "initial", "outputs", "seed", "blowup_deadline"},
    "pseudoconformal": {"experiment", "model", "grid", "time", "initial", "outputs", "seed", "refine_dt"},
}


def _check_keys(section: dict, allowed: set, where: str):
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def validate_config(config: dict) -> dict:
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    exp = config.get("experiment")
    if exp not in EXPERIMENTS:
        raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {exp!r}")
    _check_keys(config, _TOP_KEYS[exp], "top level")
    if "model" not in config:
        raise ConfigError("missing 'model' section")
    _check_keys(config["model"], _MODEL_KEYS, "model")
    model_from_config(config["model"])  # window/positivity checks fail here
    if "grid" in config:
        _check_keys(config["grid"], _GRID_KEYS, "grid")
    if "time" in config:
        _check_keys(config["time"], _TIME_KEYS, "time")
    if "initial" in config:
        kind = config["initial"].get("kind")
        if kind not in _INITIAL_KEYS:
            raise ConfigError(f"initial.kind must be one of {sorted(_INITIAL_KEYS)}")
        _check_keys(config["initial"], _INITIAL_KEYS[kind], "initial")
    if config.get("perturbation") is not None and "perturbation" in config:
        _check_keys(config["perturbation"], _PERTURBATION_KEYS, "perturbation")
    outputs = config.get("outputs", {})
    _check_keys(outputs, _OUTPUT_KEYS, "outputs")
    paths = outputs.get("snapshot_paths", [])
    times = outputs.get("snapshot_times", [])
    if len(paths) != len(times):
        raise ConfigError("snapshot_paths and snapshot_times must have equal length")
    config.setdefault("seed", 0)
    return config


def _resolve_outputs(config: dict, out_dir: str | None) -> dict:
    base = Path(out_dir) if out_dir else Path(".")
    resolved = {}
    outputs = config.get("outputs", {})
    for key in ("csv_path", "summary_json_path"):
        if outputs.get(key):
            p = Path(outputs[key])
            resolved[key] = p if p.is_absolute() else base / p
    resolved["snapshots"] = []
    for p, t in zip(outputs.get("snapshot_paths", []), outputs.get("snapshot_times", [])):
        pp = Path(p)
        resolved["snapshots"].append((pp if pp.is_absolute() else base / pp, float(t)))
    for p in [resolved.get("csv_path"), resolved.get("summary_json_path")] + [
        s[0] for s in resolved["snapshots"]
    ]:
        if p is not None:
            try:
                p.parent.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise ConfigError(f"output path {p} is not writable: {exc}")
    return resolved


def _flatten(prefix: str, obj, into: list):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], into)
    else:
        into.append(f"{prefix}: {json.dumps(obj)}")


def provenance(config: dict) -> list[str]:
    lines: list[str] = []
    _flatten("", config, lines)
    return lines


def _grid_from(section: dict) -> _grid.Grid:
    return _grid.Grid(int(section["dim"]), int(section["n"]), float(section["half_width"]))


def _initial_from(section: dict):
    kind = section["kind"]
    if kind == "ground_state":
        return GroundStateInit(
            omega=float(section["omega"]),
            center=tuple(section["center"]) if section.get("center") else None,
            phase=float(section.get("phase", 0.0)),
            boost=tuple(section["boost"]) if section.get("boost") else None,
        )
    if kind == "gaussian":
        return GaussianInit(
            amplitude=float(section.get("amplitude", 1.0)),
            width=float(section.get("width", 1.0)),
            center=tuple(section["center"]) if section.get("center") else None,
            boost=tuple(section["boost"]) if section.get("boost") else None,
        )
    return SnapshotInit(path=section["path"])


def _perturbation_from(section: dict | None) -> Perturbation | None:
    if not section:
        return None
    return Perturbation(
        kind=section["kind"],
        delta=float(section["delta"]),
        center=tuple(section["center"]) if section.get("center") else None,
        width=float(section.get("width", 2.0)),
        mode=tuple(int(m) for m in section["mode"]) if section.get("mode") else None,
        renormalize=bool(section.get("renormalize", False)),
    )


class Assertions:
    def __init__(self):
        self.items: list[dict] = []

    def check(self, name: str, value, threshold, comparator: str = "<="):
        ok = {
            "<=": value <= threshold,
            ">=": value >= threshold,
            "<": value < threshold,
            ">": value > threshold,
            "==": value == threshold,
        }[comparator]
        self.items.append(
            {
                "name": name,
                "value": value,
                "threshold": threshold,
                "comparator": comparator,
                "pass": bool(ok),
            }
        )
        return ok

    @property
    def all_pass(self) -> bool:
        return all(item["pass"] for item in self.items)


def _trajectory_rows(traj, dim: int):
    header = ["t", "mass", "energy", "kinetic", "potential", "px", "py", "quartic", "h1_bound"]
    if traj.orbit_distances is not None:
        header.append("orbit_distance")
    if traj.pc_quantity is not None:
        header.append("pc_quantity")
    rows = []
    for i, (t, s) in enumerate(zip(traj.times, traj.samples)):
        px = s.momentum[0]
        py = s.momentum[1] if dim == 2 else 0.0
        row = [t, s.mass, s.energy, s.kinetic, s.potential, px, py, s.quartic, traj.h1_bound]
        if traj.orbit_distances is not None:
            row.append(traj.orbit_distances[i])
        if traj.pc_quantity is not None:
            row.append(traj.pc_quantity[i])
        rows.append(row)
    return header, rows


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------


def _run_ground(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    if model.omega is None:
        raise ConfigError("ground experiment requires model.omega")
    tol = float(config.get("tol", 1e-7))
    profile = find_ground_state(model, tol=tol)
    obs = radial_observables(profile)
    r1, r2, rv = profile.residuals
    asserts.check("pohozaev_r1", abs(r1), 1e-6)
    asserts.check("pohozaev_r2", abs(r2), 1e-6)
    asserts.check("pohozaev_rV", abs(rv), 1e-6)
    kappa = math.sqrt(2.0 * model.omega)
    asserts.check("tail_rate_ratio", abs(profile.tail_rate / kappa - 1.0), 0.05)
    metrics = {
        "amplitude": profile.center_value,
        "mass": obs.mass,
        "energy": obs.energy,
        "action": obs.action,
        "tail_rate": profile.tail_rate,
        "pohozaev_r1": r1,
        "pohozaev_r2": r2,
        "pohozaev_rV": rv,
    }
    if model.family is Family.CUBIC_LOG_2D:
        _, sqz = amplitude_roots(model)
        asserts.check("amplitude_below_sqrt_z_omega", profile.center_value, sqz, "<")
        metrics["sqrt_z_omega"] = sqz
    if outputs.get("csv_path"):
        comments = provenance(config) + [
            f"tail_rate: {format_float(profile.tail_rate)}",
            f"tail_coeff: {format_float(profile.tail_coeff)}",
        ]
        rows = zip(profile.r_nodes, profile.values, profile.derivs)
        write_csv(outputs["csv_path"], comments, ["r", "phi", "dphi"], rows)
    return metrics


def _run_evolve(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    g = _grid_from(config["grid"])
    tsec = config["time"]
    cfg = EvolutionConfig(
        model=model,
        grid=g,
        dt=float(tsec["dt"]),
        t_final=float(tsec["t_final"]),
        sample_every=int(tsec.get("sample_every", 1)),
        initial=_initial_from(config["initial"]),
        perturbation=_perturbation_from(config.get("perturbation")),
        snapshot_times=tuple(t for _, t in outputs["snapshots"]),
    )
    traj = evolve(cfg)
    asserts.check("mass_drift", traj.mass_drift, 1e-11)
    asserts.check("energy_drift", traj.energy_drift, 1e-6)
    asserts.check("momentum_drift", traj.momentum_drift, 1e-9)
    _write_traj(config, outputs, traj, g, model)
    return {
        "mass_drift": traj.mass_drift,
        "energy_drift": traj.energy_drift,
        "momentum_drift": traj.momentum_drift,
        "h1_bound": traj.h1_bound,
        "sup_kinetic": max(s.kinetic for s in traj.samples),
    }


def _write_traj(config, outputs, traj, g, model, suffix=""):
    if outputs.get("csv_path"):
        path = outputs["csv_path"]
        if suffix:
            path = path.with_name(path.stem + suffix + path.suffix)
        header, rows = _trajectory_rows(traj, g.dim)
        write_csv(path, provenance(config), header, rows)
    for (snap_path, snap_t), (t, fld) in zip(outputs["snapshots"], traj.snapshots):
        write_snapshot(snap_path, fld, model, t)


def _run_stability(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    g = _grid_from(config["grid"])
    init = _initial_from(config["initial"])
    if not isinstance(init, GroundStateInit):
        raise ConfigError("stability experiment requires ground_state initial data")
    pert = _perturbation_from(config.get("perturbation"))
    if pert is None:
        raise ConfigError("stability experiment requires a perturbation")
    reference = find_ground_state(model, init.omega)
    tsec = config["time"]
    cfg = EvolutionConfig(
        model=model,
        grid=g,
        dt=float(tsec["dt"]),
        t_final=float(tsec["t_final"]),
        sample_every=int(tsec.get("sample_every", 1)),
        initial=init,
        perturbation=pert,
        reference=reference,
        track_orbit=True,
        snapshot_times=tuple(t for _, t in outputs["snapshots"]),
    )
    traj = evolve(cfg)
    sup_dist = max(traj.orbit_distances)
    asserts.check("sup_orbit_distance", sup_dist, 10.0 * pert.delta)
    asserts.check("mass_drift", traj.mass_drift, 1e-11)
    _write_traj(config, outputs, traj, g, model)
    return {
        "sup_orbit_distance": sup_dist,
        "initial_orbit_distance": traj.orbit_distances[0],
        "mass_drift": traj.mass_drift,
        "energy_drift": traj.energy_drift,
    }


def _run_minimize(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    g = _grid_from(config["grid"])
    rho = float(config["rho"])
    tol = float(config.get("tol", 1e-6))
    res = minimize_energy(rho, g, model, tol=tol, precondition=config.get("precondition"))
    mass = _grid.integrate(g, np.abs(res.field.values) ** 2)
    asserts.check("residual", res.residual, tol)
    asserts.check("mass_constraint", abs(mass - rho) / rho, 1e-12)
    if outputs["snapshots"]:
        write_snapshot(outputs["snapshots"][0][0], res.field, model, 0.0)
    elif outputs.get("csv_path"):
        # fall back to a 1-row CSV so the experiment always leaves an artifact
        write_csv(
            outputs["csv_path"],
            provenance(config),
            ["rho", "energy", "lagrange_omega", "residual", "iterations"],
            [[rho, res.energy, res.lagrange_omega, res.residual, float(res.iterations)]],
        )
    return {
        "rho": rho,
        "energy_min": res.energy,
        "lagrange_omega": res.lagrange_omega,
        "residual": res.residual,
        "iterations": res.iterations,
    }


def _run_sweep_mass(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    omegas = [float(w) for w in config["omega_list"]]
    rows, mass_q = mass_asymptotics_sweep(model.lam, omegas, tol=float(config.get("tol", 1e-9)))
    masses = [r.mass for r in rows]
    if len(masses) > 1:
        decreasing = all(a > b for a, b in zip(masses, masses[1:]))
        asserts.check("mass_strictly_decreasing", 1.0 if decreasing else 0.0, 1.0, ">=")
    if outputs.get("csv_path"):
        comments = provenance(config) + [f"mass_Q: {format_float(mass_q)}"]
        write_csv(
            outputs["csv_path"],
            comments,
            ["omega", "mass", "ratio", "ratio_log"],
            [[r.omega, r.mass, r.ratio, r.ratio_log] for r in rows],
        )
    return {
        "mass_Q": mass_q,
        "first_mass": masses[0],
        "last_mass": masses[-1],
        "n_points": len(rows),
    }


def _run_convexity1d(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    omegas = [float(w) for w in config["omega_grid"]]
    rows = action_convexity_scan(model.lam, omegas, delta=float(config.get("fd_delta", 1e-4)))
    asserts.check("dpp_min", min(r.dpp_quad for r in rows), 0.0, ">")
    fd_rel = [
        abs(r.dpp_fd / r.dpp_quad - 1.0) for r in rows if r.dpp_fd is not None
    ]
    if fd_rel:
        asserts.check("dpp_fd_agreement", max(fd_rel), 0.01)
    if len(rows) > 1:
        inc = all(a.mass < b.mass for a, b in zip(rows, rows[1:]))
        asserts.check("mass_strictly_increasing", 1.0 if inc else 0.0, 1.0, ">=")
    if outputs.get("csv_path"):
        table = [
            [r.omega, r.dpp_quad, r.dpp_simplified,
             "" if r.dpp_fd is None else r.dpp_fd, r.mass, r.action]
            for r in rows
        ]
        write_csv(
            outputs["csv_path"],
            provenance(config),
            ["omega", "dpp_quad", "dpp_simplified", "dpp_fd", "mass", "action"],
            table,
        )
    return {
        "dpp_min": min(r.dpp_quad for r in rows),
        "dpp_max": max(r.dpp_quad for r in rows),
        "n_points": len(rows),
    }


def _run_contrast(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    if model.family is not Family.CUBIC_LOG_2D:
        raise ConfigError("contrast_blowup compares against the 2D cubic-log family")
    g = _grid_from(config["grid"])
    tsec = config["time"]
    deadline = float(config.get("blowup_deadline", 5.0))
    init = _initial_from(config["initial"])

    cubic = ModelParams(Family.PURE_CUBIC_2D, model.lam)
    cfg_cubic = EvolutionConfig(
        model=cubic,
        grid=g,
        dt=float(tsec["dt"]),
        t_final=deadline,
        sample_every=int(tsec.get("sample_every", 1)),
        initial=init,
        check_invariants=False,
    )
    blowup_time = math.inf
    try:
        traj_cubic = evolve(cfg_cubic)
    except BlowUpDetected as exc:
        blowup_time = exc.time
        traj_cubic = exc.trajectory
    asserts.check("blowup_before_deadline", blowup_time, deadline, "<")

    cfg_log = EvolutionConfig(
        model=model,
        grid=g,
        dt=float(tsec["dt"]),
        t_final=float(tsec["t_final"]),
        sample_every=int(tsec.get("sample_every", 1)),
        initial=init,
    )
    traj_log = evolve(cfg_log)
    sup_kin = max(s.kinetic for s in traj_log.samples)
    asserts.check("kinetic_below_apriori_bound", sup_kin, traj_log.h1_bound + 1e-6)
    _write_traj(config, outputs, traj_log, g, model)
    _write_traj(config, outputs, traj_cubic, g, cubic, suffix="_purecubic")
    return {
        "blowup_time": blowup_time,
        "sup_kinetic_log": sup_kin,
        "h1_bound": traj_log.h1_bound,
    }


def _run_pseudoconformal(config, outputs, asserts: Assertions):
    model = model_from_config(config["model"])
    g = _grid_from(config["grid"])
    tsec = config["time"]

    def one(dt, sample_every):
        cfg = EvolutionConfig(
            model=model,
            grid=g,
            dt=dt,
            t_final=float(tsec["t_final"]),
            sample_every=sample_every,
            initial=_initial_from(config["initial"]),
            monitor_pc=True,
        )
        traj = evolve(cfg)
        return traj, pseudoconformal_residual(traj, model)

    dt = float(tsec["dt"])
    sample_every = int(tsec.get("sample_every", 1))
    traj, residual = one(dt, sample_every)
    rhs0 = float(pc_identity_rhs(traj, model)[0])
    asserts.check("pc_residual", residual, 1e-4)
    asserts.check("pc_rhs_zero_at_t0", rhs0, 0.0, "==")
    metrics = {"pc_residual": residual, "pc_rhs_t0": rhs0}
    if config.get("refine_dt", True):
        _, residual_half = one(dt / 2.0, sample_every * 2)
        ratio = residual / residual_half
        asserts.check("pc_residual_halving_ratio", ratio, 3.0, ">=")
        metrics["pc_residual_half_dt"] = residual_half
        metrics["pc_residual_ratio"] = ratio
    _write_traj(config, outputs, traj, g, model)
    return metrics


_RUNNERS = {
    "ground": _run_ground,
    "evolve": _run_evolve,
    "stability": _run_stability,
    "minimize": _run_minimize,
    "sweep_mass": _run_sweep_mass,
    "convexity1d": _run_convexity1d,
    "contrast_blowup": _run_contrast,
    "pseudoconformal": _run_pseudoconformal,
}


def run_config(config: dict, out_dir: str | None = None) -> tuple[int, dict]:
    """Validate, execute, write artifacts; returns (exit_code, summary)."""
    try:
        config = validate_config(copy.deepcopy(config))
        outputs = _resolve_outputs(config, out_dir)
    except (LogNLSError, KeyError, TypeError, ValueError) as exc:
        code = type(exc).__name__ if isinstance(exc, LogNLSError) else "ConfigError"
        summary = {"pass": False, "error": {"code": code, "message": str(exc)}}
        try:
            failed_outputs = _resolve_outputs(config if isinstance(config, dict) else {}, out_dir)
            if failed_outputs.get("summary_json_path"):
                Path(failed_outputs["summary_json_path"]).write_text(
                    json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
                )
        except Exception:
            pass
        return 2, summary

    summary = {"experiment": config["experiment"], "config": config}
    asserts = Assertions()
    code = 0
    try:
        metrics = _RUNNERS[config["experiment"]](config, outputs, asserts)
        summary["metrics"] = metrics
        summary["error"] = None
    except LogNLSError as exc:
        summary["error"] = {"code": type(exc).__name__, "message": str(exc)}
        code = 2 if isinstance(exc, ConfigError) else 3
    except (KeyError, TypeError, ValueError) as exc:
        summary["error"] = {"code": "ConfigError", "message": str(exc)}
        code = 2
    summary["assertions"] = asserts.items
    summary["pass"] = asserts.all_pass and summary["error"] is None
    if code == 0 and not summary["pass"]:
        code = 1
    if outputs.get("summary_json_path"):
        Path(outputs["summary_json_path"]).write_text(
            json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return code, summary


# ---------------------------------------------------------------------------
# parameter sweeps
# ---------------------------------------------------------------------------

_INHERENT_LISTS = {
    ("omega_list",),
    ("omega_grid",),
    ("outputs", "snapshot_paths"),
    ("outputs", "snapshot_times"),
    ("initial", "center"),
    ("initial", "boost"),
    ("perturbation", "center"),
    ("perturbation", "mode"),
}


def _find_swept_leaf(obj, prefix=()):
    found = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            found.extend(_find_swept_leaf(v, prefix + (k,)))
    elif isinstance(obj, list) and prefix not in _INHERENT_LISTS:
        found.append(prefix)
    return found


def _set_leaf(obj, path, value):
    for key in path[:-1]:
        obj = obj[key]
    obj[path[-1]] = value


def _get_leaf(obj, path):
    for key in path:
        obj = obj[key]
    return obj


def run_sweep(config: dict, out_dir: str | None = None) -> tuple[int, dict]:
    try:
        base = copy.deepcopy(config)
        leaves = _find_swept_leaf(base)
        if len(leaves) != 1:
            raise ConfigError(
                f"sweep needs exactly one list-valued parameter, found {len(leaves)}"
            )
        leaf = leaves[0]
        values = _get_leaf(base, leaf)
        aggregate_csv = base.get("outputs", {}).get("csv_path")
        if not aggregate_csv:
            raise ConfigError("sweep requires outputs.csv_path for the aggregate table")
    except LogNLSError as exc:
        return 2, {"pass": False, "error": {"code": type(exc).__name__, "message": str(exc)}}

    results = []
    metric_keys: list[str] = []
    for i, value in enumerate(values):
        point = copy.deepcopy(base)
        _set_leaf(point, leaf, value)
        pout = point.setdefault("outputs", {})
        for key in ("csv_path", "summary_json_path"):
            if pout.get(key):
                p = Path(pout[key])
                pout[key] = str(p.with_name(f"{p.stem}_pt{i:03d}{p.suffix}"))
        pout["snapshot_paths"] = [
            str(Path(p).with_name(f"{Path(p).stem}_pt{i:03d}{Path(p).suffix}"))
            for p in pout.get("snapshot_paths", [])
        ]
        code, summary = run_config(point, out_dir)
        results.append((value, code, summary))
        if code == 0 and not metric_keys:
            metric_keys = sorted(
                k for k, v in summary.get("metrics", {}).items()
                if isinstance(v, (int, float))
            )

    header = ["point", ".".join(leaf), "pass", "error"] + metric_keys
    rows = []
    for i, (value, code, summary) in enumerate(results):
        err = summary.get("error")
        row = [
            float(i),
            value if isinstance(value, (int, float)) else json.dumps(value),
            1.0 if (code == 0) else 0.0,
            err["code"] if err else "",
        ]
        metrics = summary.get("metrics", {})
        row.extend(metrics.get(k, "") for k in metric_keys)
        rows.append(row)
    base_dir = Path(out_dir) if out_dir else Path(".")
    agg = Path(aggregate_csv)
    agg_path = agg if agg.is_absolute() else base_dir / agg
    agg_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(agg_path, provenance(config), header, rows)
    exit_code = 0 if all(code == 0 for _, code, _ in results) else 1
    return exit_code, {
        "pass": exit_code == 0,
        "points": len(results),
        "failures": sum(1 for _, code, _ in results if code != 0),
    }


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_QUICK_FLAGS = ("lam", "omega", "n", "half_width", "dt", "t_final", "out")


def _quick_config(args) -> dict:
    if args.out is None:
        raise ConfigError("quick runs need --out PREFIX for artifacts")
    experiment = args.experiment or "ground"
    model = {"family": "cubic_log_2d", "lambda": args.lam if args.lam is not None else 1.0}
    if args.omega is not None:
        model["omega"] = args.omega
    config: dict = {
        "experiment": experiment,
        "model": model,
        "outputs": {
            "csv_path": f"{args.out}.csv",
            "summary_json_path": f"{args.out}_summary.json",
        },
    }
    if experiment in ("evolve", "stability", "pseudoconformal", "contrast_blowup"):
        config["grid"] = {
            "dim": 2,
            "n": args.n if args.n is not None else 256,
            "half_width": args.half_width if args.half_width is not None else 20.0,
        }
        config["time"] = {
            "dt": args.dt if args.dt is not None else 1e-3,
            "t_final": args.t_final if args.t_final is not None else 1.0,
            "sample_every": 10,
        }
        if experiment == "contrast_blowup":
            config["initial"] = {"kind": "gaussian", "amplitude": 3.0, "width": 1.5}
        else:
            omega = model.get("omega")
            if omega is None:
                raise ConfigError(f"--omega required for quick {experiment} runs")
            config["initial"] = {"kind": "ground_state", "omega": omega}
            del config["model"]["omega"]
    return config


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lognls",
        description="Deterministic experiments for the log-modified NLS laboratory.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None, help="JSON experiment config")
        p.add_argument("--out-dir", type=str, default=None, help="base directory for relative outputs")
        if name == "run":
            p.add_argument("--experiment", choices=EXPERIMENTS, default=None)
            p.add_argument("--lambda", dest="lam", type=float, default=None)
            p.add_argument("--omega", type=float, default=None)
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--half-width", dest="half_width", type=float, default=None)
            p.add_argument("--dt", type=float, default=None)
            p.add_argument("--t-final", dest="t_final", type=float, default=None)
            p.add_argument("--out", type=str, default=None)
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            quick_used = args.command == "run" and (
                args.experiment is not None
                or any(getattr(args, f, None) is not None for f in _QUICK_FLAGS)
            )
            if quick_used:
                raise ConfigError("--config conflicts with quick-run flags; pass one or the other")
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        elif args.command == "run":
            config = _quick_config(args)
        else:
            raise ConfigError("sweep requires --config")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "run":
        code, summary = run_config(config, args.out_dir)
    else:
        code, summary = run_sweep(config, args.out_dir)
    if summary.get("error"):
        print(f"error[{summary['error']['code']}]: {summary['error']['message']}", file=sys.stderr)
    for item in summary.get("assertions", []):
        status = "PASS" if item["pass"] else "FAIL"
        print(f"{status} {item['name']}: {item['value']:.6g} {item['comparator']} {item['threshold']:.6g}")
    return code


if __name__ == "__main__":
    sys.exit(main())
