"""Command line front end: config parsing, run dispatch, and table output.

Subcommands
-----------
simulate   run one scenario from a YAML config and write a trajectory CSV
           plus a summary YAML carrying the full resolved provenance
stability  tabulate analytic neutral-stability lines a*(h)
eigcheck   evaluate the eigenvalue oracle, pointwise or on a grid, against
           the analytic criterion
sweep      re-run one config along an axis of overridden values
ovcurve    tabulate the optimal-velocity curve and its fundamental diagram

Exit codes: 0 success, 2 configuration or schema error, 3 collision abort,
4 non-finite numerics.  Outputs use 17 significant digits so byte-identical
files certify determinism.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import __version__
from .metrics import RunSummary, summarize
from .models import ControlParams, ModelKind, SafetyParams
from .ovfunc import OVParams, ov
from .scenario import (
    CONNECTIVITY_KINDS,
    ConfigError,
    PlatoonSpec,
    ScenarioConfig,
    build_evenly_mixed,
    build_segregated,
    build_uniform,
)
from .sim import CollisionError, NumericsError, RingRoad, SimConfig, Trajectory, ring_gaps, run
from .stability import StabilityQuery, classify, crit_noconn, crit_twoway, eig_oracle, neutral_line

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COLLISION = 3
EXIT_NUMERIC = 4

TRAJECTORY_COLUMNS = (
    "time_s",
    "platoon_id",
    "index_in_platoon",
    "global_index",
    "position_m",
    "speed_mps",
    "accel_mps2",
    "headway_m",
)

STABILITY_COLUMNS = ("model", "size", "p", "t_d", "h_m", "a_star")

EIGCHECK_COLUMNS = (
    "model",
    "sizes",
    "m",
    "h_m",
    "a",
    "p",
    "t_d",
    "max_re",
    "a_star",
    "analytic_stable",
    "oracle_stable",
    "agree",
    "excluded",
    "error",
)

SWEEP_INDEX_COLUMNS = (
    "point",
    "axis",
    "value",
    "status",
    "stabilized",
    "stabilization_time_s",
    "final_max_headway_dev_m",
    "trajectory",
    "summary",
)

OVCURVE_COLUMNS = ("headway_m", "speed_mps", "density_veh_per_m", "flow_veh_per_s")

_KIND_TO_CONNECTIVITY = {kind: name for name, kind in CONNECTIVITY_KINDS.items()}
_KIND_TO_CONNECTIVITY[ModelKind.HDV_OVM] = "none"

_MODEL_CHOICES = {
    "none": ModelKind.LEADER_NO_CONNECTION,
    "front": ModelKind.LEADER_FRONT_CONNECTED,
    "two_way": ModelKind.LEADER_TWO_WAY_CONNECTED,
}


def _fmt(x) -> str:
    """One cell: ints verbatim, floats at full round-trip precision."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return "" if x is None else str(x)


def _write_csv(path: Path, columns: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(",".join(columns) + "\n")
        for row in rows:
            f.write(",".join(_fmt(cell) for cell in row) + "\n")


# ---------------------------------------------------------------------------
# config document


_SECTION_KEYS = {
    "ring": {"length_m", "n_vehicles"},
    "ov": {"h_s", "h_f", "v_f"},
    "control": {"a", "p", "t_d"},
    "safety": {"a_m", "a_b", "tau", "l"},
    "sim": {"dt", "horizon_s", "record_every"},
}
_TOP_KEYS = set(_SECTION_KEYS) | {"seed", "perturbation_m", "platoons"}
_PLATOON_KEYS = {
    "uniform": {"mode", "size", "count", "connectivity"},
    "segregated": {"mode", "size", "count", "hdvs", "connectivity"},
    "evenly_mixed": {"mode", "size", "hdv_followers", "connectivity"},
    "explicit": {"mode", "list"},
}


def _check_keys(section: str, doc: dict, allowed: set) -> None:
    if not isinstance(doc, dict):
        raise ConfigError(f"section {section!r} must be a mapping, got {type(doc).__name__}")
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in {section}: {', '.join(sorted(map(str, unknown)))}; "
            f"allowed: {', '.join(sorted(allowed))}"
        )


def config_from_dict(doc: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a parsed config document."""
    _check_keys("top level", doc, _TOP_KEYS)
    ring_doc = doc.get("ring", {})
    _check_keys("ring", ring_doc, _SECTION_KEYS["ring"])
    ov_doc = doc.get("ov", {})
    _check_keys("ov", ov_doc, _SECTION_KEYS["ov"])
    control_doc = doc.get("control", {})
    _check_keys("control", control_doc, _SECTION_KEYS["control"])
    safety_doc = doc.get("safety", {})
    _check_keys("safety", safety_doc, _SECTION_KEYS["safety"])
    sim_doc = doc.get("sim", {})
    _check_keys("sim", sim_doc, _SECTION_KEYS["sim"])

    try:
        ring = RingRoad(
            length_m=float(ring_doc.get("length_m", 2640.0)),
            n_vehicles=int(ring_doc.get("n_vehicles", 120)),
        )
        ovp = OVParams(
            h_s=float(ov_doc.get("h_s", 7.0)),
            h_f=float(ov_doc.get("h_f", 37.0)),
            v_f=float(ov_doc.get("v_f", 20.0)),
        )
        safety = SafetyParams(
            a_m=float(safety_doc.get("a_m", 3.0)),
            a_b=float(safety_doc.get("a_b", -8.0)),
            tau=float(safety_doc.get("tau", 4.0)),
            l=float(safety_doc.get("l", 5.0)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if "platoons" not in doc:
        raise ConfigError("config needs a 'platoons' section")
    pl = doc["platoons"]
    if not isinstance(pl, dict) or "mode" not in pl:
        raise ConfigError("'platoons' must be a mapping with a 'mode' key")
    mode = pl["mode"]
    if mode not in _PLATOON_KEYS:
        raise ConfigError(
            f"unknown platoons mode {mode!r}; one of {', '.join(sorted(_PLATOON_KEYS))}"
        )
    _check_keys("platoons", pl, _PLATOON_KEYS[mode])

    common = dict(
        seed=doc.get("seed", 0),
        a=float(control_doc.get("a", 0.6)),
        p=float(control_doc.get("p", 0.3)),
        t_d=float(control_doc.get("t_d", 0.0)),
        ring=ring,
        ovp=ovp,
        safety=safety,
        dt=float(sim_doc.get("dt", 0.1)),
        horizon=float(sim_doc.get("horizon_s", 4000.0)),
        record_every=int(sim_doc.get("record_every", 1)),
        perturbation=float(doc.get("perturbation_m", 2.5)),
    )

    def _conn(d) -> str:
        c = d.get("connectivity", "none")
        if c not in CONNECTIVITY_KINDS:
            raise ConfigError(
                f"unknown connectivity {c!r}; one of {', '.join(sorted(CONNECTIVITY_KINDS))}"
            )
        return c

    try:
        if mode == "uniform":
            return build_uniform(int(pl["count"]), int(pl["size"]), _conn(pl), **common)
        if mode == "segregated":
            return build_segregated(
                int(pl["size"]), int(pl["count"]), int(pl["hdvs"]), _conn(pl), **common
            )
        if mode == "evenly_mixed":
            return build_evenly_mixed(int(pl["size"]), int(pl["hdv_followers"]), _conn(pl), **common)
        entries = pl.get("list")
        if not isinstance(entries, list) or not entries:
            raise ConfigError("explicit platoons need a non-empty 'list'")
        platoons = []
        for i, entry in enumerate(entries):
            _check_keys(f"platoons.list[{i}]", entry, {"size", "connectivity"})
            platoons.append(
                PlatoonSpec(size=int(entry["size"]), kind=CONNECTIVITY_KINDS[_conn(entry)])
            )
        config = ScenarioConfig(
            ring=ring,
            platoons=tuple(platoons),
            control=ControlParams(a=common["a"], p=common["p"], t_d=common["t_d"]),
            safety=safety,
            ov=ovp,
            sim=SimConfig(
                dt=common["dt"], horizon=common["horizon"], record_every=common["record_every"]
            ),
            seed=common["seed"],
            perturbation=common["perturbation"],
        )
        config.validate()
        return config
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed platoons section: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ScenarioConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    with open(p) as f:
        try:
            doc = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config does not parse: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping at the top level")
    return config_from_dict(doc)


def resolved_config_dict(config: ScenarioConfig) -> dict:
    """The exact config document that reproduces this run (explicit platoons)."""
    return {
        "ring": {
            "length_m": float(config.ring.length_m),
            "n_vehicles": int(config.ring.n_vehicles),
        },
        "ov": {"h_s": float(config.ov.h_s), "h_f": float(config.ov.h_f), "v_f": float(config.ov.v_f)},
        "control": {
            "a": float(config.control.a),
            "p": float(config.control.p),
            "t_d": float(config.control.t_d),
        },
        "safety": {
            "a_m": float(config.safety.a_m),
            "a_b": float(config.safety.a_b),
            "tau": float(config.safety.tau),
            "l": float(config.safety.l),
        },
        "sim": {
            "dt": float(config.sim.dt),
            "horizon_s": float(config.sim.horizon),
            "record_every": int(config.sim.record_every),
        },
        "seed": int(config.seed),
        "perturbation_m": float(config.perturbation),
        "platoons": {
            "mode": "explicit",
            "list": [
                {"size": int(sp.size), "connectivity": _KIND_TO_CONNECTIVITY[sp.kind]}
                for sp in config.platoons
            ],
        },
    }


# ---------------------------------------------------------------------------
# bundle serialization


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """One row per (recorded step, vehicle); headway is the wrapped gap ahead."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ring = traj.config.ring
    n = ring.n_vehicles
    with open(path, "w", newline="\n") as f:
        f.write(",".join(TRAJECTORY_COLUMNS) + "\n")
        for r, t in enumerate(traj.times):
            gaps = ring_gaps(ring, traj.pos[r])
            ts = f"{float(t):.17g}"
            pos, vel, acc = traj.pos[r], traj.vel[r], traj.acc[r]
            for i in range(n):
                f.write(
                    f"{ts},{traj.platoon_id[i]},{traj.index_in_platoon[i]},{i},"
                    f"{pos[i]:.17g},{vel[i]:.17g},{acc[i]:.17g},{gaps[i]:.17g}\n"
                )


def summary_dict(
    config: ScenarioConfig, summary: Optional[RunSummary], status: str
) -> dict:
    doc: dict = {"status": status}
    if summary is None:
        doc.update(
            {
                "stabilized": False,
                "stabilization_time_s": None,
                "final_max_headway_dev_m": None,
                "min_speed_mps": None,
                "max_speed_mps": None,
                "detector": None,
                "collision": None,
            }
        )
    else:
        doc.update(
            {
                "stabilized": bool(summary.stabilized),
                "stabilization_time_s": summary.stabilization_time_s,
                "final_max_headway_dev_m": float(summary.final_max_headway_dev_m),
                "min_speed_mps": float(summary.min_speed_mps),
                "max_speed_mps": float(summary.max_speed_mps),
                "detector": {
                    "epsilon_m": float(summary.detector_epsilon_m),
                    "hold_s": float(summary.detector_hold_s),
                    "final_window_s": float(summary.final_window_s),
                },
                "collision": None
                if summary.collision is None
                else {
                    "time_s": float(summary.collision.time_s),
                    "behind": int(summary.collision.behind),
                    "ahead": int(summary.collision.ahead),
                },
            }
        )
    doc["provenance"] = {
        "version": __version__,
        "seed": int(config.seed),
        "config": resolved_config_dict(config),
    }
    return doc


def write_summary_yaml(doc: dict, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        yaml.safe_dump(doc, f, sort_keys=False, default_flow_style=False)


def write_bundle(config: ScenarioConfig, traj: Optional[Trajectory], status: str,
                 out_dir, prefix: str) -> Tuple[Path, Path]:
    out = Path(out_dir)
    traj_path = out / f"{prefix}_trajectory.csv"
    summary_path = out / f"{prefix}_summary.yaml"
    if traj is not None and traj.times.size:
        write_trajectory_csv(traj, traj_path)
        summary = summarize(traj)
    else:
        _write_csv(traj_path, TRAJECTORY_COLUMNS, [])
        summary = None
    doc = summary_dict(config, summary, status)
    if summary is None and traj is not None and traj.collision is not None:
        doc["collision"] = {
            "time_s": float(traj.collision.time_s),
            "behind": int(traj.collision.behind),
            "ahead": int(traj.collision.ahead),
        }
    write_summary_yaml(doc, summary_path)
    return traj_path, summary_path


# ---------------------------------------------------------------------------
# subcommands


def _simulate_once(config: ScenarioConfig, out_dir, prefix: str) -> Tuple[int, dict]:
    """Run one scenario and write its bundle; returns (exit code, summary doc)."""
    try:
        traj = run(config)
    except CollisionError as exc:
        write_bundle(config, exc.trajectory, "collision", out_dir, prefix)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COLLISION, {}
    except NumericsError as exc:
        write_bundle(config, None, "numeric-failure", out_dir, prefix)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC, {}
    summary = summarize(traj)
    doc = summary_dict(config, summary, "ok")
    traj_path, summary_path = write_bundle(config, traj, "ok", out_dir, prefix)
    print(f"wrote {traj_path} and {summary_path}")
    return EXIT_OK, doc


def cmd_simulate(args) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
            config.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, doc = _simulate_once(config, args.out, args.prefix)
    if code == EXIT_OK:
        print(
            f"stabilized={doc['stabilized']} "
            f"stabilization_time_s={doc['stabilization_time_s']} "
            f"final_max_headway_dev_m={doc['final_max_headway_dev_m']}"
        )
    return code


def _parse_float_list(text: str) -> List[float]:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _parse_int_list(text: str) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def cmd_stability(args) -> int:
    model = _MODEL_CHOICES[args.model]
    ovp = OVParams(h_s=args.h_s, h_f=args.h_f, v_f=args.v_f)
    try:
        sizes = _parse_int_list(args.sizes)
        tds = _parse_float_list(args.td)
        rows = []
        for size in sizes:
            for t_d in tds:
                curve = neutral_line(
                    model, size, args.h_min, args.h_max, args.samples, ovp, p=args.p, t_d=t_d
                )
                p_eff = args.p if model == ModelKind.LEADER_TWO_WAY_CONNECTED else 0.0
                for h, a_star in curve:
                    rows.append((args.model, size, p_eff, t_d, float(h), float(a_star)))
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _write_csv(Path(args.out), STABILITY_COLUMNS, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _parse_grid(text: str) -> np.ndarray:
    """'lo:hi:count' -> linspace; a comma list is taken verbatim."""
    if ":" in text:
        lo, hi, count = text.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    return np.array(_parse_float_list(text))


def cmd_eigcheck(args) -> int:
    model = _MODEL_CHOICES[args.model]
    ovp = OVParams(h_s=args.h_s, h_f=args.h_f, v_f=args.v_f)
    rows = []
    tested = agreed = 0
    try:
        if args.sizes:
            sizes = _parse_int_list(args.sizes)
            if args.h is None or args.a is None:
                raise ValueError("pointwise eigcheck needs --h and --a")
            points = [(sizes, float(args.h), float(args.a))]
        else:
            if not args.n_list:
                raise ValueError("need either --sizes or --n-list")
            points = [
                ([n] * args.m, float(h), float(a))
                for n in _parse_int_list(args.n_list)
                for h in _parse_grid(args.h_grid)
                for a in _parse_grid(args.a_grid)
            ]
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    for sizes, h, a in points:
        uniform = len(set(sizes)) == 1
        size = sizes[0] if uniform else None
        a_star = None
        if uniform and size >= 2:
            a_star = (
                crit_noconn(size, h, ovp)
                if model == ModelKind.LEADER_NO_CONNECTION
                else crit_twoway(
                    size, h, args.p if model == ModelKind.LEADER_TWO_WAY_CONNECTED else 0.0,
                    args.td, ovp,
                )
            )
        try:
            max_re = eig_oracle(sizes, model, h, a, args.p, args.td, ovp)
            err = ""
        except Exception as exc:  # per-point failures must not abort the sweep
            max_re, err = None, str(exc)
        analytic_stable = None if a_star is None else a > a_star
        oracle_stable = None if max_re is None else max_re < 0.0
        excluded = (
            a_star is not None
            and math.isfinite(a_star)
            and a_star > 0
            and abs(a - a_star) <= args.margin * a_star
        )
        agree = None
        if analytic_stable is not None and oracle_stable is not None and not excluded:
            agree = analytic_stable == oracle_stable
            tested += 1
            agreed += agree
        rows.append(
            (
                args.model,
                ";".join(str(s) for s in sizes) if not uniform else size,
                len(sizes),
                h,
                a,
                args.p,
                args.td,
                max_re,
                a_star,
                analytic_stable,
                oracle_stable,
                agree,
                excluded,
                err,
            )
        )
    _write_csv(Path(args.out), EIGCHECK_COLUMNS, rows)
    if tested:
        print(
            f"agreement: {agreed}/{tested} = {100.0 * agreed / tested:.2f}% "
            f"({len(rows) - tested} point(s) excluded or unclassified)"
        )
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _set_by_path(doc: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = doc
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"axis path {dotted!r} crosses a non-mapping node")
    node[keys[-1]] = value


def _sweep_point(raw: dict, axis: str, value, out_dir: str, prefix: str) -> dict:
    doc = yaml.safe_load(yaml.safe_dump(raw))
    row = {
        "point": prefix,
        "axis": axis,
        "value": value,
        "status": EXIT_OK,
        "stabilized": None,
        "stabilization_time_s": None,
        "final_max_headway_dev_m": None,
        "trajectory": "",
        "summary": "",
    }
    try:
        _set_by_path(doc, axis, value)
        config = config_from_dict(doc)
    except ConfigError as exc:
        row["status"] = EXIT_CONFIG
        print(f"point {prefix}: config error: {exc}", file=sys.stderr)
        return row
    code, summary = _simulate_once(config, out_dir, prefix)
    row["status"] = code
    row["trajectory"] = str(Path(out_dir) / f"{prefix}_trajectory.csv")
    row["summary"] = str(Path(out_dir) / f"{prefix}_summary.yaml")
    if code == EXIT_OK:
        row["stabilized"] = summary["stabilized"]
        row["stabilization_time_s"] = summary["stabilization_time_s"]
        row["final_max_headway_dev_m"] = summary["final_max_headway_dev_m"]
    return row


def cmd_sweep(args) -> int:
    path = Path(args.config)
    if not path.is_file():
        print(f"config error: config file not found: {path}", file=sys.stderr)
        return EXIT_CONFIG
    with open(path) as f:
        raw = yaml.safe_load(f)
    if not isinstance(raw, dict):
        print("config error: config must be a mapping at the top level", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        raw["seed"] = args.seed
    values = [yaml.safe_load(tok) for tok in args.values.split(",") if tok.strip() != ""]
    if not values:
        print("config error: --values is empty", file=sys.stderr)
        return EXIT_CONFIG
    axis_slug = args.axis.replace(".", "_")
    tasks = [
        (raw, args.axis, value, args.out, f"{axis_slug}_{i}")
        for i, value in enumerate(values)
    ]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            rows = list(pool.map(_sweep_point, *zip(*tasks)))
    else:
        rows = [_sweep_point(*task) for task in tasks]
    index_path = Path(args.out) / "index.csv"
    _write_csv(
        index_path,
        SWEEP_INDEX_COLUMNS,
        ([row[c] for c in SWEEP_INDEX_COLUMNS] for row in rows),
    )
    failures = sum(1 for row in rows if row["status"] != EXIT_OK)
    print(f"wrote {index_path} ({len(rows)} points, {failures} failure(s))")
    return EXIT_OK


def cmd_ovcurve(args) -> int:
    try:
        ovp = OVParams(h_s=args.h_s, h_f=args.h_f, v_f=args.v_f)
        if args.h_min <= 0 or args.h_max <= args.h_min or args.samples < 2:
            raise ValueError("need 0 < h-min < h-max and at least 2 samples")
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    hs = np.linspace(args.h_min, args.h_max, args.samples)
    vs = ov(ovp, hs)
    rows = [(float(h), float(v), 1.0 / h, float(v) / h) for h, v in zip(hs, vs)]
    _write_csv(Path(args.out), OVCURVE_COLUMNS, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_ov_flags(sub) -> None:
    sub.add_argument("--h-s", type=float, default=7.0, help="standstill headway (m)")
    sub.add_argument("--h-f", type=float, default=37.0, help="free-flow headway (m)")
    sub.add_argument("--v-f", type=float, default=20.0, help="free-flow speed (m/s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platoonsim",
        description="Ring-road simulator and stability analyzer for platooned traffic",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="run one scenario and write its bundle")
    sim.add_argument("--config", required=True, help="YAML scenario config")
    sim.add_argument("--out", default=".", help="output directory")
    sim.add_argument("--prefix", default="run", help="output file prefix")
    sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    sim.set_defaults(func=cmd_simulate)

    stab = subs.add_parser("stability", help="tabulate neutral stability lines")
    stab.add_argument("--model", choices=sorted(_MODEL_CHOICES), required=True)
    stab.add_argument("--sizes", required=True, help="comma list of platoon sizes")
    stab.add_argument("--p", type=float, default=0.3, help="backward sensitivity factor")
    stab.add_argument("--td", default="0.0", help="comma list of delays (s)")
    stab.add_argument("--h-min", type=float, default=10.0)
    stab.add_argument("--h-max", type=float, default=34.0)
    stab.add_argument("--samples", type=int, default=200)
    stab.add_argument("--out", required=True, help="output CSV path")
    _add_ov_flags(stab)
    stab.set_defaults(func=cmd_stability)

    eig = subs.add_parser("eigcheck", help="eigenvalue oracle vs analytic criterion")
    eig.add_argument("--model", choices=sorted(_MODEL_CHOICES), default="none")
    eig.add_argument("--sizes", default=None, help="explicit platoon sizes for one point")
    eig.add_argument("--h", type=float, default=None, help="equilibrium headway for one point")
    eig.add_argument("--a", type=float, default=None, help="sensitivity for one point")
    eig.add_argument("--n-list", default=None, help="uniform sizes for a grid")
    eig.add_argument("--m", type=int, default=60, help="platoon count for the grid oracle")
    eig.add_argument("--h-grid", default="10:34:13", help="lo:hi:count or comma list")
    eig.add_argument("--a-grid", default="0.2:3.0:15", help="lo:hi:count or comma list")
    eig.add_argument("--p", type=float, default=0.3)
    eig.add_argument("--td", type=float, default=0.0)
    eig.add_argument("--margin", type=float, default=0.05,
                     help="relative half-width of the excluded band around a*")
    eig.add_argument("--out", required=True, help="output CSV path")
    _add_ov_flags(eig)
    eig.set_defaults(func=cmd_eigcheck)

    sweep = subs.add_parser("sweep", help="re-run one config along an override axis")
    sweep.add_argument("--config", required=True, help="YAML scenario template")
    sweep.add_argument("--axis", required=True, help="dotted config path, e.g. control.t_d")
    sweep.add_argument("--values", required=True, help="comma list of axis values")
    sweep.add_argument("--out", default=".", help="output directory")
    sweep.add_argument("--seed", type=int, default=None, help="override the template seed")
    sweep.add_argument("--parallel", type=int, default=1, help="concurrent points")
    sweep.set_defaults(func=cmd_sweep)

    ovc = subs.add_parser("ovcurve", help="tabulate the OV curve and fundamental diagram")
    ovc.add_argument("--h-min", type=float, default=0.5)
    ovc.add_argument("--h-max", type=float, default=60.0)
    ovc.add_argument("--samples", type=int, default=600)
    ovc.add_argument("--out", required=True, help="output CSV path")
    _add_ov_flags(ovc)
    ovc.set_defaults(func=cmd_ovcurve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
