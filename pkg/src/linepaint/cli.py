"""Command-line front end.

Subcommands:
  solve       run the optimizer on a scenario file or preset
  audit       score a given arm assignment and print the constraint report
  ablate      run the method-combination study over several RNG seeds
  make-scene  write a preset scenario to a YAML file

Exit codes: 0 = feasible plan found / success, 1 = best plan infeasible,
2 = configuration or input error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import yaml

from . import ga
from .evaluation import evaluate_assignment
from .genotype import UpperSolution, decode
from .lower_sim import ACTION_NAMES, simulate
from .presets import PRESET_NAMES, preset_scene
from .render import save_svg
from .scene import ScenarioError, VehicleScene, load_scene, save_scene, scene_to_dict

# ablation method ids -> (seeding, bottom-up repair, few-arms repair)
METHODS = {
    "M1": (False, False, False),
    "M2": (True, False, False),
    "M3": (False, True, False),
    "M4": (False, False, True),
    "M5": (True, True, False),
    "M6": (True, False, True),
    "M7": (False, True, True),
    "M8": (True, True, True),
}


def _config_hash(scene: VehicleScene, ga_cfg: ga.GaConfig) -> str:
    doc = {
        "scene": scene_to_dict(scene),
        "ga": {k: getattr(ga_cfg, k) for k in ga.GaConfig.__dataclass_fields__},
    }
    blob = yaml.safe_dump(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _load(args) -> VehicleScene:
    if getattr(args, "scenario", None):
        return load_scene(args.scenario)
    return preset_scene(args.preset, seed=getattr(args, "scene_seed", 1))


def _add_scene_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--scenario", help="scenario YAML file")
    g.add_argument("--preset", choices=PRESET_NAMES, help="built-in scenario")
    p.add_argument("--scene-seed", type=int, default=1, help="preset geometry seed")


def _add_ga_args(p):
    p.add_argument("--seed", type=int, default=0, help="optimizer RNG seed")
    p.add_argument("--pop", type=int, default=100, help="population size")
    p.add_argument("--gens", type=int, default=50, help="number of generations")
    p.add_argument("--workers", type=int, default=1, help="evaluation worker processes")
    p.add_argument("--tournament", type=int, default=3, help="tournament size")
    p.add_argument("--mutation-rate", type=float, default=0.02)
    p.add_argument("--no-seeding", action="store_true", help="random initial population")
    p.add_argument("--no-repair-bottom-up", action="store_true")
    p.add_argument("--no-repair-few-arms", action="store_true")


def _ga_config(args, **overrides) -> ga.GaConfig:
    kw = dict(
        n_pop=args.pop,
        n_gen=args.gens,
        n_t=args.tournament,
        mutation_rate=args.mutation_rate,
        seed=args.seed,
        use_seeding=not args.no_seeding,
        use_repair_bottom_up=not args.no_repair_bottom_up,
        use_repair_few_arms=not args.no_repair_few_arms,
        workers=args.workers,
    )
    kw.update(overrides)
    return ga.GaConfig(**kw)


def _write_trajectory_csv(path, traj):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["arm", "tick", "x_mm", "y_mm", "z_mm", "action", "segment"])
        for i, arm_id in enumerate(traj.arm_ids):
            for t in range(traj.positions.shape[1]):
                x, y, z = traj.positions[i, t]
                w.writerow(
                    [
                        arm_id,
                        t,
                        f"{x:.3f}",
                        f"{y:.3f}",
                        f"{z:.3f}",
                        ACTION_NAMES[traj.actions[i, t]],
                        int(traj.seg_ids[i, t]),
                    ]
                )


def _write_trace_csv(path, trace):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["generation", "best_objective", "mean_objective", "best_feasible"])
        for rec in trace.generations:
            w.writerow(
                [
                    rec.generation,
                    f"{rec.best_objective:.6f}",
                    f"{rec.mean_objective:.6f}",
                    int(rec.best_feasible),
                ]
            )


def cmd_solve(args) -> int:
    scene = _load(args)
    ga_cfg = _ga_config(args)
    chash = _config_hash(scene, ga_cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    t0 = time.perf_counter()
    result = ga.run(scene, scene.config, ga_cfg)
    elapsed = time.perf_counter() - t0

    assign = decode(result.best, scene)
    traj, _ = simulate(assign, scene, scene.config)
    report = result.report

    save_scene(scene, out / "scenario.yaml")
    (out / "best_genotype.json").write_text(
        json.dumps(
            {
                "format_version": 1,
                "config_hash": chash,
                "seed": ga_cfg.seed,
                "genes": list(result.best.genes),
                "objective": report.objective,
                "strong_feasible": report.strong_feasible,
            },
            indent=2,
        )
    )
    (out / "report.json").write_text(
        json.dumps({"config_hash": chash, "seed": ga_cfg.seed, **report.to_dict()}, indent=2)
    )
    _write_trajectory_csv(out / "trajectory.csv", traj)
    _write_trace_csv(out / "trace.csv", result.trace)
    save_svg(traj, scene, out / "routes.svg")
    if args.dump_seeds:
        from .seeding import build_seed_population
        import numpy as np

        seeds = build_seed_population(
            scene, scene.config, ga_cfg.n_pop, np.random.default_rng(ga_cfg.seed)
        )
        (out / "seeds.json").write_text(
            json.dumps({"format_version": 1, "seeds": [list(s.genes) for s in seeds]})
        )
    (out / "run_info.txt").write_text(
        f"{started}\n"
        f"config_hash: {chash}\n"
        f"scene: {scene.name} ({scene.n_segs} one-side segments, "
        f"{scene.n_arms_side} arms/side)\n"
        f"ga: pop={ga_cfg.n_pop} gens={ga_cfg.n_gen} seed={ga_cfg.seed} "
        f"workers={ga_cfg.workers}\n"
        f"elapsed_s: {elapsed:.2f}\n"
        f"objective: {report.objective:.6f}\n"
        f"strong_feasible: {report.strong_feasible}\n"
    )
    print(
        f"best objective {report.objective:.3f} "
        f"(work time {report.work_time_max:.2f}s), "
        f"{'feasible' if report.strong_feasible else 'INFEASIBLE'}; "
        f"outputs in {out}"
    )
    for note in report.weak_notes:
        print(f"note: {note}")
    return 0 if report.strong_feasible else 1


def cmd_audit(args) -> int:
    scene = _load(args)
    doc = json.loads(Path(args.assignment).read_text())
    if doc.get("format_version", 1) != 1:
        raise ScenarioError(f"unsupported assignment format_version {doc.get('format_version')}")
    if "genes" in doc:
        sol = UpperSolution(tuple(int(g) for g in doc["genes"]))
        assign = decode(sol, scene)
    elif "arms" in doc:
        rows = sorted(doc["arms"], key=int)
        if len(rows) != scene.n_arms_side:
            raise ScenarioError(
                f"assignment has {len(rows)} arms, scene has {scene.n_arms_side} per side"
            )
        assign = tuple(tuple(int(s) for s in doc["arms"][r]) for r in rows)
    else:
        raise ScenarioError("assignment file needs a 'genes' or 'arms' field")
    known = set(range(1, scene.n_segs + 1))
    flat = [s for row in assign for s in row]
    unknown = sorted(set(flat) - known)
    if unknown:
        raise ScenarioError(f"unknown segment ids {unknown}")
    if len(flat) != len(set(flat)):
        raise ScenarioError("segment assigned to more than one arm")

    report, _ = evaluate_assignment(assign, scene, scene.config)
    payload = report.to_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2))
    print(json.dumps(payload, indent=2))
    return 0 if report.strong_feasible else 1


def cmd_ablate(args) -> int:
    scene = _load(args)
    methods = [m.strip().upper() for m in args.methods.split(",")]
    for m in methods:
        if m not in METHODS:
            raise ScenarioError(f"unknown method {m!r} (expected M1..M8)")
    seeds = [int(s) for s in args.seeds.split(",")]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    rows = []
    curves = []
    for method in methods:
        seeding, r2, r3 = METHODS[method]
        for seed in seeds:
            ga_cfg = _ga_config(
                args,
                seed=seed,
                use_seeding=seeding,
                use_repair_bottom_up=r2,
                use_repair_few_arms=r3,
            )
            result = ga.run(scene, scene.config, ga_cfg)
            feas_gen = next(
                (r.generation for r in result.trace.generations if r.best_feasible), -1
            )
            rows.append(
                {
                    "method": method,
                    "seed": seed,
                    "feasible_generation": feas_gen,
                    "final_objective": result.report.objective,
                    "final_feasible": int(result.report.strong_feasible),
                }
            )
            for rec in result.trace.generations:
                curves.append((method, seed, rec.generation, rec.best_objective))
            print(
                f"{method} seed={seed}: objective {result.report.objective:.3f}, "
                f"feasible at gen {feas_gen}"
            )

    with open(out / "ablation.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    with open(out / "curves.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "seed", "generation", "best_objective"])
        for row in curves:
            w.writerow([row[0], row[1], row[2], f"{row[3]:.6f}"])
    print(f"ablation results in {out}")
    return 0


def cmd_make_scene(args) -> int:
    scene = preset_scene(args.preset, seed=args.scene_seed)
    save_scene(scene, args.out)
    print(f"wrote {args.preset} scenario ({scene.n_segs} one-side segments) to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linepaint",
        description="Hierarchical route planning for multi-arm painting on a moving line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the optimizer")
    _add_scene_args(p)
    _add_ga_args(p)
    p.add_argument("--out", default="runs/latest", help="output directory")
    p.add_argument("--dump-seeds", action="store_true", help="also write seeds.json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("audit", help="score a given assignment")
    _add_scene_args(p)
    p.add_argument("--assignment", required=True, help="JSON with 'genes' or 'arms'")
    p.add_argument("--out", help="also write the report JSON here")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("ablate", help="method-combination study")
    _add_scene_args(p)
    _add_ga_args(p)
    p.add_argument("--methods", default="M1,M2,M3,M4,M5,M6,M7,M8")
    p.add_argument("--seeds", default="0,1,2,3,4", help="comma-separated RNG seeds")
    p.add_argument("--out", default="runs/ablation", help="output directory")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("make-scene", help="write a preset scenario file")
    p.add_argument("--preset", choices=PRESET_NAMES, required=True)
    p.add_argument("--scene-seed", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_scene)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, FileNotFoundError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
