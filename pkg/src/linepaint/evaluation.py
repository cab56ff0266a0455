"""Penalized objective and constraint audit.

The objective is the maximum arm work time plus penalties for operating-range
violations (time painted out of range, unvisited segments), arm-pair
collisions, and bottom-to-top order violations beyond the allowed slack.
Work-time overrun against the prescribed time is minimized and reported, not
penalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .genotype import ArmAssignment, UpperSolution, decode
from .lower_sim import SimMetrics, order_violation_counts, simulate
from .scene import ScenarioConfig, VehicleScene


@dataclass
class EvaluationReport:
    objective: float
    work_time_max: float
    penalty_range: float
    penalty_collision: float
    penalty_order: float
    order_violation_count: dict[int, int]
    strong_feasible: bool
    weak_notes: list[str] = field(default_factory=list)
    t_a: dict[int, float] = field(default_factory=dict)
    t_out: dict[int, float] = field(default_factory=dict)
    n_unvisits: dict[int, int] = field(default_factory=dict)
    t_col: float = 0.0

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "work_time_max": self.work_time_max,
            "penalty_range": self.penalty_range,
            "penalty_collision": self.penalty_collision,
            "penalty_order": self.penalty_order,
            "order_violation_count": {str(k): v for k, v in self.order_violation_count.items()},
            "strong_feasible": self.strong_feasible,
            "weak_notes": list(self.weak_notes),
            "t_a": {str(k): v for k, v in self.t_a.items()},
            "t_out": {str(k): v for k, v in self.t_out.items()},
            "n_unvisits": {str(k): v for k, v in self.n_unvisits.items()},
            "t_col": self.t_col,
        }


def range_penalty(metrics: SimMetrics, cfg: ScenarioConfig) -> float:
    total = 0.0
    for arm_id, t_out in metrics.t_out.items():
        total += cfg.rho_out * t_out + cfg.rho_unvisits * metrics.n_unvisits.get(arm_id, 0)
    for arm_id, n in metrics.n_unvisits.items():
        if arm_id not in metrics.t_out:
            total += cfg.rho_unvisits * n
    return total


def collision_penalty(metrics: SimMetrics, cfg: ScenarioConfig) -> float:
    return cfg.rho_col * metrics.t_col


def order_violations(paint_start_times: dict[int, float], scene: VehicleScene) -> dict[int, int]:
    return order_violation_counts(paint_start_times, scene)


def order_penalty(order_counts: dict[int, int], cfg: ScenarioConfig) -> float:
    excess = sum(max(0, c - cfg.epsilon) for c in order_counts.values())
    return cfg.rho_unvisits * excess


def _back_door_ok(assign: ArmAssignment, scene: VehicleScene, cfg: ScenarioConfig) -> bool:
    if not cfg.back_door_rule:
        return True
    back_panels = {p.id for p in scene.panels if p.kind == "back_door"}
    if not back_panels:
        return True
    last = assign[-1]  # assignment lists are ordered front row first
    return not any(scene.segment(s).panel_id in back_panels for s in last)


def evaluate_assignment(
    assign: ArmAssignment, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> tuple[EvaluationReport, SimMetrics]:
    cfg = cfg or scene.config
    _, metrics = simulate(assign, scene, cfg)
    return report_from_metrics(metrics, assign, scene, cfg), metrics


def report_from_metrics(
    metrics: SimMetrics,
    assign: ArmAssignment | None,
    scene: VehicleScene,
    cfg: ScenarioConfig,
) -> EvaluationReport:
    p_range = range_penalty(metrics, cfg)
    p_col = collision_penalty(metrics, cfg)
    order_counts = metrics.order_violations or order_violation_counts(
        metrics.paint_start_times, scene
    )
    p_order = order_penalty(order_counts, cfg)
    work = metrics.work_time_max
    objective = work + p_range + p_col + p_order

    back_ok = assign is None or _back_door_ok(assign, scene, cfg)
    strong = (
        p_range == 0.0
        and metrics.t_col == 0.0
        and all(c <= cfg.epsilon for c in order_counts.values())
        and not metrics.horizon_exhausted
        and back_ok
        and work <= cfg.t_p
    )
    notes = []
    if not back_ok:
        notes.append("last arm assigned back-door segments")
    if work > cfg.t_p:
        notes.append(f"work time {work:.2f}s exceeds prescribed {cfg.t_p:.2f}s")
    if assign is not None:
        multi = sum(1 for p in scene.panels if _arms_on_panel(assign, scene, p.id) > 1)
        if multi:
            notes.append(f"{multi} panels painted by more than one arm")
    return EvaluationReport(
        objective=objective,
        work_time_max=work,
        penalty_range=p_range,
        penalty_collision=p_col,
        penalty_order=p_order,
        order_violation_count=order_counts,
        strong_feasible=strong,
        weak_notes=notes,
        t_a=dict(metrics.t_a),
        t_out=dict(metrics.t_out),
        n_unvisits=dict(metrics.n_unvisits),
        t_col=metrics.t_col,
    )


def _arms_on_panel(assign: ArmAssignment, scene: VehicleScene, panel_id: int) -> int:
    return sum(
        1 for segs in assign if any(scene.segment(s).panel_id == panel_id for s in segs)
    )


def evaluate(
    x: UpperSolution, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> EvaluationReport:
    cfg = cfg or scene.config
    assign = decode(x, scene)
    report, _ = evaluate_assignment(assign, scene, cfg)
    return report
