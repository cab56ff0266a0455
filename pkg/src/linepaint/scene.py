"""Problem instance: vehicle geometry, arm layout, line kinematics, run parameters.

Coordinate conventions
----------------------
Vehicle frame: x runs rear (0) to front (``front_x``), y is up, z is the
lateral axis with the modelled side at z < 0.  The scene stores segments for
ONE side of the vehicle only (plus the left half of center panels such as the
hood); the other side is produced by the bilateral expansion of the
trajectory planner.

World frame: arms are fixed, the vehicle translates along +x at the line
velocity.  At tick t the world position of a vehicle-frame point p is
``p + (reference_position - front_x + velocity * mu * t) * x_hat``, so the
vehicle front crosses ``reference_position`` at t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

FORMAT_VERSION = 1

PANEL_KINDS = ("vertical_side", "hood", "roof", "back_door")
EXPANSION_RULES = ("mirror", "parallel", "parallel_with_delay")
SIDES = ("left", "right", "center")

# panels whose strokes are stacked bottom-to-top on a vertical surface
VERTICAL_KINDS = ("vertical_side", "back_door")


class ScenarioError(Exception):
    """Malformed or inconsistent scenario data."""


@dataclass(frozen=True)
class PaintSegment:
    id: int
    panel_id: int
    endpoint_a: tuple[float, float, float]
    endpoint_b: tuple[float, float, float]
    height_index: int
    side: str = "left"

    def length(self) -> float:
        a, b = self.endpoint_a, self.endpoint_b
        return math.dist(a, b)


@dataclass(frozen=True)
class Panel:
    id: int
    kind: str
    expansion_rule: str
    name: str = ""
    # lateral offset applied when expanding a parallel panel to the other side
    parallel_offset: float = 0.0
    # extra start delay (seconds) of the expanded side, parallel_with_delay only;
    # 0.0 means "one back-and-forth stroke on this panel"
    delay: float = 0.0


@dataclass(frozen=True)
class ArmConfig:
    id: int
    center: tuple[float, float, float]
    radius: float
    row: int
    side: str
    mirror_partner: int


@dataclass(frozen=True)
class LineKinematics:
    velocity: float
    direction: tuple[float, float, float] = (1.0, 0.0, 0.0)
    reference_position: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    v_sp: float = 900.0
    v_mv: float = 900.0
    gamma_col: float = 300.0
    t_p: float = 66.0
    epsilon: int = 0
    delta: int = 5
    n_d: int = 30
    mu: float = 0.01
    t_max: int = 15000
    head_turn_wait: float = 0.5
    rho_out: float = 5.0e2
    rho_unvisits: float = 1.0e4
    rho_col: float = 1.0e3
    back_door_rule: bool = True


@dataclass(frozen=True)
class VehicleScene:
    name: str
    front_x: float
    panels: tuple[Panel, ...]
    segments: tuple[PaintSegment, ...]
    arms: tuple[ArmConfig, ...]
    line: LineKinematics
    config: ScenarioConfig = field(default=ScenarioConfig())

    # ---- derived views -------------------------------------------------

    @property
    def n_segs(self) -> int:
        return len(self.segments)

    def segment(self, seg_id: int) -> PaintSegment:
        return self.segments[seg_id - 1]

    def panel(self, panel_id: int) -> Panel:
        for p in self.panels:
            if p.id == panel_id:
                return p
        raise KeyError(panel_id)

    def panel_segment_ids(self, panel_id: int) -> tuple[int, ...]:
        segs = [s for s in self.segments if s.panel_id == panel_id]
        segs.sort(key=lambda s: s.height_index)
        return tuple(s.id for s in segs)

    def left_arms(self) -> tuple[ArmConfig, ...]:
        arms = [a for a in self.arms if a.side == "left"]
        arms.sort(key=lambda a: a.row)
        return tuple(arms)

    def arm(self, arm_id: int) -> ArmConfig:
        for a in self.arms:
            if a.id == arm_id:
                return a
        raise KeyError(arm_id)

    @property
    def n_arms_side(self) -> int:
        return len(self.left_arms())

    def world_offset(self, t: float) -> float:
        """World-frame x offset of vehicle-frame coordinates at tick t."""
        line = self.line
        return line.reference_position - self.front_x + line.velocity * self.config.mu * t


def segment_world_position(
    seg: PaintSegment, t: float, line: LineKinematics, mu: float, front_x: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Both endpoints of ``seg`` in the world frame at tick ``t``."""
    off = line.reference_position - front_x + line.velocity * mu * t
    shift = np.asarray(line.direction, dtype=float) * off
    return np.asarray(seg.endpoint_a) + shift, np.asarray(seg.endpoint_b) + shift


# ---------------------------------------------------------------------------
# validation


def _validate(scene: VehicleScene) -> VehicleScene:
    seen = set()
    panel_ids = {p.id for p in scene.panels}
    if len(panel_ids) != len(scene.panels):
        raise ScenarioError("duplicate panel id")
    for p in scene.panels:
        if p.kind not in PANEL_KINDS:
            raise ScenarioError(f"panel {p.id}: unknown kind {p.kind!r}")
        if p.expansion_rule not in EXPANSION_RULES:
            raise ScenarioError(f"panel {p.id}: unknown expansion rule {p.expansion_rule!r}")
        if p.kind == "vertical_side" and p.expansion_rule != "mirror":
            raise ScenarioError(f"panel {p.id}: vertical_side panels must use the mirror rule")
        if p.kind != "vertical_side" and p.expansion_rule == "mirror":
            raise ScenarioError(f"panel {p.id}: {p.kind} panels must use parallel expansion")
    for s in scene.segments:
        if s.id in seen:
            raise ScenarioError(f"duplicate segment id {s.id}")
        seen.add(s.id)
        if s.endpoint_a == s.endpoint_b:
            raise ScenarioError(f"segment {s.id}: zero length")
        if s.panel_id not in panel_ids:
            raise ScenarioError(f"segment {s.id}: unknown panel {s.panel_id}")
        if s.side not in SIDES:
            raise ScenarioError(f"segment {s.id}: unknown side {s.side!r}")
    if sorted(seen) != list(range(1, len(scene.segments) + 1)):
        raise ScenarioError("segment ids must cover 1..n_segs")
    for p in scene.panels:
        heights = sorted(s.height_index for s in scene.segments if s.panel_id == p.id)
        if heights and heights != list(range(1, len(heights) + 1)):
            raise ScenarioError(f"panel {p.id}: height_index values must be contiguous 1..n")

    left = [a for a in scene.arms if a.side == "left"]
    right = [a for a in scene.arms if a.side == "right"]
    if not left or len(left) != len(right):
        raise ScenarioError("arms must split evenly between left and right")
    by_id = {a.id: a for a in scene.arms}
    if len(by_id) != len(scene.arms):
        raise ScenarioError("duplicate arm id")
    for a in scene.arms:
        if a.radius <= 0:
            raise ScenarioError(f"arm {a.id}: radius must be positive")
        partner = by_id.get(a.mirror_partner)
        if partner is None or partner.side == a.side or partner.row != a.row:
            raise ScenarioError(f"arm {a.id}: invalid mirror partner")
        if partner.mirror_partner != a.id:
            raise ScenarioError(f"arm {a.id}: mirror pairing is not an involution")
    if scene.line.velocity <= 0:
        raise ScenarioError("line velocity must be positive")
    cfg = scene.config
    if cfg.mu <= 0:
        raise ScenarioError("mu must be positive")
    if min(cfg.rho_out, cfg.rho_unvisits, cfg.rho_col) <= 0:
        raise ScenarioError("penalty weights must be positive")
    return scene


def validate_scene(scene: VehicleScene) -> VehicleScene:
    """Raise ScenarioError on any inconsistency; returns the scene unchanged."""
    return _validate(scene)


# ---------------------------------------------------------------------------
# scenario file i/o


def scene_to_dict(scene: VehicleScene) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "scene": {
            "name": scene.name,
            "front_x": scene.front_x,
            "panels": [
                {
                    "id": p.id,
                    "kind": p.kind,
                    "expansion_rule": p.expansion_rule,
                    "name": p.name,
                    "parallel_offset": p.parallel_offset,
                    "delay": p.delay,
                }
                for p in scene.panels
            ],
            "segments": [
                {
                    "id": s.id,
                    "panel": s.panel_id,
                    "a": list(s.endpoint_a),
                    "b": list(s.endpoint_b),
                    "height_index": s.height_index,
                    "side": s.side,
                }
                for s in scene.segments
            ],
        },
        "arms": [
            {
                "id": a.id,
                "center": list(a.center),
                "radius": a.radius,
                "row": a.row,
                "side": a.side,
                "mirror_partner": a.mirror_partner,
            }
            for a in scene.arms
        ],
        "line": {
            "velocity": scene.line.velocity,
            "direction": list(scene.line.direction),
            "reference_position": scene.line.reference_position,
        },
        "config": {k: getattr(scene.config, k) for k in ScenarioConfig.__dataclass_fields__},
    }


def scene_from_dict(doc: dict) -> VehicleScene:
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise ScenarioError(f"unsupported format_version {version}")
        sc = doc["scene"]
        panels = tuple(
            Panel(
                id=int(p["id"]),
                kind=p["kind"],
                expansion_rule=p["expansion_rule"],
                name=p.get("name", ""),
                parallel_offset=float(p.get("parallel_offset", 0.0)),
                delay=float(p.get("delay", 0.0)),
            )
            for p in sc["panels"]
        )
        segments = tuple(
            PaintSegment(
                id=int(s["id"]),
                panel_id=int(s["panel"]),
                endpoint_a=tuple(float(v) for v in s["a"]),
                endpoint_b=tuple(float(v) for v in s["b"]),
                height_index=int(s["height_index"]),
                side=s.get("side", "left"),
            )
            for s in sc["segments"]
        )
        arms = tuple(
            ArmConfig(
                id=int(a["id"]),
                center=tuple(float(v) for v in a["center"]),
                radius=float(a["radius"]),
                row=int(a["row"]),
                side=a["side"],
                mirror_partner=int(a["mirror_partner"]),
            )
            for a in doc["arms"]
        )
        line = LineKinematics(
            velocity=float(doc["line"]["velocity"]),
            direction=tuple(float(v) for v in doc["line"].get("direction", (1.0, 0.0, 0.0))),
            reference_position=float(doc["line"].get("reference_position", 0.0)),
        )
        cfg = ScenarioConfig(**{k: v for k, v in doc.get("config", {}).items()})
        scene = VehicleScene(
            name=sc.get("name", ""),
            front_x=float(sc["front_x"]),
            panels=panels,
            segments=tuple(sorted(segments, key=lambda s: s.id)),
            arms=arms,
            line=line,
            config=cfg,
        )
    except ScenarioError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario document: {exc}") from exc
    return _validate(scene)


def load_scene(path) -> VehicleScene:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ScenarioError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: scenario must be a mapping")
    return scene_from_dict(doc)


def save_scene(scene: VehicleScene, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scene_to_dict(scene), fh, sort_keys=False)


# ---------------------------------------------------------------------------
# synthetic scene generation


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int = 0
    n_arms_side: int = 3
    side_panel_segments: tuple[int, ...] = (12, 12, 12, 12, 12)
    hood_segments: int = 0
    roof_segments: int = 0
    back_door_segments: int = 0
    body_length: float = 4500.0
    body_width: float = 1800.0
    height_min: float = 400.0
    height_max: float = 1600.0
    arm_radius: float = 2800.0
    arm_standoff: float = 1000.0
    arm_spacing: float = 1500.0
    arm_front_x: float = 1200.0
    jitter: float = 4.0
    hood_delay: bool = False
    line_velocity: float = 98.0
    reference_position: float = 0.0
    name: str = "synthetic"


def generate_synthetic_scene(
    spec: SyntheticSpec, config: ScenarioConfig | None = None
) -> VehicleScene:
    """Box-like vehicle: stacked horizontal strokes per side panel, optional
    hood / roof / back door halves painted by one side and expanded in
    parallel.  Deterministic for a given spec (seed included)."""
    if not spec.side_panel_segments or spec.n_arms_side < 1:
        raise ScenarioError("need at least one side panel and one arm per side")
    rng = np.random.default_rng(spec.seed)
    half_w = spec.body_width / 2.0

    panels: list[Panel] = []
    segments: list[PaintSegment] = []
    pid = 0
    sid = 0
    hood_rule = "parallel_with_delay" if spec.hood_delay else "parallel"

    def add_segment(panel_id, a, b, h, side):
        nonlocal sid
        sid += 1
        segments.append(
            PaintSegment(
                id=sid,
                panel_id=panel_id,
                endpoint_a=tuple(float(v) for v in a),
                endpoint_b=tuple(float(v) for v in b),
                height_index=h,
                side=side,
            )
        )

    if spec.hood_segments:
        pid += 1
        panels.append(Panel(pid, "hood", hood_rule, name="hood", parallel_offset=half_w))
        x0, x1 = spec.body_length - 1200.0, spec.body_length - 200.0
        y = spec.height_max - 250.0
        zs = np.linspace(-half_w + 100.0, -120.0, spec.hood_segments)
        for h, z in enumerate(zs, start=1):
            j = rng.uniform(-spec.jitter, spec.jitter)
            add_segment(pid, (x0, y + j, z), (x1, y + j, z), h, "center")

    n_side = len(spec.side_panel_segments)
    edges = np.linspace(0.0, spec.body_length, n_side + 1)
    # panels front to back: panel near the vehicle front first
    for i, count in enumerate(spec.side_panel_segments):
        pid += 1
        x1 = spec.body_length - edges[i]
        x0 = spec.body_length - edges[i + 1]
        panels.append(Panel(pid, "vertical_side", "mirror", name=f"side_{i + 1}"))
        ys = np.linspace(spec.height_min, spec.height_max, count)
        for h, y in enumerate(ys, start=1):
            j = rng.uniform(-spec.jitter, spec.jitter)
            add_segment(pid, (x0 + 20.0, y + j, -half_w), (x1 - 20.0, y + j, -half_w), h, "left")

    if spec.roof_segments:
        pid += 1
        panels.append(Panel(pid, "roof", "parallel", name="roof", parallel_offset=half_w))
        x0, x1 = spec.body_length * 0.35, spec.body_length * 0.65
        y = spec.height_max + 150.0
        zs = np.linspace(-half_w + 100.0, -120.0, spec.roof_segments)
        for h, z in enumerate(zs, start=1):
            j = rng.uniform(-spec.jitter, spec.jitter)
            add_segment(pid, (x0, y + j, z), (x1, y + j, z), h, "center")

    if spec.back_door_segments:
        pid += 1
        panels.append(
            Panel(pid, "back_door", "parallel", name="back_door", parallel_offset=half_w)
        )
        ys = np.linspace(spec.height_min + 100.0, spec.height_max - 100.0, spec.back_door_segments)
        for h, y in enumerate(ys, start=1):
            j = rng.uniform(-spec.jitter, spec.jitter)
            add_segment(pid, (30.0, y + j, -half_w + 80.0), (30.0, y + j, -100.0), h, "center")

    arms: list[ArmConfig] = []
    y_c = (spec.height_min + spec.height_max) / 2.0
    z_c = half_w + spec.arm_standoff
    n = spec.n_arms_side
    for r in range(1, n + 1):
        x_c = spec.arm_front_x + (r - 1) * spec.arm_spacing
        arms.append(ArmConfig(r, (x_c, y_c, -z_c), spec.arm_radius, r, "left", r + n))
        arms.append(ArmConfig(r + n, (x_c, y_c, z_c), spec.arm_radius, r, "right", r))

    line = LineKinematics(
        velocity=spec.line_velocity,
        direction=(1.0, 0.0, 0.0),
        reference_position=spec.reference_position,
    )
    cfg = config if config is not None else ScenarioConfig()
    scene = VehicleScene(
        name=spec.name,
        front_x=spec.body_length,
        panels=tuple(panels),
        segments=tuple(segments),
        arms=tuple(arms),
        line=line,
        config=cfg,
    )
    return _validate(scene)


def default_dummy_count(n_segs: int, n_arms_side: int) -> int:
    """Smallest n_d >= n_segs/2 making n_segs + n_d divisible by n_arms_side."""
    n_d = (n_segs + 1) // 2
    while (n_segs + n_d) % n_arms_side:
        n_d += 1
    return n_d


def with_config(scene: VehicleScene, **kwargs) -> VehicleScene:
    return replace(scene, config=replace(scene.config, **kwargs))
