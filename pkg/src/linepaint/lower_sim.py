"""Greedy lower-layer planner.

Expands an arm assignment into per-tick head trajectories.  Each one-side arm
walks its segment list in order: wait until the whole segment is inside the
operating sphere (the vehicle drifts, so in-range is a time window), move to
the nearer endpoint, sweep the segment at the paint speed, and finally return
home.  The opposite side is produced per panel by one of three bilateral
rules: mirror (z-negated copy), parallel (lateral-offset copy) or parallel
with a start delay on the expanded side; paired arms synchronize at every
panel start.

Painting tracks the moving segment: the head interpolates linearly between
the drifting world-frame endpoints, so the sweep speed is the paint speed
relative to the body surface.  Transit moves are bounded by the transit speed
in world coordinates.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .genotype import ArmAssignment
from .scene import ScenarioConfig, ScenarioError, VehicleScene, VERTICAL_KINDS

WAIT, MOVE, PAINT, REORIENT, HOME = 0, 1, 2, 3, 4
ACTION_NAMES = ("wait", "move", "paint", "reorient", "home")

_X = np.array([1.0, 0.0, 0.0])
_MIRROR_Z = np.array([1.0, 1.0, -1.0])


@dataclass
class SimMetrics:
    t_a: dict[int, float] = field(default_factory=dict)
    t_out: dict[int, float] = field(default_factory=dict)
    n_unvisits: dict[int, int] = field(default_factory=dict)
    t_col: float = 0.0
    paint_start_times: dict[int, float] = field(default_factory=dict)
    order_violations: dict[int, int] = field(default_factory=dict)
    horizon_exhausted: bool = False

    @property
    def work_time_max(self) -> float:
        return max(self.t_a.values(), default=0.0)


@dataclass
class Trajectory:
    arm_ids: tuple[int, ...]
    positions: np.ndarray  # (n_arms, n_ticks + 1, 3), world frame, mm
    actions: np.ndarray  # (n_arms, n_ticks + 1) of action codes
    seg_ids: np.ndarray  # (n_arms, n_ticks + 1), -1 when not painting
    homes: np.ndarray  # (n_arms, 3)
    mu: float

    @property
    def n_ticks(self) -> int:
        return self.positions.shape[1] - 1

    def arm_index(self, arm_id: int) -> int:
        return self.arm_ids.index(arm_id)


# ---------------------------------------------------------------------------
# reachability windows


def reach_windows(scene: VehicleScene, cfg: ScenarioConfig | None = None):
    """Per (one-side arm id, segment id): tick interval during which both
    world-frame endpoints sit inside the arm's sphere, or None if never."""
    cfg = cfg or scene.config
    return _reach_windows_cached(scene, cfg)


@functools.lru_cache(maxsize=32)
def _reach_windows_cached(scene: VehicleScene, cfg: ScenarioConfig):
    k = scene.line.velocity * cfg.mu
    off0 = scene.line.reference_position - scene.front_x
    out: dict[tuple[int, int], tuple[float, float] | None] = {}
    for arm in scene.left_arms():
        cx, cy, cz = arm.center
        r2 = arm.radius * arm.radius
        for s in scene.segments:
            lo, hi = 0.0, float(cfg.t_max)
            for p in (s.endpoint_a, s.endpoint_b):
                ax = p[0] + off0 - cx
                dy = p[1] - cy
                dz = p[2] - cz
                a = k * k
                b = 2.0 * ax * k
                c = ax * ax + dy * dy + dz * dz - r2
                disc = b * b - 4.0 * a * c
                if disc <= 0.0:
                    lo, hi = 1.0, 0.0
                    break
                sq = math.sqrt(disc)
                lo = max(lo, (-b - sq) / (2.0 * a))
                hi = min(hi, (-b + sq) / (2.0 * a))
            out[(arm.id, s.id)] = (lo, hi) if lo <= hi else None
    return out


def never_reachable(scene: VehicleScene, cfg: ScenarioConfig | None = None):
    """Set of (arm id, segment id) pairs out of range over the whole horizon."""
    return {key for key, win in reach_windows(scene, cfg).items() if win is None}


# ---------------------------------------------------------------------------
# tape: per-arm phase recorder


class _Tape:
    __slots__ = ("home", "blocks", "t", "pos")

    def __init__(self, home):
        self.home = np.asarray(home, dtype=float)
        self.blocks: list[tuple[int, int, np.ndarray]] = []
        self.t = 0
        self.pos = self.home.copy()

    def append(self, action: int, seg: int, pos: np.ndarray) -> None:
        if len(pos) == 0:
            return
        self.blocks.append((action, seg, pos))
        self.t += len(pos)
        self.pos = pos[-1]

    def hold(self, n: int, action: int = WAIT) -> None:
        if n > 0:
            self.append(action, -1, np.broadcast_to(self.pos, (n, 3)).copy())


class _World:
    """Vehicle-frame to world-frame drift helper."""

    def __init__(self, scene: VehicleScene, cfg: ScenarioConfig):
        self.k = scene.line.velocity * cfg.mu  # drift per tick, mm
        self.off0 = scene.line.reference_position - scene.front_x

    def at(self, p, t) -> np.ndarray:
        return np.asarray(p, dtype=float) + _X * (self.off0 + self.k * t)

    def track(self, p, t0: int, n: int) -> np.ndarray:
        """Positions on the moving point p for ticks t0+1 .. t0+n."""
        ts = np.arange(t0 + 1, t0 + n + 1, dtype=float)
        out = np.tile(np.asarray(p, dtype=float), (n, 1))
        out[:, 0] += self.off0 + self.k * ts
        return out


def _intercept_ticks(pos, target_vehicle, t0, world: _World, step: float) -> int:
    """Fewest whole ticks to reach the drifting target at <= step mm/tick."""
    d = world.at(target_vehicle, t0) - pos
    dd = float(d @ d)
    if dd == 0.0:
        return 0
    k = world.k
    a = k * k - step * step
    b = 2.0 * d[0] * k
    disc = b * b - 4.0 * a * dd
    root = (-b - math.sqrt(disc)) / (2.0 * a)
    n = max(1, math.ceil(root - 1e-12))
    while True:
        arr = world.at(target_vehicle, t0 + n) - pos
        if float(arr @ arr) <= (step * n) ** 2 * (1.0 + 1e-12):
            return n
        n += 1


def _move_block(tape: _Tape, target_vehicle, world: _World, step: float) -> None:
    n = _intercept_ticks(tape.pos, target_vehicle, tape.t, world, step)
    if n == 0:
        return
    end = world.at(target_vehicle, tape.t + n)
    frac = (np.arange(1, n + 1, dtype=float) / n)[:, None]
    tape.append(MOVE, -1, tape.pos + (end - tape.pos) * frac)


def _paint_block(tape: _Tape, seg_id, p_start, p_end, world: _World, cfg) -> None:
    length = float(np.linalg.norm(np.asarray(p_end) - np.asarray(p_start)))
    n = max(1, math.ceil(length / (cfg.v_sp * cfg.mu) - 1e-9))
    t0 = tape.t
    u = (np.arange(1, n + 1, dtype=float) / n)[:, None]
    pts = np.asarray(p_start, dtype=float) + (np.asarray(p_end) - np.asarray(p_start)) * u
    ts = np.arange(t0 + 1, t0 + n + 1, dtype=float)
    pts[:, 0] += world.off0 + world.k * ts
    tape.append(PAINT, seg_id, pts)


_KIND_CLASS = {"vertical_side": "side", "hood": "top", "roof": "top", "back_door": "rear"}


# ---------------------------------------------------------------------------
# the planner


def _plan_pair(scene, cfg, left, right, seg_ids, windows, metrics, world):
    """Plan one left arm and its mirror partner; fills tapes and metrics."""
    tape_l = _Tape(left.center)
    tape_r = _Tape(right.center)
    unvisited = 0
    prev_class = None
    step = cfg.v_mv * cfg.mu
    # while in lockstep the partner's state is the exact z-mirror of the
    # planned arm's, so whole episodes can be replayed bit-for-bit
    lockstep = True

    # group consecutive segments by panel
    episodes: list[tuple[int, list[int]]] = []
    for sid in seg_ids:
        pid = scene.segment(sid).panel_id
        if episodes and episodes[-1][0] == pid:
            episodes[-1][1].append(sid)
        else:
            episodes.append((pid, [sid]))

    exhausted = False
    for pid, sids in episodes:
        if exhausted or tape_l.t >= cfg.t_max:
            unvisited += len(sids)
            exhausted = True
            continue
        panel = scene.panel(pid)
        paintable = [s for s in sids if windows[(left.id, s)] is not None]
        unvisited += len(sids) - len(paintable)
        if not paintable:
            continue

        klass = _KIND_CLASS[panel.kind]
        turn = 0
        if prev_class is not None and klass != prev_class:
            turn = math.ceil(cfg.head_turn_wait / cfg.mu)
        prev_class = klass

        entry_from = len(tape_l.blocks)
        tape_l.hold(turn, REORIENT)

        first = scene.segment(paintable[0])
        win = windows[(left.id, first.id)]
        if tape_l.t < win[0]:
            wait = math.ceil(win[0]) - tape_l.t
            if tape_l.t + wait >= cfg.t_max:
                unvisited += len(paintable)
                exhausted = True
                continue
            tape_l.hold(wait, WAIT)

        # episode transform for the expanded side
        mirror = panel.expansion_rule == "mirror"
        offset = panel.parallel_offset
        start, end = _choose_endpoints(tape_l.pos, first, tape_l.t, world)

        def transform_point(p):
            if mirror:
                return (p[0], p[1], -p[2])
            return (p[0], p[1], p[2] + offset)

        _move_block(tape_l, start, world, step)

        delay = 0
        if panel.expansion_rule == "parallel_with_delay":
            stroke_ticks = max(
                1, math.ceil(first.length() / (cfg.v_sp * cfg.mu) - 1e-9)
            )
            delay = (
                math.ceil(panel.delay / cfg.mu) if panel.delay > 0 else 2 * stroke_ticks
            )

        if mirror and lockstep:
            # partner mirrors the whole entry (reorient, window wait, transit)
            for action, sid, pos in tape_l.blocks[entry_from:]:
                tape_r.append(action, sid, pos * _MIRROR_Z)
        else:
            # depart as late as possible: camping on the moving surface while
            # a neighbor is still painting nearby invites collisions
            tape_r.hold(turn, REORIENT)
            target_r = transform_point(start)
            n0 = _intercept_ticks(tape_r.pos, target_r, tape_r.t, world, step)
            t_start = max(tape_l.t, tape_r.t + n0 - delay)
            t_arr = t_start + delay
            w = t_arr - tape_r.t - n0
            while w > 0:
                n1 = _intercept_ticks(tape_r.pos, target_r, tape_r.t + w, world, step)
                if tape_r.t + w + n1 <= t_arr:
                    break
                w -= 1
            tape_r.hold(max(0, w), WAIT)
            _move_block(tape_r, target_r, world, step)
            t_start = max(t_start, tape_r.t - delay)
            if tape_l.t < t_start:  # track the drifting start until sync
                tape_l.append(MOVE, -1, world.track(start, tape_l.t, t_start - tape_l.t))
            if tape_r.t < t_start + delay:
                tape_r.append(
                    MOVE, -1, world.track(target_r, tape_r.t, t_start + delay - tape_r.t)
                )
            lockstep = mirror  # synced mirror episode restores lockstep

        # left arm paints the episode; remember its blocks for the replay
        replay_from = len(tape_l.blocks)
        for idx, sid in enumerate(paintable):
            if tape_l.t >= cfg.t_max:
                unvisited += len(paintable) - idx
                exhausted = True
                break
            seg = scene.segment(sid)
            if idx > 0:
                win = windows[(left.id, sid)]
                if tape_l.t < win[0]:
                    tape_l.hold(math.ceil(win[0]) - tape_l.t, WAIT)
                start, end = _choose_endpoints(tape_l.pos, seg, tape_l.t, world)
                _move_block(tape_l, start, world, cfg.v_mv * cfg.mu)
            metrics.paint_start_times[sid] = (tape_l.t + 1) * cfg.mu
            _paint_block(tape_l, sid, start, end, world, cfg)

        # expanded side replays the episode under the panel transform
        shift = np.array([world.k * delay, 0.0, offset])
        for action, sid, pos in tape_l.blocks[replay_from:]:
            tape_r.append(action, sid, pos * _MIRROR_Z if mirror else pos + shift)

    metrics.n_unvisits[left.id] = unvisited
    metrics.n_unvisits[right.id] = 0
    metrics.horizon_exhausted = metrics.horizon_exhausted or exhausted

    for arm, tape in ((left, tape_l), (right, tape_r)):
        if tape.blocks:
            _move_block_fixed(tape, tape.home, cfg.v_mv * cfg.mu)
        metrics.t_a[arm.id] = min(tape.t, cfg.t_max) * cfg.mu
    return tape_l, tape_r


def _move_block_fixed(tape: _Tape, target, step: float) -> None:
    d = np.asarray(target, dtype=float) - tape.pos
    dist = float(np.linalg.norm(d))
    if dist == 0.0:
        return
    n = max(1, math.ceil(dist / step - 1e-12))
    frac = (np.arange(1, n + 1, dtype=float) / n)[:, None]
    tape.append(MOVE, -1, tape.pos + d * frac)


def _choose_endpoints(pos, seg, t, world: _World):
    da = world.at(seg.endpoint_a, t) - pos
    db = world.at(seg.endpoint_b, t) - pos
    if float(da @ da) <= float(db @ db):
        return seg.endpoint_a, seg.endpoint_b
    return seg.endpoint_b, seg.endpoint_a


def _render(tapes: list[_Tape], arm_ids, cfg) -> Trajectory:
    t_end = min(cfg.t_max, max((tape.t for tape in tapes), default=0))
    n = len(tapes)
    pos = np.empty((n, t_end + 1, 3))
    act = np.full((n, t_end + 1), HOME, dtype=np.int8)
    seg = np.full((n, t_end + 1), -1, dtype=np.int32)
    homes = np.stack([tape.home for tape in tapes])
    for i, tape in enumerate(tapes):
        pos[i, 0] = tape.home
        if tape.blocks:
            act[i, 0] = WAIT
        t = 1
        for action, sid, block in tape.blocks:
            if t > t_end:
                break
            m = min(len(block), t_end + 1 - t)
            pos[i, t : t + m] = block[:m]
            act[i, t : t + m] = action
            seg[i, t : t + m] = sid
            t += m
        if t <= t_end:
            pos[i, t:] = pos[i, t - 1]
    return Trajectory(
        arm_ids=tuple(arm_ids), positions=pos, actions=act, seg_ids=seg, homes=homes, mu=cfg.mu
    )


def simulate(
    assign: ArmAssignment, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> tuple[Trajectory, SimMetrics]:
    """Plan trajectories for all arms (both sides) and collect audit metrics."""
    cfg = cfg or scene.config
    if cfg.v_mv * 0.999 <= scene.line.velocity:
        raise ScenarioError("transit speed must exceed line velocity")
    left_arms = scene.left_arms()
    if len(assign) != len(left_arms):
        raise ValueError(f"expected {len(left_arms)} assignment lists, got {len(assign)}")
    windows = reach_windows(scene, cfg)
    world = _World(scene, cfg)
    metrics = SimMetrics()

    # segments missing from every assignment list are unvisited by definition
    # (decoded genotypes always cover all ids; audited assignments may not)
    assigned = {s for row in assign for s in row}
    missing = scene.n_segs - len(assigned & set(range(1, scene.n_segs + 1)))

    tapes_l, tapes_r, ids_l, ids_r = [], [], [], []
    for arm, seg_ids in zip(left_arms, assign):
        partner = scene.arm(arm.mirror_partner)
        tl, tr = _plan_pair(scene, cfg, arm, partner, seg_ids, windows, metrics, world)
        tapes_l.append(tl)
        ids_l.append(arm.id)
        tapes_r.append(tr)
        ids_r.append(partner.id)

    if missing:
        first = left_arms[0].id
        metrics.n_unvisits[first] = metrics.n_unvisits.get(first, 0) + missing

    traj = _render(tapes_l + tapes_r, ids_l + ids_r, cfg)

    for i, arm_id in enumerate(traj.arm_ids):
        arm = scene.arm(arm_id)
        mask = traj.actions[i] == PAINT
        d2 = ((traj.positions[i] - np.asarray(arm.center)) ** 2).sum(axis=1)
        metrics.t_out[arm_id] = float((d2[mask] > arm.radius**2).sum()) * cfg.mu
    metrics.t_col = collision_time(traj, cfg.gamma_col)
    metrics.order_violations = order_violation_counts(metrics.paint_start_times, scene)
    return traj, metrics


def simulate_one_side(
    assign: ArmAssignment, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> tuple[Trajectory, SimMetrics]:
    """Trajectory restricted to the planned side.  Sync with the expanded
    side can stall a planned arm, so both sides are co-planned; the one-side
    view keeps a handle on the full plan for expand_to_both_sides."""
    full, metrics = simulate(assign, scene, cfg)
    n = len(scene.left_arms())
    one = Trajectory(
        arm_ids=full.arm_ids[:n],
        positions=full.positions[:n],
        actions=full.actions[:n],
        seg_ids=full.seg_ids[:n],
        homes=full.homes[:n],
        mu=full.mu,
    )
    one.full = full
    return one, metrics


def expand_to_both_sides(
    one_side: Trajectory, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> Trajectory:
    full = getattr(one_side, "full", None)
    if full is None:
        raise ValueError("one-side trajectory does not carry its expansion plan")
    return full


def collision_time(traj: Trajectory, gamma_col: float) -> float:
    """Seconds during which some arm-head pair is closer than gamma_col."""
    pos = traj.positions
    n = pos.shape[0]
    if n < 2:
        return 0.0
    bad = np.zeros(pos.shape[1], dtype=bool)
    g2 = gamma_col * gamma_col
    for i in range(n):
        for j in range(i + 1, n):
            bad |= ((pos[i] - pos[j]) ** 2).sum(axis=1) < g2
    return float(bad.sum()) * traj.mu


def order_violation_counts(
    paint_start_times: dict[int, float], scene: VehicleScene
) -> dict[int, int]:
    """Per vertical panel: adjacent height pairs painted out of order (a
    missing segment breaks every pair it touches)."""
    out: dict[int, int] = {}
    for panel in scene.panels:
        if panel.kind not in VERTICAL_KINDS:
            continue
        ids = scene.panel_segment_ids(panel.id)
        count = 0
        for lower, upper in zip(ids, ids[1:]):
            e_lo = paint_start_times.get(lower)
            e_up = paint_start_times.get(upper)
            if e_lo is None or e_up is None or e_lo >= e_up:
                count += 1
        out[panel.id] = count
    return out
