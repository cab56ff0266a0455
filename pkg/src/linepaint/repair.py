"""Constraint-repair operators applied to offspring genotypes.

All four operators are permutation- and slot-preserving value transforms:

1. reachability  - swap never-reachable (arm, segment) assignments away
2. bottom_up     - per vertical panel, keep each arm's segment count but
                   reassign contiguous bottom-to-top blocks in arm-row order
                   and sort each arm's within-panel visit order by height
3. few_arms      - exchange equally-sized panel assignments between two arms
                   when that strictly reduces arms-per-panel
4. back_door     - move back-door segments out of the last arm's slot

Application order in the GA loop: 1, 4, 2, 3.
"""

from __future__ import annotations

from .genotype import UpperSolution
from .lower_sim import never_reachable
from .scene import ScenarioConfig, VehicleScene, VERTICAL_KINDS


def _slots(n_dim: int, n_arms: int):
    width = n_dim // n_arms
    return [range(a * width, (a + 1) * width) for a in range(n_arms)]


def _arm_of(pos: int, n_dim: int, n_arms: int) -> int:
    return pos // (n_dim // n_arms)


def repair_reachability(
    x: UpperSolution, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> UpperSolution:
    """Repair operator 1: for each segment its arm can never reach, scan from
    the front of the genotype for the first swap that removes the violation
    without creating a new one; leave it (penalty territory) if none exists."""
    cfg = cfg or scene.config
    bad = never_reachable(scene, cfg)
    if not bad:
        return x
    genes = list(x.genes)
    n_dim = len(genes)
    n_arms = scene.n_arms_side
    arms = scene.left_arms()
    n_segs = scene.n_segs

    def unreachable(pos: int, gene: int) -> bool:
        if gene > n_segs:  # dummy
            return False
        return (arms[_arm_of(pos, n_dim, n_arms)].id, gene) in bad

    for pos in range(n_dim):
        if not unreachable(pos, genes[pos]):
            continue
        for alt in range(n_dim):
            if alt == pos:
                continue
            if unreachable(pos, genes[alt]) or unreachable(alt, genes[pos]):
                continue
            if unreachable(alt, genes[alt]):
                continue  # that position needs its own repair pass
            genes[pos], genes[alt] = genes[alt], genes[pos]
            break
    return UpperSolution(tuple(genes))


def repair_bottom_up(x: UpperSolution, scene: VehicleScene) -> UpperSolution:
    """Repair operator 2 (bottom-to-top / front-arm-first)."""
    genes = list(x.genes)
    n_dim = len(genes)
    n_arms = scene.n_arms_side
    height = {s.id: s.height_index for s in scene.segments}
    for panel in scene.panels:
        if panel.kind not in VERTICAL_KINDS:
            continue
        panel_ids = set(scene.panel_segment_ids(panel.id))
        if not panel_ids:
            continue
        # gene positions of this panel's segments, grouped by arm slot
        per_arm: list[list[int]] = [[] for _ in range(n_arms)]
        for pos, g in enumerate(genes):
            if g in panel_ids:
                per_arm[_arm_of(pos, n_dim, n_arms)].append(pos)
        ordered = sorted(panel_ids, key=lambda s: height[s])
        i = 0
        for positions in per_arm:  # frontmost arm gets the lowest block
            block = ordered[i : i + len(positions)]
            i += len(positions)
            for pos, sid in zip(sorted(positions), block):
                genes[pos] = sid
    return UpperSolution(tuple(genes))


def _panel_incidence(genes, scene: VehicleScene):
    """arms-per-panel counts and per (arm, panel) gene positions."""
    n_dim = len(genes)
    n_arms = scene.n_arms_side
    n_segs = scene.n_segs
    panel_of = {s.id: s.panel_id for s in scene.segments}
    positions: dict[tuple[int, int], list[int]] = {}
    for pos, g in enumerate(genes):
        if g > n_segs:
            continue
        key = (_arm_of(pos, n_dim, n_arms), panel_of[g])
        positions.setdefault(key, []).append(pos)
    counts: dict[int, int] = {p.id: 0 for p in scene.panels}
    for (_, pid), pp in positions.items():
        if pp:
            counts[pid] += 1
    return counts, positions


def repair_few_arms(
    x: UpperSolution, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> UpperSolution:
    """Repair operator 3: swap arm a1's panel-b1 segments with arm a2's
    panel-b2 segments (equal counts) while that strictly reduces the number
    of arms painting some panel without raising it anywhere."""
    cfg = cfg or scene.config
    bad = never_reachable(scene, cfg)
    genes = list(x.genes)
    n_dim = len(genes)
    n_arms = scene.n_arms_side
    arms = scene.left_arms()
    improved = True
    guard = 0
    panel_ids = sorted(p.id for p in scene.panels)
    while improved and guard < 100:
        improved = False
        guard += 1
        counts, positions = _panel_incidence(genes, scene)
        # smallest improving swap first (then lexicographic panel/arm order)
        candidates = sorted(
            (len(positions[(a1, b1)]), b1, b2, a1, a2)
            for b1 in panel_ids
            for b2 in panel_ids
            for a1 in range(n_arms)
            for a2 in range(n_arms)
            if b1 != b2
            and a1 != a2
            and positions.get((a1, b1))
            and positions.get((a2, b2))
            and len(positions[(a1, b1)]) == len(positions[(a2, b2)])
            and positions.get((a1, b2))
            and positions.get((a2, b1))  # both arms must touch both panels
        )
        for _, b1, b2, a1, a2 in candidates:
            p1 = positions[(a1, b1)]
            p2 = positions[(a2, b2)]
            if any((arms[a2].id, genes[p]) in bad for p in p1):
                continue
            if any((arms[a1].id, genes[p]) in bad for p in p2):
                continue
            trial = genes[:]
            for q1, q2 in zip(p1, p2):
                trial[q1], trial[q2] = trial[q2], trial[q1]
            new_counts, _ = _panel_incidence(trial, scene)
            if all(new_counts[p] <= counts[p] for p in counts) and any(
                new_counts[p] < counts[p] for p in counts
            ):
                genes = trial
                improved = True
                break
    return UpperSolution(tuple(genes))


def repair_back_door(
    x: UpperSolution, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> UpperSolution:
    """Repair operator 4: the rearmost arm must not paint the back door."""
    cfg = cfg or scene.config
    if not cfg.back_door_rule:
        return x
    back = {s.id for s in scene.segments if scene.panel(s.panel_id).kind == "back_door"}
    if not back:
        return x
    genes = list(x.genes)
    n_dim = len(genes)
    n_arms = scene.n_arms_side
    n_segs = scene.n_segs
    arms = scene.left_arms()
    bad = never_reachable(scene, cfg)
    last_slot = _slots(n_dim, n_arms)[-1]
    last_id = arms[-1].id
    for pos in last_slot:
        g = genes[pos]
        if g not in back:
            continue
        for alt in range(n_dim):
            if alt in last_slot:
                continue
            h = genes[alt]
            if h > n_segs or h in back:
                continue
            other_id = arms[_arm_of(alt, n_dim, n_arms)].id
            if (other_id, g) in bad or (last_id, h) in bad:
                continue
            genes[pos], genes[alt] = genes[alt], genes[pos]
            break
    return UpperSolution(tuple(genes))


def repair_all(
    x: UpperSolution,
    scene: VehicleScene,
    cfg: ScenarioConfig | None = None,
    use_bottom_up: bool = True,
    use_few_arms: bool = True,
) -> UpperSolution:
    cfg = cfg or scene.config
    x = repair_reachability(x, scene, cfg)
    x = repair_back_door(x, scene, cfg)
    if use_bottom_up:
        x = repair_bottom_up(x, scene)
    if use_few_arms:
        x = repair_few_arms(x, scene, cfg)
    return x
