"""Boundary-aligned initial population.

The side panel with the most segments becomes the reference; its height range
is split evenly between the one-side arms (lowest block to the frontmost
arm), and the split heights are replicated on every other panel.  Further
seeds enumerate +-1..+-delta shifts of each boundary (depth-first, raise
before lower); the rest of the population is filled with random permutations.
When the scene has a roof its strokes are treated as a continuation of the
reference panel's height stack, and boundaries project onto it the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

from .genotype import UpperSolution, random_solution
from .scene import ScenarioConfig, ScenarioError, VehicleScene


@dataclass(frozen=True)
class BoundarySet:
    heights: tuple[int, ...]  # cumulative indices on the reference stack


def select_reference_panel(scene: VehicleScene) -> int:
    sides = [p for p in scene.panels if p.kind == "vertical_side"]
    if not sides:
        raise ScenarioError("no vertical side panel to use as seeding reference")
    return max(sides, key=lambda p: (len(scene.panel_segment_ids(p.id)), -p.id)).id


def _reference_stack_size(scene: VehicleScene) -> tuple[int, int, int]:
    ref = select_reference_panel(scene)
    ref_count = len(scene.panel_segment_ids(ref))
    roof = next((p for p in scene.panels if p.kind == "roof"), None)
    roof_count = len(scene.panel_segment_ids(roof.id)) if roof else 0
    return ref, ref_count, ref_count + roof_count


def base_boundaries(scene: VehicleScene) -> BoundarySet:
    _, _, stack = _reference_stack_size(scene)
    n = scene.n_arms_side
    return BoundarySet(tuple(round(i * stack / n) for i in range(1, n)))


def solution_from_boundaries(
    bounds: BoundarySet, scene: VehicleScene, cfg: ScenarioConfig | None = None
) -> UpperSolution | None:
    """Build the genotype whose per-panel blocks follow the boundary heights;
    None when a block overflows its slot."""
    cfg = cfg or scene.config
    n_arms = scene.n_arms_side
    n_segs = scene.n_segs
    n_dim = n_segs + cfg.n_d
    if n_dim % n_arms:
        raise ScenarioError(f"n_segs + n_d = {n_dim} not divisible by {n_arms} arms")
    width = n_dim // n_arms
    _, ref_count, stack = _reference_stack_size(scene)
    cuts = (0,) + bounds.heights + (stack,)
    if list(cuts) != sorted(set(cuts)):
        return None
    if any(h < 1 or h > stack - 1 for h in bounds.heights):
        return None

    per_arm: list[list[int]] = [[] for _ in range(n_arms)]
    for panel in scene.panels:
        ids = scene.panel_segment_ids(panel.id)  # bottom to top
        n_p = len(ids)
        if panel.kind == "roof":
            # roof heights continue the reference stack above ref_count
            level = [ref_count + h for h in range(1, n_p + 1)]
        else:
            level = list(range(1, n_p + 1))
        top = level[-1] if level else 0
        for a in range(n_arms):
            lo = min(cuts[a], top)  # short panels: clamp to nearest valid cut
            hi = min(cuts[a + 1], top)
            per_arm[a].extend(sid for sid, lv in zip(ids, level) if lo < lv <= hi)

    if any(len(block) > width for block in per_arm):
        return None
    genes: list[int] = []
    dummy = n_segs + 1
    for block in per_arm:
        genes.extend(block)
        for _ in range(width - len(block)):
            genes.append(dummy)
            dummy += 1
    return UpperSolution(tuple(genes))


def enumerate_boundary_sets(scene: VehicleScene, cfg: ScenarioConfig, limit: int):
    """Base set first, then the depth-first +-1..+-delta shift enumeration."""
    base = base_boundaries(scene)
    _, _, stack = _reference_stack_size(scene)
    out = [base]
    n_b = len(base.heights)

    def extend(shifted: tuple[int, ...], i: int) -> None:
        if len(out) >= limit:
            return
        if i == n_b:
            if shifted != base.heights:
                out.append(BoundarySet(shifted))
            return
        for j in range(1, cfg.delta + 1):
            for sign in (1, -1):
                h = base.heights[i] + sign * j
                if 1 <= h <= stack - 1:
                    extend(shifted[:i] + (h,) + shifted[i + 1 :], i + 1)
                if len(out) >= limit:
                    return

    if cfg.delta > 0 and n_b > 0:
        extend(base.heights, 0)
    return out


def build_seed_population(
    scene: VehicleScene,
    cfg: ScenarioConfig,
    n_pop: int,
    rng,
) -> list[UpperSolution]:
    """Boundary-aligned seeds (equal split first) topped up with random
    permutations to n_pop individuals."""
    n_dim = scene.n_segs + cfg.n_d
    pop: list[UpperSolution] = []
    for bounds in enumerate_boundary_sets(scene, cfg, n_pop - 1):
        sol = solution_from_boundaries(bounds, scene, cfg)
        if sol is not None:
            pop.append(sol)
        if len(pop) >= n_pop - 1:
            break
    while len(pop) < n_pop:
        pop.append(random_solution(n_dim, rng))
    return pop


def random_population(scene: VehicleScene, cfg: ScenarioConfig, n_pop: int, rng):
    n_dim = scene.n_segs + cfg.n_d
    return [random_solution(n_dim, rng) for _ in range(n_pop)]
