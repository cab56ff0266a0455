"""Upper-layer genetic algorithm: tournament selection, order crossover,
swap mutation, repair hook, elitist generational replacement.

Evaluation is a pure function of the genotype, so the population can be
scored by a worker pool without affecting results; all randomness lives in a
single master RNG stream, making runs bit-reproducible for a fixed seed
regardless of worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from .evaluation import EvaluationReport, evaluate
from .genotype import UpperSolution
from .repair import repair_all
from .scene import ScenarioConfig, VehicleScene
from .seeding import build_seed_population, random_population


@dataclass(frozen=True)
class GaConfig:
    n_pop: int = 100
    n_gen: int = 50
    n_t: int = 3
    mutation_rate: float = 0.02
    seed: int = 0
    elitism_count: int = 2
    crossover_rate: float = 1.0
    use_seeding: bool = True
    use_repair_bottom_up: bool = True
    use_repair_few_arms: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.n_pop % 2:
            raise ValueError("n_pop must be even")
        if self.n_t < 2:
            raise ValueError("tournament size must be at least 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")


@dataclass
class GenRecord:
    generation: int
    best_objective: float
    mean_objective: float
    best_feasible: bool
    best_genes: tuple[int, ...]


@dataclass
class RunTrace:
    generations: list[GenRecord] = field(default_factory=list)


@dataclass
class GaResult:
    best: UpperSolution
    report: EvaluationReport
    trace: RunTrace


# ---------------------------------------------------------------------------
# operators


def tournament_select(pop, objectives, n_t: int, rng) -> int:
    """Index of the lowest-objective individual among n_t uniform draws
    (with replacement)."""
    draws = rng.integers(0, len(pop), size=n_t)
    best = int(draws[0])
    for d in draws[1:]:
        if objectives[int(d)] < objectives[best]:
            best = int(d)
    return best


def order_crossover(
    p1: UpperSolution, p2: UpperSolution, k_s: int, k_e: int
) -> tuple[UpperSolution, UpperSolution]:
    """Order crossover with 1-based inclusive cut positions: each child keeps
    one parent's genes on [k_s, k_e] and fills the rest left-to-right with the
    other parent's remaining genes in their original order."""
    n = len(p1.genes)
    if not (1 <= k_s <= k_e <= n):
        raise ValueError(f"cut points ({k_s}, {k_e}) outside 1..{n}")

    def make(keeper, donor):
        kept = keeper.genes[k_s - 1 : k_e]
        kept_set = set(kept)
        rest = iter(g for g in donor.genes if g not in kept_set)
        genes = [
            keeper.genes[i] if k_s - 1 <= i < k_e else next(rest) for i in range(n)
        ]
        return UpperSolution(tuple(genes))

    return make(p1, p2), make(p2, p1)


def inversion_mutation(x: UpperSolution, rate: float, rng) -> UpperSolution:
    """With probability `rate`, swap two uniformly chosen distinct genes."""
    if rng.random() >= rate:
        return x
    n = len(x.genes)
    i = int(rng.integers(0, n))
    j = int(rng.integers(0, n - 1))
    if j >= i:
        j += 1
    genes = list(x.genes)
    genes[i], genes[j] = genes[j], genes[i]
    return UpperSolution(tuple(genes))


# ---------------------------------------------------------------------------
# parallel evaluation

_worker_env: tuple[VehicleScene, ScenarioConfig] | None = None


def _init_worker(scene, cfg):
    global _worker_env
    _worker_env = (scene, cfg)


def _eval_genes(genes):
    scene, cfg = _worker_env
    return evaluate(UpperSolution(genes), scene, cfg)


class PopulationEvaluator:
    """Caches reports by genotype; optional fork-based worker pool."""

    def __init__(self, scene: VehicleScene, cfg: ScenarioConfig, workers: int = 1):
        self.scene = scene
        self.cfg = cfg
        self.cache: dict[tuple[int, ...], EvaluationReport] = {}
        self.pool = None
        if workers > 1:
            ctx = multiprocessing.get_context("fork")
            self.pool = ctx.Pool(workers, initializer=_init_worker, initargs=(scene, cfg))

    def evaluate_all(self, pop: list[UpperSolution]) -> list[EvaluationReport]:
        missing = sorted({x.genes for x in pop if x.genes not in self.cache})
        if missing:
            if self.pool is not None:
                reports = self.pool.map(_eval_genes, missing)
            else:
                reports = [evaluate(UpperSolution(g), self.scene, self.cfg) for g in missing]
            self.cache.update(zip(missing, reports))
        return [self.cache[x.genes] for x in pop]

    def close(self):
        if self.pool is not None:
            self.pool.close()
            self.pool.join()
            self.pool = None


# ---------------------------------------------------------------------------
# the loop


def run(
    scene: VehicleScene,
    cfg: ScenarioConfig | None = None,
    ga_cfg: GaConfig | None = None,
    seed_population: list[UpperSolution] | None = None,
) -> GaResult:
    cfg = cfg or scene.config
    ga_cfg = ga_cfg or GaConfig()
    rng = np.random.default_rng(ga_cfg.seed)
    n_dim = scene.n_segs + cfg.n_d

    if seed_population is not None:
        if len(seed_population) != ga_cfg.n_pop:
            raise ValueError("seed population size must equal n_pop")
        pop = list(seed_population)
    elif ga_cfg.use_seeding:
        pop = build_seed_population(scene, cfg, ga_cfg.n_pop, rng)
    else:
        pop = random_population(scene, cfg, ga_cfg.n_pop, rng)

    evaluator = PopulationEvaluator(scene, cfg, ga_cfg.workers)
    trace = RunTrace()
    try:
        reports = evaluator.evaluate_all(pop)
        best_i = min(range(len(pop)), key=lambda i: reports[i].objective)
        best, best_report = pop[best_i], reports[best_i]
        _record(trace, 0, pop, reports)

        for g in range(1, ga_cfg.n_gen + 1):
            objectives = [r.objective for r in reports]
            order = sorted(range(len(pop)), key=lambda i: objectives[i])
            new_pop = [pop[i] for i in order[: ga_cfg.elitism_count]]
            while len(new_pop) < ga_cfg.n_pop:
                p1 = pop[tournament_select(pop, objectives, ga_cfg.n_t, rng)]
                p2 = pop[tournament_select(pop, objectives, ga_cfg.n_t, rng)]
                if rng.random() < ga_cfg.crossover_rate:
                    cuts = sorted(int(v) for v in rng.integers(1, n_dim + 1, size=2))
                    c1, c2 = order_crossover(p1, p2, cuts[0], cuts[1])
                else:
                    c1, c2 = p1, p2
                for child in (c1, c2):
                    child = inversion_mutation(child, ga_cfg.mutation_rate, rng)
                    child = repair_all(
                        child,
                        scene,
                        cfg,
                        use_bottom_up=ga_cfg.use_repair_bottom_up,
                        use_few_arms=ga_cfg.use_repair_few_arms,
                    )
                    if len(new_pop) < ga_cfg.n_pop:
                        new_pop.append(child)
            pop = new_pop
            reports = evaluator.evaluate_all(pop)
            gen_best = min(range(len(pop)), key=lambda i: reports[i].objective)
            if reports[gen_best].objective < best_report.objective:
                best, best_report = pop[gen_best], reports[gen_best]
            _record(trace, g, pop, reports)
    finally:
        evaluator.close()
    return GaResult(best=best, report=best_report, trace=trace)


def _record(trace: RunTrace, g: int, pop, reports) -> None:
    best_i = min(range(len(pop)), key=lambda i: reports[i].objective)
    trace.generations.append(
        GenRecord(
            generation=g,
            best_objective=reports[best_i].objective,
            mean_objective=float(np.mean([r.objective for r in reports])),
            best_feasible=reports[best_i].strong_feasible,
            best_genes=pop[best_i].genes,
        )
    )
