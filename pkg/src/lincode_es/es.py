"""(mu, lambda) and (mu + lambda) evolutionary strategies over generator matrices."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Sequence

from .codes import FitnessEvaluator, ProblemInstance, check_instance, optimal_fitness
from .gf2 import GeneratorMatrix, distance_rows, random_full_rank_rows
from .operators import crossover_rows, mutate_rows

COMMA = "comma"
PLUS = "plus"
VARIANTS = (COMMA, PLUS)

DEFAULT_GENERATIONS = 20_000
DEFAULT_TRACE_EVERY = 40


@dataclass(frozen=True)
class EsConfig:
    """Parameters of one ES run.

    ``trace_every`` switches on diversity snapshots (every that many
    generations, starting at generation 0). A traced run always spends the
    whole generation budget, even after an optimum has been found.
    """

    instance: ProblemInstance
    lam: int
    mu: int
    p_mut: float
    variant: str = COMMA
    use_crossover: bool = False
    max_generations: int = DEFAULT_GENERATIONS
    seed: int = 0
    trace_every: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if not 1 <= self.mu <= self.lam:
            raise ValueError(f"need 1 <= mu <= lambda, got mu={self.mu}, lambda={self.lam}")
        if self.variant == PLUS and self.lam == self.mu:
            raise ValueError("plus variant needs lambda > mu (no room for offspring)")
        if not 0 < self.p_mut <= 1:
            raise ValueError(f"p_mut must be in (0, 1], got {self.p_mut}")
        if self.max_generations < 0:
            raise ValueError("max_generations must be >= 0")
        if self.trace_every is not None and self.trace_every < 1:
            raise ValueError("trace_every must be >= 1")

    @classmethod
    def defaults(cls, instance: ProblemInstance, **overrides) -> "EsConfig":
        """lambda = n, mu = floor(n / 3), p_mut = 1 / n, 20 000 generations."""
        n = instance.n
        params = dict(lam=n, mu=max(1, n // 3), p_mut=1.0 / n)
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(instance, **params)

    @property
    def label(self) -> str:
        return self.variant + ("+xo" if self.use_crossover else "")


@dataclass(slots=True)
class Individual:
    rows: tuple[int, ...]
    fitness: int
    birth_evaluation: int
    n: int

    @property
    def genotype(self) -> GeneratorMatrix:
        return GeneratorMatrix(self.n, self.rows)


@dataclass
class EsState:
    generation: int
    population: list[Individual]
    evaluations: int
    best: Individual
    success_evaluation: int | None = None


@dataclass(frozen=True)
class Snapshot:
    generation: int
    best_fitness: int
    avg_fitness: float
    avg_pairwise_distance: float
    evaluations: int


@dataclass
class RunResult:
    config: EsConfig
    success: bool
    evaluations_to_success: int | None
    generations_used: int
    evaluations: int
    best: Individual
    diversity_trace: list[Snapshot] = field(default_factory=list)


# -- selection and quotas -------------------------------------------------


def select_truncation(
    pop: Sequence[Individual], mu: int, rng: random.Random
) -> list[Individual]:
    """The ``mu`` fittest individuals, best first; ties broken uniformly at random."""
    if not 1 <= mu <= len(pop):
        raise ValueError(f"cannot select {mu} of {len(pop)}")
    keyed = [(-ind.fitness, rng.random(), i) for i, ind in enumerate(pop)]
    keyed.sort()
    return [pop[i] for _, _, i in keyed[:mu]]


def offspring_quota(lam: int, mu: int, variant: str) -> list[int]:
    """Offspring per parent (best-ranked first); remainders go to the top parents."""
    if variant == PLUS:
        if lam <= mu:
            raise ValueError("plus variant needs lambda > mu")
        target = lam - mu
    elif variant == COMMA:
        target = lam
    else:
        raise ValueError(f"unknown variant {variant!r}")
    base, extra = divmod(target, mu)
    return [base + (1 if i < extra else 0) for i in range(mu)]


# -- diversity ------------------------------------------------------------


def diversity_snapshot(pop: Sequence[Individual]) -> tuple[float, float]:
    """Mean fitness and mean pairwise subspace distance of a population."""
    if len(pop) < 2:
        raise ValueError("diversity needs at least two individuals")
    avg_fit = sum(ind.fitness for ind in pop) / len(pop)
    dists = [distance_rows(a.rows, b.rows) for a, b in combinations(pop, 2)]
    return avg_fit, sum(dists) / len(dists)


# -- main loop ------------------------------------------------------------


class _Scorer:
    """Counts evaluations and tracks the best-so-far and first optimum."""

    def __init__(self, cfg: EsConfig, evaluate: Callable[[tuple[int, ...]], int]):
        self.evaluate = evaluate
        self.n = cfg.instance.n
        self.optimum = optimal_fitness(cfg.instance)

    def score(self, state: EsState, rows: tuple[int, ...], known: int | None = None) -> Individual:
        state.evaluations += 1
        fit = self.evaluate(rows) if known is None else known
        ind = Individual(rows, fit, state.evaluations, self.n)
        if fit > state.best.fitness:
            state.best = ind
        if fit == self.optimum and state.success_evaluation is None:
            state.success_evaluation = state.evaluations
        return ind


def initial_state(cfg: EsConfig, rng: random.Random, scorer: _Scorer) -> EsState:
    inst = cfg.instance
    placeholder = Individual((), -1, 0, inst.n)
    state = EsState(0, [], 0, placeholder)
    for _ in range(cfg.lam):
        rows = random_full_rank_rows(inst.k, inst.n, rng)
        state.population.append(scorer.score(state, rows))
    return state


def _step(state: EsState, cfg: EsConfig, rng: random.Random, scorer: _Scorer) -> EsState:
    n = cfg.instance.n
    pool = select_truncation(state.population, cfg.mu, rng)
    quotas = offspring_quota(cfg.lam, cfg.mu, cfg.variant)
    nxt = EsState(
        state.generation + 1, [], state.evaluations, state.best, state.success_evaluation
    )
    for idx, (parent, quota) in enumerate(zip(pool, quotas)):
        for _ in range(quota):
            if cfg.use_crossover:
                if cfg.mu > 1:
                    j = rng.randrange(cfg.mu - 1)
                    mate = pool[j + 1 if j >= idx else j]
                else:
                    mate = parent
                base = crossover_rows(parent.rows, mate.rows, rng)
            else:
                base = parent.rows
            child = mutate_rows(base, n, cfg.p_mut, rng)
            # an untouched copy of the parent keeps the parent's score
            known = parent.fitness if child is parent.rows else None
            nxt.population.append(scorer.score(nxt, child, known))
    if cfg.variant == PLUS:
        nxt.population.extend(pool)
    return nxt


def step(
    state: EsState,
    cfg: EsConfig,
    rng: random.Random,
    evaluate: Callable[[tuple[int, ...]], int] | None = None,
) -> EsState:
    """One generation: select, breed, evaluate, replace. Returns a new state."""
    scorer = _Scorer(cfg, evaluate or FitnessEvaluator(cfg.instance))
    return _step(state, cfg, rng, scorer)


def run(cfg: EsConfig, on_generation: Callable[[EsState], None] | None = None) -> RunResult:
    check_instance(cfg.instance)
    rng = random.Random(cfg.seed)
    scorer = _Scorer(cfg, FitnessEvaluator(cfg.instance))
    state = initial_state(cfg, rng, scorer)
    trace: list[Snapshot] = []
    tracing = cfg.trace_every is not None

    def snapshot() -> None:
        avg_fit, avg_dist = diversity_snapshot(state.population)
        trace.append(
            Snapshot(state.generation, state.best.fitness, avg_fit, avg_dist, state.evaluations)
        )

    if tracing:
        snapshot()
    while state.generation < cfg.max_generations:
        if state.success_evaluation is not None and not tracing:
            break
        state = _step(state, cfg, rng, scorer)
        if on_generation is not None:
            on_generation(state)
        if tracing and state.generation % cfg.trace_every == 0:
            snapshot()
    if tracing and (not trace or trace[-1].generation != state.generation):
        snapshot()
    return RunResult(
        config=cfg,
        success=state.success_evaluation is not None,
        evaluations_to_success=state.success_evaluation,
        generations_used=state.generation,
        evaluations=state.evaluations,
        best=state.best,
        diversity_trace=trace,
    )


def with_seed(cfg: EsConfig, seed: int) -> EsConfig:
    return replace(cfg, seed=seed)
