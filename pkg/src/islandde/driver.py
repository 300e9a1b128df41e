"""Lockstep run loop shared by single runs, archipelagos and pruning runs.

Each island owns its population, search box and random stream and advances
one generation per barrier. Everything that crosses islands (epsilon level,
migration, pruning events, history records) happens single-threaded at the
barrier, so results do not depend on the number of workers.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .archipelago import IslandSpec, MigrationConfig, Topology, migrate
from .constraints import EpsilonSchedule, epsilon_level, ranking, strictly_better
from .core import Bounds, Individual, Population, Problem, init_population, random_members
from .engine import TerminationCriteria, evolve_generation
from .epidemic import diversity_score, maybe_epidemic
from .errors import ConfigurationError
from .history import Record, RunHistory
from .pruning import PruningConfig, prune_bounds, pruning_schedule
from .rng import ORCHESTRATION_STREAM, TAG_GENERATION, TAG_PRUNE, RandomSource

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    best: Individual
    history: RunHistory
    fes: int
    generations: int
    populations: list[Population]
    bounds: list[Bounds]
    epsilon: EpsilonSchedule | None = None
    pruned_bounds: list[Bounds] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.best.feasible


class _Island:
    def __init__(self, index: int, spec: IslandSpec, problem: Problem, seed: int, kernels):
        self.index = index
        self.spec = spec
        self.problem = problem
        self.kernels = kernels
        self.rng = RandomSource(seed, index + 1)
        self.adaptation = spec.effective_adaptation
        self.strategy = spec.fixed_strategy
        self.bounds = problem.bounds
        self.pop = init_population(problem, spec.population_size, self.rng, self.adaptation,
                                   self.strategy, kernels=kernels)
        self.fes = self.pop.size
        self.last_epidemic = 0
        self.diversity = math.nan
        self.fired = False

    def measure_diversity(self, generation: int, stride: int) -> None:
        if stride and generation % stride == 0:
            self.diversity = diversity_score(self.pop, self.problem.bounds, self.kernels)
        else:
            self.diversity = math.nan

    def step(self, generation: int, eps: float, stride: int) -> None:
        evolve_generation(self.pop, self.problem, self.adaptation,
                          self.rng.key(TAG_GENERATION, generation), eps, self.bounds,
                          self.kernels, inplace=True)
        self.fes += self.pop.size
        self.measure_diversity(generation, stride)
        self.fired = False
        epidemic = self.spec.epidemic
        if epidemic.enabled and not math.isnan(self.diversity):
            _, self.fired = maybe_epidemic(
                self.pop, epidemic, generation, self.last_epidemic, self.problem, self.rng,
                epsilon=eps, adaptation=self.adaptation, strategy=self.strategy,
                bounds=self.bounds, diversity=self.diversity, kernels=self.kernels)
            if self.fired:
                self.last_epidemic = generation
                self.fes += epidemic.sizes(self.pop.size)[1]
                log.debug("island %d: epidemic at generation %d", self.index, generation)

    def best_index(self, eps: float) -> int:
        return self.kernels.best_index(self.pop.f, self.pop.psi, eps)


class Driver:
    """Configure once, then :meth:`run`.

    Parameters
    ----------
    problem : Problem
    specs : list of IslandSpec
        One entry per island (or per partial run when pruning).
    termination : TerminationCriteria
    topology, migration :
        Migration is active when both are given and there is more than one island.
    pruning : PruningConfig, optional
        When enabled, ``len(specs)`` must equal ``pruning.n_runs`` and the
        termination must bound the number of generations.
    seed : int
    epsilon : EpsilonSchedule, optional
        Only used for constrained problems; unset fields are resolved at run time.
    workers : int
        Threads advancing islands between barriers.
    diversity_stride : int
        Diversity (and hence the epidemic trigger) is evaluated every
        ``diversity_stride`` generations; 0 disables it.
    """

    def __init__(self, problem: Problem, specs, termination: TerminationCriteria, *,
                 topology: Topology | None = None, migration: MigrationConfig | None = None,
                 pruning: PruningConfig | None = None, seed: int = 0,
                 epsilon: EpsilonSchedule | None = None, workers: int = 1, kernels=None,
                 diversity_stride: int = 1):
        self.problem = problem
        self.specs = list(specs)
        if not self.specs:
            raise ConfigurationError("at least one island is required", "islands")
        self.termination = termination
        self.topology = topology
        self.migration = migration if (topology is not None and len(self.specs) > 1) else None
        if topology is not None and topology.n_islands != len(self.specs):
            raise ConfigurationError("topology size differs from island count", "topology")
        self.pruning = pruning if pruning is not None and pruning.enabled else None
        self.seed = int(seed)
        self.epsilon = epsilon or EpsilonSchedule()
        self.workers = max(1, int(workers))
        self.kernels = kernels or _backend.kernels
        if diversity_stride < 0:
            raise ConfigurationError("diversity_stride must be >= 0", "diversity_stride")
        self.diversity_stride = int(diversity_stride)
        if any(s.epidemic.enabled for s in self.specs) and self.diversity_stride == 0:
            raise ConfigurationError("epidemics need diversity; set diversity_stride >= 1",
                                     "diversity_stride")
        self._events = {}
        if self.pruning is not None:
            self._check_pruning()

    def _check_pruning(self):
        cfg = self.pruning
        if cfg.n_runs != len(self.specs):
            raise ConfigurationError(f"pruning.n_runs={cfg.n_runs} but {len(self.specs)} runs "
                                     "configured", "pruning.n_runs")
        n_gen = self.termination.max_generations
        if n_gen is None:
            raise ConfigurationError("pruning schedules need max_generations",
                                     "termination.max_generations")
        for i, (gen, rho) in enumerate(pruning_schedule(cfg, n_gen)):
            n_keep = cfg.n_keep(i)
            if n_keep < 1:
                raise ConfigurationError(
                    f"event {i}: floor({rho} * {cfg.n_runs}) = 0 solutions in the cluster",
                    "pruning.n_runs")
            smallest = min(s.population_size for s in self.specs)
            if n_keep > smallest:
                raise ConfigurationError(
                    f"event {i}: {n_keep} elites exceed population size {smallest}",
                    "pruning.n_runs")
            self._events[gen] = (i, rho)

    # -- barrier-level helpers -------------------------------------------------

    def _best_across(self, islands, eps) -> tuple[int, int]:
        best = None
        for isl in islands:
            i = isl.best_index(eps)
            if best is None or strictly_better(isl.pop.f[i], isl.pop.psi[i],
                                               best[2].pop.f[best[1]],
                                               best[2].pop.psi[best[1]], eps):
                best = (isl.index, i, isl)
        return best[0], best[1]

    def _record(self, islands, generation, eps, pruning_event) -> Record:
        k, i = self._best_across(islands, eps)
        pop = islands[k].pop
        divs = [isl.diversity for isl in islands if not math.isnan(isl.diversity)]
        return Record(
            generation=generation,
            fes=sum(isl.fes for isl in islands),
            best_f=float(pop.f[i]),
            best_psi_max=float(pop.psi[i]),
            epsilon=float(eps),
            diversity=float(np.mean(divs)) if divs else math.nan,
            epidemic_fired=sum(isl.fired for isl in islands),
            pruning_event=pruning_event,
            island_best_f=tuple(float(isl.pop.f[isl.best_index(eps)]) for isl in islands),
        )

    def _prune(self, islands, event: int, rho: float, eps: float) -> Bounds:
        bests = [isl.pop.individual(isl.best_index(eps)) for isl in islands]
        order = ranking([b.f for b in bests], [b.psi_max for b in bests], eps)
        bests = [bests[j] for j in order]
        current = islands[0].bounds
        new = prune_bounds(np.array([b.x for b in bests]), rho, self.problem.bounds, current)
        n_keep = self.pruning.n_keep(event, len(islands))
        elites = bests[:n_keep]
        for isl in islands:
            n = isl.pop.size
            X, F, CR, S = random_members(new, n, isl.rng.key(TAG_PRUNE, event),
                                         isl.adaptation, isl.strategy)
            f, psi = self.problem.evaluate_batch(X, self.kernels)
            pop = Population(X, f, psi, F, CR, S, generation=isl.pop.generation)
            worst = ranking(f, psi, eps)[-n_keep:][::-1]
            for slot, elite in zip(worst, elites):
                pop.put(int(slot), elite)
            isl.pop = pop
            isl.bounds = new
            isl.fes += n
        log.debug("pruning event %d: rho=%s, %d elites", event, rho, n_keep)
        return new

    # -- main loop -------------------------------------------------------------

    def run(self) -> RunResult:
        problem = self.problem
        islands = [_Island(k, s, problem, self.seed, self.kernels)
                   for k, s in enumerate(self.specs)]
        total_pop = sum(isl.pop.size for isl in islands)
        constrained = problem.n_constraints > 0
        schedule = None
        if constrained:
            budget = self.termination.generation_budget(total_pop)
            if budget is None and self.epsilon.n_inf is None:
                raise ConfigurationError(
                    "constrained runs need max_generations, max_fes or epsilon.n_inf",
                    "termination")
            schedule = self.epsilon.resolve(
                budget if budget is not None else self.epsilon.n_inf,
                np.concatenate([isl.pop.psi for isl in islands]))

        def eps_at(g):
            return epsilon_level(schedule, g) if constrained else 0.0

        orchestration = RandomSource(self.seed, ORCHESTRATION_STREAM)
        history = RunHistory(len(islands))
        pruned = []
        for isl in islands:
            isl.measure_diversity(0, self.diversity_stride)
        history.append(self._record(islands, 0, eps_at(0), -1))
        best = self._update_best(islands, None)
        stall = 0
        g = 0
        migration_events = 0
        term = self.termination
        executor = ThreadPoolExecutor(self.workers) if self.workers > 1 else None
        try:
            while True:
                fes = sum(isl.fes for isl in islands)
                if term.max_generations is not None and g >= term.max_generations:
                    break
                if term.max_fes is not None and fes + total_pop > term.max_fes:
                    break
                if term.max_stall_generations is not None and stall >= term.max_stall_generations:
                    break
                g += 1
                eps = eps_at(g)
                if executor is None:
                    for isl in islands:
                        isl.step(g, eps, self.diversity_stride)
                else:
                    list(executor.map(lambda isl: isl.step(g, eps, self.diversity_stride),
                                      islands))
                if self.migration is not None and g % self.migration.interval == 0:
                    migrate([isl.pop for isl in islands], self.topology, self.migration,
                            migration_events, orchestration, eps)
                    migration_events += 1
                event = -1
                if g in self._events:
                    event, rho = self._events[g]
                    pruned.append(self._prune(islands, event, rho, eps))
                new_best = self._update_best(islands, best)
                stall = 0 if new_best is not best else stall + 1
                best = new_best
                history.append(self._record(islands, g, eps, event))
        finally:
            if executor is not None:
                executor.shutdown()
        return RunResult(best=best, history=history, fes=sum(isl.fes for isl in islands),
                         generations=g, populations=[isl.pop for isl in islands],
                         bounds=[isl.bounds for isl in islands], epsilon=schedule,
                         pruned_bounds=pruned)

    @staticmethod
    def _update_best(islands, best: Individual | None) -> Individual:
        """Best ever seen under the strict (epsilon = 0) order."""
        for isl in islands:
            i = isl.best_index(0.0)
            f, psi = isl.pop.f[i], isl.pop.psi[i]
            if best is None or strictly_better(f, psi, best.f, best.psi_max, 0.0):
                best = isl.pop.individual(i)
        return best
