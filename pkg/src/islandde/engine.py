"""Differential evolution operators and the single-population run loop.

The per-slot functions (:func:`mutate`, :func:`crossover`, :func:`clip_bounds`,
:func:`select`) operate on one target at a time and read their random numbers
from a :class:`~islandde.rng.SlotStream`. :func:`evolve_generation` performs
the same steps for every slot at once through the kernel backend; both paths
consume a slot's stream in the same order:

====== ==============================================
draws  use
====== ==============================================
0-5    control parameter adaptation (see adaptation)
6-9    donor indices r1..r4
10     forced crossover index j_r
11..   one crossover draw per dimension
====== ==============================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .adaptation import STRATEGIES, AdaptationConfig
from .constraints import beats
from .core import Bounds, Individual, Population, Problem
from .errors import ConfigurationError
from .rng import SlotStream

#: distinct non-target indices read by each mutation strategy
INDEX_DEMAND = {1: 3, 2: 2, 3: 3, 4: 4}


def min_population(strategies) -> int:
    """Smallest population allowed for a set of strategies (6 when strategy 4 is used)."""
    return 6 if 4 in set(strategies) else 5


@dataclass(frozen=True)
class TerminationCriteria:
    """Stop as soon as any criterion that is set fires."""

    max_fes: int | None = None
    max_generations: int | None = None
    max_stall_generations: int | None = None

    def __post_init__(self):
        if self.max_fes is None and self.max_generations is None \
                and self.max_stall_generations is None:
            raise ConfigurationError("at least one termination criterion must be set",
                                     "termination")
        if self.max_fes is not None and self.max_fes < 1:
            raise ConfigurationError("max_fes must be positive", "termination.max_fes")
        if self.max_generations is not None and self.max_generations < 0:
            raise ConfigurationError("max_generations must be >= 0",
                                     "termination.max_generations")
        if self.max_stall_generations is not None and self.max_stall_generations < 1:
            raise ConfigurationError("max_stall_generations must be positive",
                                     "termination.max_stall_generations")

    def generation_budget(self, population_total: int) -> int | None:
        """Number of generations the budget allows, if bounded by generations or FES."""
        budgets = []
        if self.max_generations is not None:
            budgets.append(self.max_generations)
        if self.max_fes is not None:
            budgets.append(max(self.max_fes // population_total - 1, 0))
        return min(budgets) if budgets else None


def sample_indices(n: int, target: int, stream: SlotStream, count: int = 4) -> list[int]:
    """``count`` distinct indices from ``range(n)`` without ``target``."""
    excluded = [target]
    picks = []
    for k in range(count):
        v = math.floor(stream.uniform() * (n - 1 - k))
        for e in sorted(excluded):
            if v >= e:
                v += 1
        picks.append(v)
        excluded.append(v)
    return picks


def mutate(pop: Population, target_index: int, strategy: int, F: float,
           stream: SlotStream, best_index: int | None = None) -> np.ndarray:
    """Donor vector for ``target_index``; always consumes four index draws.

    ``best_index`` defaults to the lowest-index minimum-f member; pass the
    comparator's choice for constrained problems.
    """
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {strategy}", "strategy")
    X = pop.X
    r1, r2, r3, r4 = sample_indices(pop.size, target_index, stream)
    if best_index is None:
        best_index = int(np.argmin(pop.f))
    if strategy == 1:
        return X[r1] + F * (X[r2] - X[r3])
    if strategy == 2:
        return X[best_index] + F * (X[r1] - X[r2])
    xi = X[target_index]
    if strategy == 3:
        return xi + F * (X[r3] - xi) + F * (X[r1] - X[r2])
    return X[best_index] + F * (X[r1] - X[r2]) + F * (X[r3] - X[r4])


def crossover(target, donor: np.ndarray, Cr: float, stream: SlotStream) -> np.ndarray:
    """Binomial crossover; component ``j_r`` always comes from the donor."""
    x = target.x if isinstance(target, Individual) else np.asarray(target, dtype=float)
    d = x.size
    jr = math.floor(stream.uniform() * d)
    trial = x.copy()
    for j in range(d):
        if stream.uniform() <= Cr or j == jr:
            trial[j] = donor[j]
    return trial


def clip_bounds(trial, bounds: Bounds) -> np.ndarray:
    """Saturate each component at the violated bound."""
    t = np.asarray(trial, dtype=float)
    return np.where(t < bounds.lower, bounds.lower, np.where(t > bounds.upper, bounds.upper, t))


def select(target: Individual, trial: Individual, epsilon: float = 0.0) -> Individual:
    """Survivor of target vs trial; the trial wins ties."""
    if not (target.evaluated and trial.evaluated):
        raise ValueError("select needs evaluated individuals")
    if beats(trial.f, trial.psi_max, target.f, target.psi_max, epsilon):
        return trial
    return target


def evolve_generation(pop: Population, problem: Problem, adaptation: AdaptationConfig,
                      key: int, epsilon: float = 0.0, bounds: Bounds | None = None,
                      kernels=None, inplace: bool = False) -> Population:
    """One synchronous generation: adapt, mutate, cross, clip, evaluate, select.

    Every donor reads generation-G members only. ``key`` is the generation key;
    slot ``i`` draws from ``derive(key, i)``.
    """
    kernels = kernels or _backend.kernels
    bounds = bounds or problem.bounds
    out = pop if inplace else pop.copy()
    n, d = pop.X.shape
    U = np.empty((n, d))
    Fu = np.empty(n)
    CRu = np.empty(n)
    Su = np.empty(n, dtype=np.int64)
    best = kernels.best_index(pop.f, pop.psi, epsilon)
    pool = np.asarray(adaptation.strategy_pool, dtype=np.int64)
    kernels.make_trials(pop.X, pop.F, pop.CR, pop.S, best, key,
                        np.ascontiguousarray(bounds.lower), np.ascontiguousarray(bounds.upper),
                        adaptation.f_min, adaptation.f_max, adaptation.cr_min, adaptation.cr_max,
                        adaptation.tau, adaptation.adapt_strategy, pool, U, Fu, CRu, Su)
    fu, pu = problem.evaluate_batch(U, kernels)
    kernels.select(out.X, out.f, out.psi, out.F, out.CR, out.S, U, fu, pu, Fu, CRu, Su,
                   epsilon)
    out.generation = pop.generation + 1
    return out


def run(problem: Problem, island=None, termination: TerminationCriteria | None = None,
        seed: int = 0, epsilon=None, kernels=None, diversity_stride: int = 1):
    """Single-population run; see :class:`islandde.driver.Driver` for the loop.

    ``island`` is an :class:`~islandde.archipelago.IslandSpec` (population
    size, strategy, adaptation and epidemic settings).
    """
    from .archipelago import IslandSpec
    from .driver import Driver

    island = island or IslandSpec()
    termination = termination or TerminationCriteria(max_generations=1000)
    return Driver(problem, [island], termination, seed=seed, epsilon=epsilon,
                  kernels=kernels, diversity_stride=diversity_stride).run()
