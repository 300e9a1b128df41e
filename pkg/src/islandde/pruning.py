"""Search-space pruning by clustering the bests of independent partial runs."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Bounds
from .errors import ConfigurationError

# absorbs representation error in rho * n_runs (0.2 * 50 must give 10, not 9)
_FLOOR_SLACK = 1e-9


@dataclass(frozen=True)
class PruningConfig:
    enabled: bool = False
    n_runs: int = 16
    rho0: float = 0.3
    delta_rho: float = 0.1
    n_events: int = 3
    first_event_frac: float = 0.4

    def __post_init__(self):
        if self.n_runs < 1:
            raise ConfigurationError("n_runs must be positive", "pruning.n_runs")
        if self.n_events < 1:
            raise ConfigurationError("n_events must be positive", "pruning.n_events")
        if not 0.0 < self.rho0 <= 1.0:
            raise ConfigurationError("rho0 outside (0, 1]", "pruning.rho0")
        if self.delta_rho < 0:
            raise ConfigurationError("delta_rho must be >= 0", "pruning.delta_rho")
        if not self.rho(self.n_events - 1) > 0:
            raise ConfigurationError("rho0 - (n_events - 1) * delta_rho must stay > 0",
                                     "pruning.delta_rho")
        if not 0.0 < self.first_event_frac < 1.0:
            raise ConfigurationError("first_event_frac must lie in (0, 1)",
                                     "pruning.first_event_frac")

    def rho(self, event: int) -> float:
        return round(self.rho0 - event * self.delta_rho, 12)

    def n_keep(self, event: int, n_runs: int | None = None) -> int:
        """Cluster size (= elites re-seeded into every run) at ``event``."""
        n_runs = self.n_runs if n_runs is None else n_runs
        return math.floor(self.rho(event) * n_runs + _FLOOR_SLACK)


def pruning_schedule(config: PruningConfig, n_generations: int) -> list[tuple[int, float]]:
    """``(generation, rho)`` of every pruning event."""
    if n_generations < 1:
        raise ConfigurationError("pruning needs a positive generation budget",
                                 "termination.max_generations")
    first = math.floor(config.first_event_frac * n_generations + _FLOOR_SLACK)
    spacing = (n_generations - first) // config.n_events
    events = [(first + i * spacing, config.rho(i)) for i in range(config.n_events)]
    if first < 1 or spacing < 1 or events[-1][0] >= n_generations:
        raise ConfigurationError(
            f"{config.n_events} pruning events from generation {first} do not fit in "
            f"{n_generations} generations", "pruning")
    return events


def prune_bounds(best_set, rho: float, original: Bounds, current: Bounds) -> Bounds:
    """Relaxed hull of the best ``floor(rho * len(best_set))`` points, within ``current``.

    ``best_set`` rows are sorted best-first. The relaxation ``0.5 (1 - rho)``
    scales the original box width. The result never extends beyond
    ``current``; a degenerate result falls back to ``current``.
    """
    pts = np.atleast_2d(np.asarray(best_set, dtype=float))
    n_keep = math.floor(rho * pts.shape[0] + _FLOOR_SLACK)
    if pts.shape[0] == 0 or n_keep < 1:
        raise ValueError(f"cluster of floor({rho} * {pts.shape[0]}) points is empty")
    cluster = pts[:n_keep]
    relax = 0.5 * (1.0 - rho) * original.width
    lower = np.maximum(cluster.min(axis=0) - relax, current.lower)
    upper = np.minimum(cluster.max(axis=0) + relax, current.upper)
    if np.any(lower >= upper):
        warnings.warn("pruned box is degenerate; keeping the current bounds", RuntimeWarning,
                      stacklevel=2)
        return current
    return Bounds(lower, upper)


def run_with_pruning(problem, island=None, config: PruningConfig | None = None,
                     termination=None, seed: int = 0, epsilon=None, workers: int = 1,
                     kernels=None, diversity_stride: int = 1):
    """``config.n_runs`` independent partial runs with pruning events.

    The runs are the islands of a lockstep driver without migration. The
    merged history carries one ``island_k_best_f`` column per run and the
    min-aggregate in ``best_f``.
    """
    from .archipelago import IslandSpec
    from .driver import Driver
    from .engine import TerminationCriteria

    config = config or PruningConfig(enabled=True)
    island = island or IslandSpec()
    termination = termination or TerminationCriteria(max_generations=1000)
    specs = [island] * config.n_runs
    return Driver(problem, specs, termination, pruning=config, seed=seed, epsilon=epsilon,
                  workers=workers, kernels=kernels, diversity_stride=diversity_stride).run()
