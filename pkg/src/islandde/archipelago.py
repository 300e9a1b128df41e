"""Island model: topologies, migration and the lockstep archipelago run."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .adaptation import STRATEGIES, AdaptationConfig
from .constraints import ranking
from .core import MIN_POPULATION, Population
from .engine import min_population
from .epidemic import EpidemicConfig
from .errors import ConfigurationError
from .rng import TAG_MIGRATION, RandomSource, derive, uniform_at

KINDS = ("radial", "ring", "fully-connected")
FORWARD, BACKWARD = "forward", "backward"
#: strategies per radial ring, innermost first: explore inside, exploit outside
RING_STRATEGIES = (1, 3, 2, 4)


@dataclass
class Topology:
    """Directed migration graph.

    The radial archipelago is ``rings`` concentric rings of
    ``n_islands // rings`` islands; island ``k`` sits on ring ``k // spokes``
    and spoke ``k % spokes``. Forward tides flow outward along a spoke,
    backward tides inward, alternating at each migration event.
    """

    kind: str = "radial"
    n_islands: int = 1
    rings: int | None = None
    phase: str = FORWARD

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown topology {self.kind!r}; use one of {KINDS}",
                                     "topology.kind")
        if self.n_islands < 1:
            raise ConfigurationError("n_islands must be positive", "topology.n_islands")
        if self.kind == "radial":
            if self.rings is None:
                self.rings = next(r for r in (4, 2, 1) if self.n_islands % r == 0)
            if self.rings < 1 or self.n_islands % self.rings:
                raise ConfigurationError(
                    f"{self.n_islands} islands cannot form {self.rings} equal rings",
                    "topology.rings")
        if self.phase not in (FORWARD, BACKWARD):
            raise ConfigurationError("phase must be forward or backward", "topology.phase")

    @property
    def spokes(self) -> int:
        return self.n_islands // (self.rings or 1)

    def coords(self, island: int) -> tuple[int, int]:
        return divmod(island, self.spokes)

    def index(self, ring: int, spoke: int) -> int:
        return ring * self.spokes + spoke

    def flip(self) -> None:
        if self.kind == "radial":
            self.phase = BACKWARD if self.phase == FORWARD else FORWARD


def neighbors(topology: Topology, island: int, phase: str | None = None) -> list[int]:
    """Destinations of ``island``'s emigrants (self-loops never appear)."""
    n = topology.n_islands
    if not 0 <= island < n:
        raise IndexError(f"island {island} outside 0..{n - 1}")
    if topology.kind == "ring":
        dest = (island + 1) % n
        return [] if dest == island else [dest]
    if topology.kind == "fully-connected":
        return [k for k in range(n) if k != island]
    phase = phase or topology.phase
    ring, spoke = topology.coords(island)
    ring += 1 if phase == FORWARD else -1
    if not 0 <= ring < topology.rings:
        return []
    return [topology.index(ring, spoke)]


def default_strategies(topology: Topology, order=RING_STRATEGIES) -> list[int]:
    """Fixed strategy per island: by ring for radial, cyclic otherwise."""
    if topology.kind == "radial":
        rings = topology.rings
        return [order[topology.coords(k)[0] * len(order) // rings]
                for k in range(topology.n_islands)]
    return [order[k % len(order)] for k in range(topology.n_islands)]


@dataclass(frozen=True)
class MigrationConfig:
    """Every ``interval`` generations each edge fires with ``probability``,
    copying the best ``fraction`` of the source population."""

    interval: int = 100
    probability: float = 0.5
    fraction: float = 0.05

    def __post_init__(self):
        if self.interval < 1:
            raise ConfigurationError("interval must be positive", "migration.interval")
        if not 0.0 <= self.probability <= 1.0:
            raise ConfigurationError("probability outside [0, 1]", "migration.probability")
        if not 0.0 <= self.fraction < 1.0:
            raise ConfigurationError("fraction outside [0, 1)", "migration.fraction")

    def n_emigrants(self, population_size: int) -> int:
        return max(1, int(np.floor(self.fraction * population_size)))


@dataclass(frozen=True)
class IslandSpec:
    """Algorithm run on one island. ``strategy`` is 1-4 or ``"adaptive"``."""

    strategy: int | str = "adaptive"
    population_size: int = 64
    adaptation: AdaptationConfig = field(default_factory=AdaptationConfig)
    epidemic: EpidemicConfig = field(default_factory=EpidemicConfig)

    def __post_init__(self):
        if self.strategy != "adaptive" and self.strategy not in STRATEGIES:
            raise ConfigurationError(f"strategy must be 1-4 or 'adaptive', got {self.strategy!r}",
                                     "islands.strategy")
        if self.population_size < MIN_POPULATION:
            raise ConfigurationError(
                f"population size {self.population_size} below minimum {MIN_POPULATION}: "
                "mutation needs 4 distinct donor indices besides the target",
                "islands.population_size")
        used = self.effective_adaptation.strategy_pool if self.adaptive else (self.strategy,)
        need = min_population(used)
        if self.population_size < need:
            raise ConfigurationError(
                f"population size {self.population_size} too small for strategy 4 "
                f"(needs >= {need})", "islands.population_size")

    @property
    def adaptive(self) -> bool:
        return self.strategy == "adaptive"

    @property
    def fixed_strategy(self) -> int:
        return 1 if self.adaptive else int(self.strategy)

    @property
    def effective_adaptation(self) -> AdaptationConfig:
        if self.adaptation.adapt_strategy == self.adaptive:
            return self.adaptation
        return replace(self.adaptation, adapt_strategy=self.adaptive)


def migrate(islands: list[Population], topology: Topology, config: MigrationConfig,
            event_index: int, rng: RandomSource, epsilon: float = 0.0) -> list[Population]:
    """One synchronous migration event (in place); flips the radial tide afterwards.

    Emigrants are the best ``n_emigrants`` of each source before any
    replacement. Each edge fires independently; arrivals overwrite the
    destination's current worst members, sources processed in ascending order.
    """
    if len(islands) != topology.n_islands:
        raise ValueError("island count does not match topology")
    key = rng.key(TAG_MIGRATION, event_index)
    emigrants = []
    for pop in islands:
        best = ranking(pop.f, pop.psi, epsilon)[:config.n_emigrants(pop.size)]
        emigrants.append(tuple(a[best].copy() for a in (pop.X, pop.f, pop.psi, pop.F,
                                                        pop.CR, pop.S)))
    for src in range(topology.n_islands):
        for dst in neighbors(topology, src):
            if not uniform_at(derive(key, src, dst), 0) < config.probability:
                continue
            pop = islands[dst]
            X, f, psi, F, CR, S = emigrants[src]
            nb = len(f)
            if nb >= pop.size:
                raise ConfigurationError("migrants would replace a whole island",
                                         "migration.fraction")
            worst = ranking(pop.f, pop.psi, epsilon)[-nb:][::-1]
            pop.X[worst] = X
            pop.f[worst] = f
            pop.psi[worst] = psi
            pop.F[worst] = F
            pop.CR[worst] = CR
            pop.S[worst] = S
    topology.flip()
    return islands


def evolve_archipelago(problem, specs, topology: Topology | None = None,
                       migration: MigrationConfig | None = None, termination=None,
                       seed: int = 0, epsilon=None, workers: int = 1, kernels=None,
                       diversity_stride: int = 1):
    """Run all islands in lockstep with periodic migration; returns a RunResult."""
    from .driver import Driver
    from .engine import TerminationCriteria

    specs = list(specs)
    topology = topology or Topology("radial", len(specs))
    if topology.n_islands != len(specs):
        raise ConfigurationError("one IslandSpec per island required", "islands")
    termination = termination or TerminationCriteria(max_generations=1000)
    return Driver(problem, specs, termination, topology=topology,
                  migration=migration or MigrationConfig(), seed=seed, epsilon=epsilon,
                  workers=workers, kernels=kernels, diversity_stride=diversity_stride).run()
