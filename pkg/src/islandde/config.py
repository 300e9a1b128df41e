"""Experiment configuration files (YAML), validation and round-tripping.

A config has one section per subsystem::

    name: rastrigin-epidemic
    problem: {name: rastrigin, dimension: 30}
    islands: {count: 1, population_size: 64, strategy: adaptive}
    epidemic: {enabled: true, cooldown: 1000}
    termination: {max_generations: 5000}
    seeds: [1, 2, 3]

Omitted sections and keys take the library defaults.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .adaptation import AdaptationConfig
from .archipelago import IslandSpec, MigrationConfig, Topology, default_strategies
from .constraints import EpsilonSchedule
from .engine import TerminationCriteria
from .epidemic import EpidemicConfig
from .errors import ConfigurationError
from .problems import make_problem
from .pruning import PruningConfig


@dataclass(frozen=True)
class ProblemConfig:
    name: str = "sphere"
    dimension: int | None = None
    lower: float | list | None = None
    upper: float | list | None = None


@dataclass(frozen=True)
class IslandsConfig:
    """``strategy``: 1-4, ``"adaptive"``, a per-island list, or None for the
    default (adaptive on a single island, ring-ordered 1/3/2/4 otherwise)."""

    count: int = 1
    population_size: int = 64
    strategy: Any = None

    def __post_init__(self):
        if self.count < 1:
            raise ConfigurationError("count must be positive", "islands.count")
        if isinstance(self.strategy, list) and len(self.strategy) != self.count:
            raise ConfigurationError(f"{len(self.strategy)} strategies for {self.count} islands",
                                     "islands.strategy")


@dataclass(frozen=True)
class TopologyConfig:
    kind: str = "radial"
    rings: int | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "experiment"
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    islands: IslandsConfig = field(default_factory=IslandsConfig)
    topology: TopologyConfig = field(default_factory=TopologyConfig)
    migration: MigrationConfig = field(default_factory=MigrationConfig)
    adaptation: AdaptationConfig = field(default_factory=AdaptationConfig)
    epidemic: EpidemicConfig = field(default_factory=EpidemicConfig)
    pruning: PruningConfig = field(default_factory=PruningConfig)
    epsilon: EpsilonSchedule = field(default_factory=EpsilonSchedule)
    termination: TerminationCriteria = field(
        default_factory=lambda: TerminationCriteria(max_generations=1000))
    seeds: tuple[int, ...] = (1,)
    output: str = "results"
    workers: int = 1
    diversity_stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.seeds:
            raise ConfigurationError("at least one seed is required", "seeds")
        if self.workers < 1:
            raise ConfigurationError("workers must be positive", "workers")

    # -- building run objects ---------------------------------------------------

    def build_problem(self):
        p = self.problem
        return make_problem(p.name, p.dimension, p.lower, p.upper)

    @property
    def n_islands(self) -> int:
        if self.pruning.enabled:
            return self.pruning.n_runs
        return self.islands.count

    def build_topology(self) -> Topology | None:
        if self.pruning.enabled and self.islands.count == 1:
            return None
        return Topology(self.topology.kind, self.n_islands, self.topology.rings)

    def build_specs(self) -> list[IslandSpec]:
        n = self.n_islands
        strategy = self.islands.strategy
        if self.pruning.enabled and self.islands.count not in (1, n):
            raise ConfigurationError("with pruning, islands.count must be 1 or pruning.n_runs",
                                     "islands.count")
        if isinstance(strategy, list):
            if len(strategy) != n:
                raise ConfigurationError(f"{len(strategy)} strategies for {n} islands",
                                         "islands.strategy")
            strategies = strategy
        elif strategy is not None:
            strategies = [strategy] * n
        elif n == 1 or self.pruning.enabled:
            strategies = ["adaptive"] * n
        else:
            strategies = default_strategies(self.build_topology())
        return [IslandSpec(s, self.islands.population_size, self.adaptation, self.epidemic)
                for s in strategies]

    def driver(self, seed: int, workers: int | None = None, kernels=None):
        from .driver import Driver

        topology = self.build_topology()
        return Driver(self.build_problem(), self.build_specs(), self.termination,
                      topology=topology, migration=self.migration if topology else None,
                      pruning=self.pruning, seed=seed, epsilon=self.epsilon,
                      workers=workers or self.workers, kernels=kernels,
                      diversity_stride=self.diversity_stride)

    def validate(self) -> "ExperimentConfig":
        """Build every run object once so cross-section errors surface early."""
        self.driver(self.seeds[0])
        return self

    # -- serialisation ----------------------------------------------------------

    def to_dict(self) -> dict:
        return _plain(dataclasses.asdict(self))

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def dump(self, path) -> None:
        Path(path).write_text(self.dumps())


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


_SECTIONS = {
    "problem": ProblemConfig,
    "islands": IslandsConfig,
    "topology": TopologyConfig,
    "migration": MigrationConfig,
    "adaptation": AdaptationConfig,
    "epidemic": EpidemicConfig,
    "pruning": PruningConfig,
    "epsilon": EpsilonSchedule,
    "termination": TerminationCriteria,
}
_SCALARS = {"name", "seeds", "output", "workers", "diversity_stride"}


def _section(cls, data, path: str):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError("expected a mapping", path)
    known = {f.name for f in dataclasses.fields(cls) if f.init}
    for key in data:
        if key not in known:
            raise ConfigurationError(f"unknown key (expected one of {sorted(known)})",
                                     f"{path}.{key}")
    kwargs = dict(data)
    if cls is AdaptationConfig and "strategy_pool" in kwargs:
        kwargs["strategy_pool"] = tuple(kwargs["strategy_pool"])
    try:
        return cls(**kwargs)
    except ConfigurationError as exc:
        # section classes report "section.key" or a bare key; re-root under ``path``
        leaf = (exc.key or "").split(".", 1)[-1] if exc.key and exc.key != path else ""
        raise ConfigurationError(exc.message, f"{path}.{leaf}" if leaf else path) from None
    except TypeError as exc:
        raise ConfigurationError(str(exc), path) from None


def from_dict(data: dict, default_name: str = "experiment") -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a mapping at top level")
    for key in data:
        if key not in _SECTIONS and key not in _SCALARS:
            raise ConfigurationError("unknown key", key)
    kwargs = {k: _section(cls, data.get(k), k) for k, cls in _SECTIONS.items() if k in data}
    for k in _SCALARS:
        if k in data:
            kwargs[k] = data[k]
    kwargs.setdefault("name", default_name)
    if "seeds" in kwargs and not isinstance(kwargs["seeds"], (list, tuple)):
        raise ConfigurationError("seeds must be a list of integers", "seeds")
    return ExperimentConfig(**kwargs).validate()


def loads(text: str, default_name: str = "experiment") -> ExperimentConfig:
    return from_dict(yaml.safe_load(text) or {}, default_name)


def parse_config(path) -> ExperimentConfig:
    """Read and validate a YAML experiment file; the file stem is the default name."""
    path = Path(os.fspath(path))
    return loads(path.read_text(), default_name=path.stem)
