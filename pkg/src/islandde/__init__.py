"""Self-adaptive island-model Differential Evolution."""
from ._backend import kernels as _kernels
from .adaptation import AdaptationConfig
from .archipelago import IslandSpec, MigrationConfig, Topology, evolve_archipelago, migrate
from .config import ExperimentConfig, parse_config
from .constraints import EpsilonSchedule, compare_lexicographic, epsilon_level
from .core import Bounds, EqualityConstraint, Individual, Population, Problem, init_population
from .driver import Driver, RunResult
from .engine import TerminationCriteria, evolve_generation, run
from .epidemic import EpidemicConfig, diversity_score, maybe_epidemic
from .errors import ConfigurationError
from .history import RunHistory
from .problems import benchmark, make_problem
from .pruning import PruningConfig, prune_bounds, run_with_pruning

BACKEND = _kernels.NAME

__version__ = "0.1.0"

__all__ = [
    "AdaptationConfig", "BACKEND", "Bounds", "ConfigurationError", "Driver", "EpidemicConfig",
    "EpsilonSchedule", "EqualityConstraint", "ExperimentConfig", "Individual", "IslandSpec",
    "MigrationConfig", "Population", "Problem", "PruningConfig", "RunHistory", "RunResult",
    "TerminationCriteria", "Topology", "benchmark", "compare_lexicographic", "diversity_score",
    "epsilon_level", "evolve_archipelago", "evolve_generation", "init_population",
    "make_problem", "maybe_epidemic", "migrate", "parse_config", "prune_bounds", "run",
    "run_with_pruning",
]
