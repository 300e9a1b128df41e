"""Diversity score and the epidemic partial restart."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .adaptation import AdaptationConfig
from .constraints import ranking
from .core import Bounds, Population, Problem, random_members
from .errors import ConfigurationError
from .rng import TAG_EPIDEMIC, TAG_REINIT, RandomSource, slot_keys, uniforms

REINIT_DOMAINS = ("current", "original")


@dataclass(frozen=True)
class EpidemicConfig:
    """Suggested ranges: cooldown 500-2000, d_tol 1e-4..1e-2, rho_elite 0.05-0.25,
    rho_ill 0.75-1."""

    enabled: bool = False
    d_tol: float = 1e-3
    rho_elite: float = 0.1
    rho_ill: float = 1.0
    cooldown: int = 1000
    reinit_domain: str = "current"

    def __post_init__(self):
        if not self.d_tol > 0:
            raise ConfigurationError("d_tol must be > 0", "epidemic.d_tol")
        for name in ("rho_elite", "rho_ill"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name}={v} outside [0, 1]", f"epidemic.{name}")
        if self.cooldown < 1:
            raise ConfigurationError("cooldown must be positive", "epidemic.cooldown")
        if self.reinit_domain not in REINIT_DOMAINS:
            raise ConfigurationError(f"reinit_domain must be one of {REINIT_DOMAINS}",
                                     "epidemic.reinit_domain")

    def sizes(self, population_size: int) -> tuple[int, int]:
        """(immune elites, reinitialised members); at least one elite is kept."""
        n_elite = min(max(1, int(np.floor(self.rho_elite * population_size))), population_size)
        n_ill = int(np.floor(self.rho_ill * (population_size - n_elite)))
        return n_elite, n_ill


def diversity_score(pop: Population, bounds: Bounds, kernels=None) -> float:
    """Mean pairwise Euclidean distance with coordinates scaled to the unit box."""
    if pop.size < 2:
        raise ValueError("diversity is undefined for fewer than two members")
    kernels = kernels or _backend.kernels
    return float(kernels.diversity(pop.X, np.ascontiguousarray(bounds.width)))


def maybe_epidemic(pop: Population, config: EpidemicConfig, generation: int,
                   last_epidemic_gen: int, problem: Problem, rng: RandomSource, *,
                   epsilon: float = 0.0, adaptation: AdaptationConfig | None = None,
                   strategy: int = 1, bounds: Bounds | None = None,
                   diversity: float | None = None, kernels=None) -> tuple[Population, bool]:
    """Reinitialise most non-elite members when diversity has collapsed.

    Fires when enabled, the diversity (scaled by the problem's original box)
    is below ``d_tol`` and at least ``cooldown`` generations passed since the
    previous epidemic. The population is modified in place. Reinitialised
    members are drawn from ``bounds`` (the current, possibly pruned, box);
    ``None`` or ``reinit_domain="original"`` selects the problem box.
    """
    if not config.enabled or generation - last_epidemic_gen < config.cooldown:
        return pop, False
    if diversity is None:
        diversity = diversity_score(pop, problem.bounds, kernels)
    if not diversity < config.d_tol:
        return pop, False

    n = pop.size
    n_elite, n_ill = config.sizes(n)
    order = ranking(pop.f, pop.psi, epsilon)
    candidates = np.sort(order[n_elite:])
    if n_ill == 0:
        return pop, True
    draw = uniforms(slot_keys(rng.key(TAG_EPIDEMIC, generation), 1), candidates.size)[0]
    victims = np.sort(candidates[np.argsort(draw, kind="stable")[:n_ill]])

    if config.reinit_domain == "original" or bounds is None:
        bounds = problem.bounds
    X, F, CR, S = random_members(bounds, n, rng.key(TAG_REINIT, generation), adaptation,
                                 strategy)
    X, F, CR, S = X[victims], F[victims], CR[victims], S[victims]
    f, psi = problem.evaluate_batch(X, kernels)
    pop.X[victims] = X
    pop.f[victims] = f
    pop.psi[victims] = psi
    pop.F[victims] = F
    pop.CR[victims] = CR
    pop.S[victims] = S
    return pop, True
