"""jDE self-adaptation of the scale factor, crossover probability and strategy."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .rng import SlotStream

STRATEGIES = (1, 2, 3, 4)


@dataclass(frozen=True)
class AdaptationConfig:
    f_min: float = 0.1
    f_max: float = 1.0
    cr_min: float = 0.0
    cr_max: float = 1.0
    tau: float = 0.1
    adapt_strategy: bool = False
    strategy_pool: tuple[int, ...] = STRATEGIES

    def __post_init__(self):
        object.__setattr__(self, "strategy_pool", tuple(int(s) for s in self.strategy_pool))
        if not self.f_min < self.f_max:
            raise ConfigurationError("f_min must be below f_max", "adaptation.f_min")
        if not self.cr_min < self.cr_max:
            raise ConfigurationError("cr_min must be below cr_max", "adaptation.cr_min")
        if not (0.0 <= self.cr_min and self.cr_max <= 1.0):
            raise ConfigurationError("crossover range must lie in [0, 1]", "adaptation.cr_max")
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigurationError(f"tau={self.tau} outside [0, 1]", "adaptation.tau")
        if self.adapt_strategy and not self.strategy_pool:
            raise ConfigurationError("strategy self-adaptation needs a non-empty pool",
                                     "adaptation.strategy_pool")
        if any(s not in STRATEGIES for s in self.strategy_pool):
            raise ConfigurationError(f"strategies must be among {STRATEGIES}",
                                     "adaptation.strategy_pool")

    @property
    def delta_f(self) -> float:
        return self.f_max - self.f_min

    @property
    def delta_cr(self) -> float:
        return self.cr_max - self.cr_min


def params_from_draws(u: np.ndarray, config: AdaptationConfig, strategy: int = 1):
    """Fresh (F, Cr, strategy) arrays from an (n, 3) block of uniforms."""
    F = config.f_min + u[:, 0] * (config.f_max - config.f_min)
    CR = config.cr_min + u[:, 1] * (config.cr_max - config.cr_min)
    if config.adapt_strategy:
        pool = np.asarray(config.strategy_pool, dtype=np.int64)
        S = pool[np.floor(u[:, 2] * len(pool)).astype(np.int64)]
    else:
        S = np.full(u.shape[0], strategy, dtype=np.int64)
    return F, CR, S


def init_params(individual, config: AdaptationConfig, stream: SlotStream, strategy: int = 1):
    """Draw F, Cr (and strategy when adaptive) uniformly from their ranges."""
    u = np.array([stream.take(3)])
    F, CR, S = params_from_draws(u, config, strategy)
    individual.scale_factor = float(F[0])
    individual.crossover_prob = float(CR[0])
    individual.strategy = int(S[0])
    return individual


def adapt_params(individual, config: AdaptationConfig, stream: SlotStream):
    """Randomly reset each control parameter with probability ``tau``.

    Consumes six draws in the order (F value, F gate, Cr value, Cr gate,
    strategy gate, strategy value), matching the generation kernel.
    """
    fv, fg, cv, cg, sg, sv = stream.take(6)
    if fg < config.tau:
        individual.scale_factor = config.f_min + fv * (config.f_max - config.f_min)
    if cg < config.tau:
        individual.crossover_prob = config.cr_min + cv * (config.cr_max - config.cr_min)
    if config.adapt_strategy and sg < config.tau:
        pool = config.strategy_pool
        individual.strategy = pool[math.floor(sv * len(pool))]
    return individual
