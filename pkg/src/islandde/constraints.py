"""Epsilon-level lexicographic comparison and the epsilon decay schedule."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError

DEFAULT_EPS_INF = 1e-8
EPS0_PERCENTILE = 90.0


@dataclass(frozen=True)
class EpsilonSchedule:
    """Geometric decay of the violation tolerance from ``eps0`` to ``eps_inf``.

    ``eps0``, ``n0`` and ``n_inf`` may be left as None and filled by
    :meth:`resolve` once the generation budget and the initial population
    are known.
    """

    eps0: float | None = None
    eps_inf: float = DEFAULT_EPS_INF
    n0: int | None = None
    n_inf: int | None = None

    def __post_init__(self):
        if not self.eps_inf > 0:
            raise ConfigurationError("eps_inf must be > 0", "epsilon.eps_inf")
        if self.eps0 is not None:
            if not self.eps0 > 0:
                raise ConfigurationError("eps0 must be > 0", "epsilon.eps0")
            if self.eps_inf > self.eps0:
                raise ConfigurationError("eps_inf must not exceed eps0", "epsilon.eps_inf")
        if self.n0 is not None and self.n0 < 0:
            raise ConfigurationError("n0 must be >= 0", "epsilon.n0")
        if self.n0 is not None and self.n_inf is not None and not self.n0 < self.n_inf:
            raise ConfigurationError("n0 must be below n_inf", "epsilon.n0")

    @property
    def resolved(self) -> bool:
        return None not in (self.eps0, self.n0, self.n_inf)

    def resolve(self, n_generations: int, initial_psi=None) -> "EpsilonSchedule":
        """Fill defaults: ``n0 = N_G // 6``, ``n_inf = N_G`` and ``eps0`` from data.

        ``eps0`` defaults to the 90th percentile of the initial violations,
        never below ``eps_inf``.
        """
        n_inf = self.n_inf if self.n_inf is not None else max(int(n_generations), 1)
        n0 = self.n0 if self.n0 is not None else min(int(n_generations) // 6, n_inf - 1)
        eps0 = self.eps0
        if eps0 is None:
            eps0 = self.eps_inf
            if initial_psi is not None:
                psi = np.asarray(initial_psi, dtype=float)
                psi = psi[np.isfinite(psi)]
                if psi.size:
                    eps0 = max(float(np.percentile(psi, EPS0_PERCENTILE)), self.eps_inf)
        return replace(self, eps0=eps0, n0=n0, n_inf=n_inf)


def epsilon_level(schedule: EpsilonSchedule, generation: int) -> float:
    """Tolerance in force at ``generation``."""
    if not schedule.resolved:
        raise ConfigurationError("epsilon schedule not resolved", "epsilon")
    if generation < 0:
        raise ValueError("generation must be >= 0")
    if generation <= schedule.n0:
        return schedule.eps0
    if generation >= schedule.n_inf:
        return schedule.eps_inf
    frac = (generation - schedule.n0) / (schedule.n_inf - schedule.n0)
    return schedule.eps0 * (schedule.eps_inf / schedule.eps0) ** frac


def beats(f_a: float, psi_a: float, f_b: float, psi_b: float, eps: float) -> bool:
    """True when a is no worse than b (ties go to a)."""
    fa = psi_a <= eps
    fb = psi_b <= eps
    if fa and fb:
        return f_a <= f_b
    if fa != fb:
        return fa
    return psi_a <= psi_b


def strictly_better(f_a, psi_a, f_b, psi_b, eps) -> bool:
    return not beats(f_b, psi_b, f_a, psi_a, eps)


def compare_lexicographic(trial, other, eps: float):
    """Winner of ``trial`` vs ``other`` at tolerance ``eps``; ``trial`` wins ties.

    Rules: both eps-feasible -> lower f; exactly one eps-feasible -> it;
    neither -> lower psi_max.
    """
    if trial.f is None or other.f is None:
        raise ValueError("both individuals must be evaluated")
    return trial if beats(trial.f, trial.psi_max, other.f, other.psi_max, eps) else other


def rank_key(f, psi, eps):
    """Sort keys (class, value): eps-feasible members first by f, then the rest by psi."""
    f = np.asarray(f, dtype=float)
    psi = np.asarray(psi, dtype=float)
    feasible = psi <= eps
    return (~feasible).astype(np.int8), np.where(feasible, f, psi)


def ranking(f, psi, eps) -> np.ndarray:
    """Indices best-first under the comparator; equal members keep index order."""
    cls, val = rank_key(f, psi, eps)
    return np.lexsort((np.arange(cls.size), val, cls))
