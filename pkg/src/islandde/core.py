"""Problem definition, search box, individuals and populations."""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _backend
from .errors import ConfigurationError
from .rng import TAG_INIT, RandomSource, slot_keys, uniforms

MIN_POPULATION = 5

Evaluator = Callable[[np.ndarray], float]


class Bounds:
    """Axis-aligned search box ``lower <= x <= upper``."""

    def __init__(self, lower, upper):
        lower = np.atleast_1d(np.asarray(lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise ConfigurationError("lower and upper must be vectors of equal length >= 1",
                                     "bounds")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite", "bounds")
        if np.any(lower >= upper):
            bad = int(np.flatnonzero(lower >= upper)[0])
            raise ConfigurationError(
                f"lower[{bad}]={lower[bad]} is not below upper[{bad}]={upper[bad]}", "bounds")
        lower.flags.writeable = False
        upper.flags.writeable = False
        self.lower = lower
        self.upper = upper

    @classmethod
    def uniform(cls, low: float, high: float, dimension: int) -> "Bounds":
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def contains_box(self, other: "Bounds") -> bool:
        return bool(np.all(other.lower >= self.lower) and np.all(other.upper <= self.upper))

    def __eq__(self, other):
        return (isinstance(other, Bounds) and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper))

    def __repr__(self):
        return f"Bounds(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


@dataclass(frozen=True)
class EqualityConstraint:
    """``evaluator(x) == target`` within ``tolerance``."""

    evaluator: Evaluator
    target: float = 0.0
    tolerance: float = 1e-6


def convert_equality(eq: EqualityConstraint) -> Evaluator:
    """Rewrite an equality as the inequality ``|phi(x) - C| - delta <= 0``."""
    if not eq.tolerance > 0:
        raise ConfigurationError(f"equality tolerance must be > 0, got {eq.tolerance}",
                                 "tolerance")
    phi, target, delta = eq.evaluator, eq.target, eq.tolerance

    def inequality(x):
        return abs(phi(x) - target) - delta

    return inequality


_NATIVE_CODES = {"sphere": 1, "rastrigin": 2, "rosenbrock": 3}


@dataclass(eq=False)
class Problem:
    """Minimise ``objective`` over ``bounds`` subject to ``constraints(x) <= 0``.

    ``batch_objective`` optionally evaluates a whole (n, D) matrix at once.
    ``native`` names a builtin objective the compiled kernel can evaluate
    without the GIL; it must agree with ``objective``.
    """

    name: str
    bounds: Bounds
    objective: Evaluator
    constraints: Sequence[Evaluator] = ()
    batch_objective: Callable[[np.ndarray], np.ndarray] | None = None
    native: str | None = None
    evaluations: int = field(default=0, init=False)

    def __post_init__(self):
        self.constraints = tuple(self.constraints)
        if self.native is not None and self.native not in _NATIVE_CODES:
            raise ConfigurationError(f"unknown native objective {self.native!r}", "native")
        self._lock = threading.Lock()

    @property
    def dimension(self) -> int:
        return self.bounds.dimension

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def evaluate_batch(self, X: np.ndarray, kernels=None) -> tuple[np.ndarray, np.ndarray]:
        """Objective and max constraint violation for every row of ``X``.

        Failed evaluations (non-finite values, arithmetic or value errors in
        the evaluators) come back as ``(+inf, +inf)``. Unconstrained problems
        report ``psi = -inf``.
        """
        X = np.ascontiguousarray(X, dtype=float)
        n = X.shape[0]
        kernels = kernels or _backend.kernels
        f = np.empty(n)
        failed = np.zeros(n, dtype=bool)
        if self.native is not None:
            kernels.evaluate_builtin(_NATIVE_CODES[self.native], X, f)
        elif self.batch_objective is not None:
            f[:] = self.batch_objective(X)
        else:
            for i in range(n):
                try:
                    f[i] = self.objective(X[i])
                except (ArithmeticError, ValueError):
                    failed[i] = True
        if self.constraints:
            psi = np.empty(n)
            for i in range(n):
                try:
                    psi[i] = max(float(g(X[i])) for g in self.constraints)
                except (ArithmeticError, ValueError):
                    failed[i] = True
            failed |= ~np.isfinite(psi)
        else:
            psi = np.full(n, -math.inf)
        failed |= ~np.isfinite(f)
        f[failed] = math.inf
        psi[failed] = math.inf
        with self._lock:
            self.evaluations += n
        return f, psi


class Individual:
    """Decision vector with its private control parameters and cached evaluation.

    Assigning ``x`` drops the cached ``f``/``psi_max``.
    """

    __slots__ = ("_x", "f", "psi_max", "scale_factor", "crossover_prob", "strategy")

    def __init__(self, x, f=None, psi_max=None, scale_factor=0.5, crossover_prob=0.9,
                 strategy=1):
        self._x = np.array(x, dtype=float)
        self.f = f
        self.psi_max = psi_max
        self.scale_factor = float(scale_factor)
        self.crossover_prob = float(crossover_prob)
        self.strategy = int(strategy)

    @property
    def x(self) -> np.ndarray:
        return self._x

    @x.setter
    def x(self, value):
        self._x = np.array(value, dtype=float)
        self.f = None
        self.psi_max = None

    @property
    def evaluated(self) -> bool:
        return self.f is not None

    @property
    def feasible(self) -> bool:
        return self.psi_max is not None and self.psi_max <= 0.0

    def copy(self) -> "Individual":
        return Individual(self._x, self.f, self.psi_max, self.scale_factor,
                          self.crossover_prob, self.strategy)

    def __repr__(self):
        return (f"Individual(f={self.f}, psi_max={self.psi_max}, F={self.scale_factor:.3f}, "
                f"Cr={self.crossover_prob:.3f}, strategy={self.strategy}, x={self._x.tolist()})")


def evaluate(problem: Problem, individual: Individual, kernels=None) -> Individual:
    """Set ``f`` and ``psi_max`` on ``individual`` (one evaluation)."""
    f, psi = problem.evaluate_batch(individual.x[None, :], kernels)
    individual.f = float(f[0])
    individual.psi_max = float(psi[0])
    return individual


class Population:
    """Fixed-size population stored column-wise.

    Attributes
    ----------
    X : ndarray, shape (N_p, D)
    f, psi : ndarray, shape (N_p,)
        Objective and max constraint violation of each member.
    F, CR : ndarray, shape (N_p,)
        Private scale factor and crossover probability.
    S : ndarray of int64, shape (N_p,)
        Mutation strategy id (1..4).
    generation : int
    """

    def __init__(self, X, f, psi, F, CR, S, generation=0):
        self.X = np.ascontiguousarray(X, dtype=float)
        self.f = np.ascontiguousarray(f, dtype=float)
        self.psi = np.ascontiguousarray(psi, dtype=float)
        self.F = np.ascontiguousarray(F, dtype=float)
        self.CR = np.ascontiguousarray(CR, dtype=float)
        self.S = np.ascontiguousarray(S, dtype=np.int64)
        self.generation = int(generation)

    @property
    def size(self) -> int:
        return self.X.shape[0]

    def __len__(self):
        return self.size

    def individual(self, i: int) -> Individual:
        return Individual(self.X[i], float(self.f[i]), float(self.psi[i]), self.F[i],
                          self.CR[i], self.S[i])

    @property
    def members(self) -> list[Individual]:
        return [self.individual(i) for i in range(self.size)]

    def put(self, i: int, ind: Individual) -> None:
        if not ind.evaluated:
            raise ValueError("only evaluated individuals can join a population")
        self.X[i] = ind.x
        self.f[i] = ind.f
        self.psi[i] = ind.psi_max
        self.F[i] = ind.scale_factor
        self.CR[i] = ind.crossover_prob
        self.S[i] = ind.strategy

    def copy(self) -> "Population":
        return Population(self.X.copy(), self.f.copy(), self.psi.copy(), self.F.copy(),
                          self.CR.copy(), self.S.copy(), self.generation)

    @classmethod
    def from_members(cls, members: Sequence[Individual], generation=0) -> "Population":
        return cls(np.array([m.x for m in members]), [m.f for m in members],
                   [m.psi_max for m in members], [m.scale_factor for m in members],
                   [m.crossover_prob for m in members], [m.strategy for m in members],
                   generation)


def random_members(bounds: Bounds, n: int, key: int, adaptation=None, strategy: int = 1,
                   start: int = 0):
    """Uniform samples in ``bounds`` with fresh control parameters.

    Slot ``start + k`` draws D coordinates then F, Cr and strategy from the
    stream ``derive(key, start + k)``.
    """
    from .adaptation import AdaptationConfig, params_from_draws

    adaptation = adaptation or AdaptationConfig()
    d = bounds.dimension
    u = uniforms(slot_keys(key, n, start), d + 3)
    X = bounds.lower + u[:, :d] * (bounds.upper - bounds.lower)
    F, CR, S = params_from_draws(u[:, d:], adaptation, strategy)
    return X, F, CR, S


def init_population(problem: Problem, size: int, rng: RandomSource, adaptation=None,
                    strategy: int = 1, bounds: Bounds | None = None, key: int | None = None,
                    kernels=None) -> Population:
    """Random initial population over ``bounds`` (the problem box by default), evaluated."""
    if size < MIN_POPULATION:
        raise ConfigurationError(
            f"population size {size} below minimum {MIN_POPULATION}: mutation needs "
            "4 distinct donor indices besides the target", "population_size")
    bounds = bounds or problem.bounds
    key = rng.key(TAG_INIT) if key is None else key
    X, F, CR, S = random_members(bounds, size, key, adaptation, strategy)
    f, psi = problem.evaluate_batch(X, kernels)
    return Population(X, f, psi, F, CR, S, generation=0)
