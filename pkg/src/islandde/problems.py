"""Benchmark problems with known optima.

The scalar objectives accumulate dimension by dimension, in the same order
as the compiled builtins, so both give identical values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Bounds, EqualityConstraint, Problem, convert_equality
from .errors import ConfigurationError

TWO_PI = 2.0 * math.pi


def sphere(x) -> float:
    acc = 0.0
    for v in np.asarray(x, dtype=float).tolist():
        acc += v * v
    return acc


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float).tolist()
    acc = 10.0 * len(x)
    for v in x:
        acc += v * v - 10.0 * math.cos(TWO_PI * v)
    return acc


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float).tolist()
    if len(x) < 2:
        raise ValueError("rosenbrock needs D >= 2")
    acc = 0.0
    for a, b in zip(x[:-1], x[1:]):
        t = b - a * a
        s = 1.0 - a
        acc += 100.0 * t * t + s * s
    return acc


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    dimension: int
    bounds: Bounds
    known_optimum_f: float
    known_optimizer: np.ndarray | str


_UNCONSTRAINED = {
    # name: (objective, default box, optimizer coordinate, minimum D)
    "sphere": (sphere, (-100.0, 100.0), 0.0, 1),
    "rastrigin": (rastrigin, (-5.12, 5.12), 0.0, 1),
    "rosenbrock": (rosenbrock, (-50.0, 50.0), 1.0, 2),
}


def _constraint_sum_ge_one(x):
    return 1.0 - x[0] - x[1]


def _quadratic(x):
    return float(x[0] * x[0] + x[1] * x[1])


def _line_sum(x):
    return float(x[0] + x[1])


def constrained_quadratic() -> Problem:
    """min x1^2 + x2^2 on [-10, 10]^2 s.t. 1 - x1 - x2 <= 0; optimum (0.5, 0.5), f = 0.5."""
    return Problem("constrained_quadratic", Bounds.uniform(-10.0, 10.0, 2), _quadratic,
                   [_constraint_sum_ge_one])


def equality_demo(delta: float = 1e-3) -> Problem:
    """min x1^2 + x2^2 on [-5, 5]^2 s.t. x1 + x2 = 2 within ``delta``; optimum near (1, 1)."""
    eq = EqualityConstraint(_line_sum, target=2.0, tolerance=delta)
    return Problem("equality_demo", Bounds.uniform(-5.0, 5.0, 2), _quadratic,
                   [convert_equality(eq)])


PROBLEMS = ("sphere", "rastrigin", "rosenbrock", "constrained_quadratic", "equality_demo")


def make_problem(name: str, dimension: int | None = None, lower=None, upper=None,
                 native: bool = True) -> Problem:
    """Build a named benchmark; ``lower``/``upper`` override the default box.

    ``native=False`` keeps evaluation in Python even when the compiled kernel
    is available.
    """
    if name == "constrained_quadratic":
        return constrained_quadratic()
    if name == "equality_demo":
        return equality_demo()
    if name not in _UNCONSTRAINED:
        raise ConfigurationError(f"unknown problem {name!r}; choose from {PROBLEMS}",
                                 "problem.name")
    fn, (lo, hi), _, min_d = _UNCONSTRAINED[name]
    if dimension is None or dimension < min_d:
        raise ConfigurationError(f"{name} needs dimension >= {min_d}", "problem.dimension")
    lo = lo if lower is None else lower
    hi = hi if upper is None else upper
    bounds = Bounds(np.broadcast_to(np.asarray(lo, dtype=float), (dimension,)),
                    np.broadcast_to(np.asarray(hi, dtype=float), (dimension,)))
    return Problem(name, bounds, fn, native=name if native else None)


def benchmark(name: str, dimension: int = 2) -> BenchmarkSpec:
    """Known optimum of a named benchmark (constrained ones are 2-D)."""
    if name == "constrained_quadratic":
        p = constrained_quadratic()
        return BenchmarkSpec(name, 2, p.bounds, 0.5, np.array([0.5, 0.5]))
    if name == "equality_demo":
        p = equality_demo()
        return BenchmarkSpec(name, 2, p.bounds, 2.0, np.array([1.0, 1.0]))
    p = make_problem(name, dimension)
    x_star = np.full(dimension, _UNCONSTRAINED[name][2])
    return BenchmarkSpec(name, dimension, p.bounds, 0.0, x_star)
