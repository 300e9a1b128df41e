import math

import numpy as np
import pytest

from islandde.core import (Bounds, EqualityConstraint, Individual, Population, Problem,
                           convert_equality, evaluate, init_population, random_members)
from islandde.errors import ConfigurationError
from islandde.problems import constrained_quadratic, make_problem, sphere
from islandde.rng import RandomSource


class TestBounds:
    def test_rejects_zero_width(self):
        with pytest.raises(ConfigurationError, match="lower\\[1\\]"):
            Bounds([0, 1], [1, 1])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ConfigurationError):
            Bounds([0, 0], [1])

    def test_rejects_empty_and_infinite(self):
        with pytest.raises(ConfigurationError):
            Bounds([], [])
        with pytest.raises(ConfigurationError):
            Bounds([0], [math.inf])

    def test_read_only(self):
        b = Bounds([0, 0], [1, 2])
        with pytest.raises(ValueError):
            b.lower[0] = 5
        assert b.width.tolist() == [1, 2]

    def test_contains(self):
        b = Bounds.uniform(-1, 1, 2)
        assert b.contains([1, -1])
        assert not b.contains([1.01, 0])
        assert b.contains_box(Bounds.uniform(-0.5, 0.5, 2))
        assert not Bounds.uniform(-0.5, 0.5, 2).contains_box(b)


class TestEquality:
    def setup_method(self):
        self.g = convert_equality(EqualityConstraint(lambda x: x[0], 0.0, 0.1))

    def test_satisfied(self):
        assert self.g(np.array([0.05])) == pytest.approx(-0.05)

    def test_violated(self):
        assert self.g(np.array([0.3])) == pytest.approx(0.2)

    def test_exact(self):
        assert self.g(np.array([0.0])) == -0.1


class TestEvaluate:
    def test_sphere_minimum(self):
        ind = evaluate(make_problem("sphere", 3, native=False), Individual([0, 0, 0]))
        assert ind.f == 0.0
        assert ind.psi_max == -math.inf
        assert ind.feasible

    def test_single_constraint(self):
        ind = evaluate(constrained_quadratic(), Individual([0.2, 0.2]))
        assert ind.psi_max == pytest.approx(0.6)

    def test_max_of_constraints(self):
        p = Problem("two", Bounds.uniform(-10, 10, 2), sphere,
                    [lambda x: 1 - x[0] - x[1], lambda x: x[0] - 5])
        ind = evaluate(p, Individual([6, 0]))
        assert ind.psi_max == 1.0

    def test_counts_evaluations(self):
        p = make_problem("sphere", 2)
        p.evaluate_batch(np.zeros((7, 2)))
        assert p.evaluations == 7

    def test_failures_are_worst(self):
        def bad(x):
            if x[0] > 0:
                raise ValueError("domain")
            return float(x[0])

        p = Problem("bad", Bounds.uniform(-1, 1, 1), bad)
        f, psi = p.evaluate_batch(np.array([[-0.5], [0.5]]))
        assert f.tolist() == [-0.5, math.inf]
        assert psi[1] == math.inf

    def test_nan_objective_is_failure(self):
        p = Problem("nan", Bounds.uniform(-1, 1, 1), lambda x: math.nan)
        f, psi = p.evaluate_batch(np.zeros((1, 1)))
        assert f[0] == math.inf and psi[0] == math.inf

    def test_unknown_native_rejected(self):
        with pytest.raises(ConfigurationError):
            Problem("x", Bounds.uniform(0, 1, 1), sphere, native="ackley")


class TestIndividual:
    def test_assigning_x_invalidates_cache(self):
        ind = Individual([1.0], f=1.0, psi_max=-1.0)
        assert ind.evaluated
        ind.x = [2.0]
        assert not ind.evaluated and ind.psi_max is None

    def test_copy_is_independent(self):
        a = Individual([1.0, 2.0], 5.0, 0.0)
        b = a.copy()
        b.x[0] = 9
        assert a.x[0] == 1.0


class TestPopulation:
    def test_unit_square(self):
        p = Problem("u", Bounds.uniform(0, 1, 2), sphere)
        pop = init_population(p, 20, RandomSource(3))
        assert pop.generation == 0 and pop.size == 20
        assert np.all((pop.X >= 0) & (pop.X <= 1))

    def test_too_small(self):
        with pytest.raises(ConfigurationError, match="4 distinct"):
            init_population(make_problem("sphere", 2), 4, RandomSource(1))

    def test_deterministic(self):
        p = make_problem("rastrigin", 4)
        a = init_population(p, 10, RandomSource(42, 1))
        b = init_population(p, 10, RandomSource(42, 1))
        for name in ("X", "f", "psi", "F", "CR", "S"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_parameters_in_range(self):
        pop = init_population(make_problem("sphere", 3), 50, RandomSource(0))
        assert np.all((pop.F >= 0.1) & (pop.F <= 1.0))
        assert np.all((pop.CR >= 0.0) & (pop.CR <= 1.0))
        assert np.all(pop.S == 1)

    def test_members_roundtrip(self):
        pop = init_population(make_problem("sphere", 3), 6, RandomSource(0))
        back = Population.from_members(pop.members)
        assert np.array_equal(back.X, pop.X) and np.array_equal(back.f, pop.f)

    def test_put_requires_evaluation(self):
        pop = init_population(make_problem("sphere", 3), 6, RandomSource(0))
        with pytest.raises(ValueError):
            pop.put(0, Individual([0, 0, 0]))

    def test_random_members_slot_layout(self):
        from islandde.rng import derive, uniform_at

        b = Bounds([0, -2], [1, 2])
        X, F, CR, S = random_members(b, 3, key=77, start=5)
        k = derive(77, 6)
        assert X[1, 0] == 0 + uniform_at(k, 0) * 1
        assert X[1, 1] == -2 + uniform_at(k, 1) * 4
        assert F[1] == 0.1 + uniform_at(k, 2) * 0.9
