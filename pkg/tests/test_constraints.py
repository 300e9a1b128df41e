import math

import numpy as np
import pytest

from islandde.constraints import (EpsilonSchedule, beats, compare_lexicographic,
                                  epsilon_level, ranking, strictly_better)
from islandde.core import Individual
from islandde.errors import ConfigurationError


def ind(f, psi):
    return Individual([0.0], f, psi)


class TestSchedule:
    def setup_method(self):
        self.s = EpsilonSchedule(eps0=10.0, eps_inf=0.1, n0=100, n_inf=400)

    def test_breakpoints(self):
        assert epsilon_level(self.s, 100) == 10.0
        assert epsilon_level(self.s, 0) == 10.0
        assert epsilon_level(self.s, 400) == 0.1
        assert epsilon_level(self.s, 10_000) == 0.1

    def test_midpoint(self):
        assert epsilon_level(self.s, 250) == pytest.approx(1.0, rel=1e-14)

    def test_unresolved(self):
        with pytest.raises(ConfigurationError):
            epsilon_level(EpsilonSchedule(), 3)

    def test_resolve_defaults(self):
        r = EpsilonSchedule().resolve(600, np.arange(101.0))
        assert (r.n0, r.n_inf) == (100, 600)
        assert r.eps0 == pytest.approx(90.0)
        assert r.eps_inf == 1e-8

    def test_resolve_feasible_start(self):
        r = EpsilonSchedule().resolve(60, np.full(10, -1.0))
        assert r.eps0 == r.eps_inf

    @pytest.mark.parametrize("kwargs", [{"eps0": 1e-9, "eps_inf": 1e-8},
                                        {"n0": 10, "n_inf": 10}, {"eps_inf": -1.0}])
    def test_validation(self, kwargs):
        with pytest.raises(ConfigurationError):
            EpsilonSchedule(**kwargs)

    def test_non_increasing(self):
        levels = [epsilon_level(self.s, g) for g in range(500)]
        assert all(a >= b for a, b in zip(levels, levels[1:]))


class TestComparator:
    def test_both_feasible(self):
        a, b = ind(1, -0.1), ind(2, -0.2)
        assert compare_lexicographic(a, b, 0.0) is a

    def test_feasible_beats_infeasible(self):
        a, b = ind(100, 0.0), ind(1, 0.5)
        assert compare_lexicographic(a, b, 0.0) is a
        assert compare_lexicographic(a, b, 1.0) is b

    def test_lower_violation(self):
        a, b = ind(1, 3), ind(50, 2)
        assert compare_lexicographic(a, b, 0.0) is b

    def test_ties_go_to_first(self):
        a, b = ind(1, 0), ind(1, 0)
        assert compare_lexicographic(a, b, 0.0) is a
        assert beats(1, 0, 1, 0, 0) and not strictly_better(1, 0, 1, 0, 0)

    def test_unevaluated(self):
        with pytest.raises(ValueError):
            compare_lexicographic(Individual([0]), ind(1, 0), 0.0)

    def test_ranking_order(self):
        f = [5, 1, 3, 0, 2]
        psi = [0, 0, 2, 1, 0]
        assert ranking(f, psi, 0.0).tolist() == [1, 4, 0, 3, 2]
        assert ranking(f, psi, 1.0).tolist() == [3, 1, 4, 0, 2]

    def test_unconstrained_psi(self):
        assert ranking([3, 1, 2], [-math.inf] * 3, 0.0).tolist() == [1, 2, 0]
