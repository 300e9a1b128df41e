import math

import numpy as np
import pytest

from islandde.archipelago import (IslandSpec, MigrationConfig, Topology, default_strategies,
                                  evolve_archipelago, migrate, neighbors)
from islandde.core import Population
from islandde.engine import TerminationCriteria, run
from islandde.errors import ConfigurationError
from islandde.problems import make_problem
from islandde.rng import RandomSource


def pop(values, f):
    X = np.array(values, dtype=float).reshape(len(values), -1)
    n = len(X)
    return Population(X, f, np.full(n, -math.inf), np.full(n, .5), np.full(n, .9),
                      np.ones(n, dtype=np.int64))


class TestTopology:
    def test_radial_forward(self):
        t = Topology("radial", 16, rings=4)
        assert neighbors(t, t.index(1, 2), "forward") == [t.index(2, 2)]

    def test_radial_backward_inner_ring(self):
        t = Topology("radial", 16, rings=4)
        assert all(neighbors(t, t.index(0, s), "backward") == [] for s in range(4))

    def test_ring(self):
        assert neighbors(Topology("ring", 4), 3) == [0]
        assert neighbors(Topology("ring", 1), 0) == []

    def test_fully_connected(self):
        assert neighbors(Topology("fully-connected", 3), 1) == [0, 2]

    def test_default_rings(self):
        assert Topology("radial", 8).rings == 4
        assert Topology("radial", 6).rings == 2
        assert Topology("radial", 5).rings == 1

    def test_invalid(self):
        with pytest.raises(ConfigurationError, match="topology.rings"):
            Topology("radial", 6, rings=4)
        with pytest.raises(ConfigurationError, match="topology.kind"):
            Topology("star", 4)

    def test_flip(self):
        t = Topology("radial", 8)
        t.flip()
        assert t.phase == "backward"
        assert neighbors(t, t.index(1, 0)) == [t.index(0, 0)]

    def test_strategies_by_ring(self):
        assert default_strategies(Topology("radial", 16)) == [1] * 4 + [3] * 4 + [2] * 4 + [4] * 4
        assert default_strategies(Topology("radial", 8)) == [1, 1, 3, 3, 2, 2, 4, 4]
        assert default_strategies(Topology("radial", 4, rings=2)) == [1, 1, 2, 2]


class TestMigrate:
    def test_probability_zero(self):
        isl = [pop(range(10), np.arange(10.0)), pop(range(10, 20), np.arange(10.0, 20))]
        before = [p.X.copy() for p in isl]
        migrate(isl, Topology("ring", 2), MigrationConfig(probability=0.0), 0, RandomSource(1))
        assert all(np.array_equal(p.X, b) for p, b in zip(isl, before))

    def test_single_edge(self):
        a = pop(range(10), np.arange(10.0))           # best: slot 0 (x=0)
        b = pop(range(10, 20), np.arange(10.0, 20))   # worst: slot 9
        cfg = MigrationConfig(probability=1.0, fraction=0.1)
        migrate([a, b], Topology("ring", 2), cfg, 0, RandomSource(1))
        assert b.X[9, 0] == 0.0 and b.f[9] == 0.0
        assert a.X[9, 0] == 10.0  # b's best (pre-migration) went to a

    def test_sizes_kept_and_best_survives(self):
        rng = np.random.default_rng(0)
        isl = [pop(rng.normal(size=(12, 2)), rng.uniform(0, 10, 12)) for _ in range(8)]
        best = min(p.f.min() for p in isl)
        migrate(isl, Topology("radial", 8), MigrationConfig(probability=1.0, fraction=0.1), 0,
                RandomSource(2))
        assert all(p.size == 12 for p in isl)
        assert min(p.f.min() for p in isl) == best

    def test_whole_island_rejected(self):
        with pytest.raises(ConfigurationError):
            MigrationConfig(fraction=1.0)

    def test_n_emigrants(self):
        assert MigrationConfig(fraction=0.05).n_emigrants(32) == 1
        assert MigrationConfig(fraction=0.1).n_emigrants(64) == 6


class TestArchipelago:
    def test_single_island_is_plain_run(self):
        p = make_problem("rastrigin", 4)
        spec = IslandSpec("adaptive", 12)
        term = TerminationCriteria(max_generations=60)
        a = evolve_archipelago(p, [spec], Topology("radial", 1), MigrationConfig(), term, seed=3)
        b = run(p, spec, term, seed=3)
        assert a.history.to_csv() == b.history.to_csv()

    def test_workers_do_not_change_history(self):
        p = make_problem("rastrigin", 5)
        specs = [IslandSpec(s, 10) for s in (1, 3, 2, 4)]
        term = TerminationCriteria(max_generations=120)
        mig = MigrationConfig(interval=20)
        a = evolve_archipelago(p, specs, Topology("radial", 4), mig, term, seed=7, workers=1)
        b = evolve_archipelago(p, specs, Topology("radial", 4), mig, term, seed=7, workers=4)
        assert a.history.to_csv() == b.history.to_csv()

    def test_history_columns(self):
        p = make_problem("sphere", 3)
        r = evolve_archipelago(p, [IslandSpec(1, 8)] * 4, termination=TerminationCriteria(
            max_generations=5), seed=0)
        assert r.history.columns[-4:] == [f"island_{k}_best_f" for k in range(4)]
        final = r.history.final
        assert final.best_f == min(final.island_best_f)
        assert final.fes == 4 * 8 * 6

    def test_spec_count_mismatch(self):
        with pytest.raises(ConfigurationError):
            evolve_archipelago(make_problem("sphere", 2), [IslandSpec()] * 3,
                               Topology("radial", 4))
