import warnings

import numpy as np
import pytest

from islandde.archipelago import IslandSpec
from islandde.core import Bounds
from islandde.engine import TerminationCriteria, run
from islandde.errors import ConfigurationError
from islandde.problems import make_problem
from islandde.pruning import PruningConfig, prune_bounds, pruning_schedule, run_with_pruning


class TestSchedule:
    def test_defaults(self):
        assert pruning_schedule(PruningConfig(), 10000) == [(4000, 0.3), (6000, 0.2),
                                                            (8000, 0.1)]

    def test_single_event(self):
        assert pruning_schedule(PruningConfig(n_events=1), 2001) == [(800, 0.3)]

    def test_frac_one_rejected(self):
        with pytest.raises(ConfigurationError, match="first_event_frac"):
            PruningConfig(first_event_frac=1.0)

    def test_too_short(self):
        with pytest.raises(ConfigurationError):
            pruning_schedule(PruningConfig(), 3)

    def test_last_rho_positive(self):
        with pytest.raises(ConfigurationError, match="delta_rho"):
            PruningConfig(rho0=0.3, delta_rho=0.15)

    def test_n_keep(self):
        cfg = PruningConfig(n_runs=50)
        assert [cfg.n_keep(i) for i in range(3)] == [15, 10, 5]


class TestPruneBounds:
    def test_relaxed_hull(self):
        b = prune_bounds([[5.0], [4.0], [6.0]], 1.0, Bounds([0], [10]), Bounds([0], [10]))
        assert (b.lower[0], b.upper[0]) == (4.0, 6.0)

    def test_relaxation_arithmetic(self):
        # 10 bests; the best 3 span [4, 6]; relaxation 0.5 * 0.7 * 10 = 3.5
        pts = np.array([[4.0], [6.0], [5.0]] + [[0.0]] * 7)
        b = prune_bounds(pts, 0.3, Bounds([0], [10]), Bounds([0], [10]))
        assert b.lower[0] == pytest.approx(0.5) and b.upper[0] == pytest.approx(9.5)

    def test_full_span_gives_original(self):
        orig = Bounds([0, 0], [10, 10])
        b = prune_bounds([[0, 0], [10, 10]], 1.0, orig, orig)
        assert b == orig

    def test_intersection_with_current(self):
        orig = Bounds([0], [10])
        cur = Bounds([3], [7])
        b = prune_bounds([[5.0]], 1.0 - 1e-12, orig, cur)
        assert cur.contains_box(b)

    def test_degenerate_falls_back(self):
        pts = np.array([[5.0, 1.0]])
        orig = Bounds([0, 0], [10, 10])
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            b = prune_bounds(pts, 1.0, orig, orig)
        assert b == orig and w

    def test_empty_cluster(self):
        with pytest.raises(ValueError):
            prune_bounds([[1.0]] * 3, 0.1, Bounds([0], [2]), Bounds([0], [2]))


class TestRunWithPruning:
    def test_disabled_single_run_is_plain(self):
        p = make_problem("rastrigin", 3)
        spec = IslandSpec("adaptive", 10)
        term = TerminationCriteria(max_generations=40)
        a = run_with_pruning(p, spec, PruningConfig(enabled=False, n_runs=1), term, seed=5)
        b = run(p, spec, term, seed=5)
        assert a.history.to_csv() == b.history.to_csv()

    def test_events_reseed_elites(self):
        p = make_problem("rastrigin", 4)
        cfg = PruningConfig(enabled=True, n_runs=10, n_events=2, rho0=0.5, delta_rho=0.2)
        term = TerminationCriteria(max_generations=50)
        r = run_with_pruning(p, IslandSpec("adaptive", 12), cfg, term, seed=2)
        events = r.history.column("pruning_event")
        assert sorted(e for e in events if e >= 0) == [0, 1]
        assert len(r.pruned_bounds) == 2
        assert p.bounds.contains_box(r.pruned_bounds[0])
        assert r.pruned_bounds[0].contains_box(r.pruned_bounds[1])
        for pop, box in zip(r.populations, r.bounds):
            assert box == r.pruned_bounds[-1]
            assert np.all((pop.X >= box.lower) & (pop.X <= box.upper))

    def test_elites_present_after_event(self, monkeypatch):
        from islandde import driver

        seen = {}
        original = driver.Driver._prune

        def spy(self, islands, event, rho, eps):
            bests = sorted((isl.pop.individual(isl.best_index(eps)) for isl in islands),
                           key=lambda b: b.f)
            new = original(self, islands, event, rho, eps)
            n_keep = self.pruning.n_keep(event, len(islands))
            for isl in islands:
                rows = {tuple(x) for x in isl.pop.X}
                assert all(tuple(b.x) in rows for b in bests[:n_keep])
                others = [x for x in isl.pop.X
                          if not any(np.array_equal(x, b.x) for b in bests[:n_keep])]
                assert all(new.contains(x) for x in others)
            seen[event] = n_keep
            return new

        monkeypatch.setattr(driver.Driver, "_prune", spy)
        cfg = PruningConfig(enabled=True, n_runs=10)
        run_with_pruning(make_problem("sphere", 3), IslandSpec(1, 10), cfg,
                         TerminationCriteria(max_generations=30), seed=1)
        assert seen == {0: 3, 1: 2, 2: 1}

    def test_validation(self):
        p = make_problem("sphere", 2)
        with pytest.raises(ConfigurationError, match="n_runs"):
            run_with_pruning(p, IslandSpec(1, 10), PruningConfig(enabled=True, n_runs=3),
                             TerminationCriteria(max_generations=30))
        with pytest.raises(ConfigurationError, match="max_generations"):
            run_with_pruning(p, IslandSpec(1, 10), PruningConfig(enabled=True),
                             TerminationCriteria(max_fes=10**5))
        with pytest.raises(ConfigurationError, match="exceed"):
            run_with_pruning(p, IslandSpec(1, 6), PruningConfig(enabled=True, n_runs=30),
                             TerminationCriteria(max_generations=30))
