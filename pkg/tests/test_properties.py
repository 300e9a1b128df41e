"""Invariant suites; each runs at least 1000 random cases."""
import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from islandde.adaptation import AdaptationConfig
from islandde.archipelago import MigrationConfig, Topology, migrate
from islandde.constraints import beats, ranking
from islandde.core import Bounds, Population
from islandde.engine import clip_bounds, crossover, evolve_generation, sample_indices
from islandde.epidemic import diversity_score
from islandde.problems import make_problem
from islandde.pruning import prune_bounds
from islandde.rng import RandomSource, SlotStream

MANY = settings(max_examples=1000, deadline=None,
                suppress_health_check=[HealthCheck.too_slow])
finite = st.floats(-1e6, 1e6, allow_nan=False)
seeds = st.integers(0, 2**64 - 1)


@st.composite
def boxes(draw, max_dim=6):
    d = draw(st.integers(1, max_dim))
    lo = np.array(draw(st.lists(st.floats(-100, 100), min_size=d, max_size=d)))
    width = np.array(draw(st.lists(st.floats(1e-3, 100), min_size=d, max_size=d)))
    return Bounds(lo, lo + width)


@MANY
@given(boxes(), st.lists(finite, min_size=6, max_size=6))
def test_clip_contains(b, raw):
    t = np.resize(np.array(raw), b.dimension)
    assert b.contains(clip_bounds(t, b))


@MANY
@given(seeds, st.integers(6, 12), st.integers(1, 5), st.sampled_from([1, 2, 3, 4]))
def test_generation_stays_in_box(seed, n, d, strategy):
    p = make_problem("sphere", d, lower=-1.0, upper=2.0)
    rng = np.random.default_rng(seed % 2**32)
    X = rng.uniform(-1, 2, (n, d))
    f, psi = p.evaluate_batch(X)
    pop = Population(X, f, psi, rng.uniform(0.1, 1, n), rng.uniform(0, 1, n),
                     np.full(n, strategy, dtype=np.int64))
    new = evolve_generation(pop, p, AdaptationConfig(tau=0.5), seed)
    assert np.all((new.X >= -1) & (new.X <= 2))
    assert np.all(new.f <= pop.f)


@MANY
@given(boxes(), st.integers(2, 12), seeds)
def test_diversity_range(b, n, seed):
    rng = np.random.default_rng(seed % 2**32)
    X = b.lower + rng.uniform(size=(n, b.dimension)) * b.width
    X = np.clip(X, b.lower, b.upper)
    # include a corner pair now and then
    if seed % 3 == 0:
        X[0], X[-1] = b.lower, b.upper
    pop = Population(X, np.zeros(n), np.zeros(n), np.ones(n), np.ones(n), np.ones(n))
    d = diversity_score(pop, b)
    assert 0.0 <= d <= math.sqrt(b.dimension) * (1 + 1e-12)


triples = st.tuples(st.sampled_from([-1.0, 0.0, 1.0, 2.0]), st.sampled_from([-1.0, 0.0, 0.5]))


@MANY
@given(triples, triples, triples, st.sampled_from([0.0, 0.5, 1.0]))
def test_comparator_total_preorder(a, b, c, eps):
    def le(x, y):  # x at least as good as y
        return beats(x[0], x[1], y[0], y[1], eps)

    assert le(a, b) or le(b, a)
    if le(a, b) and le(b, c):
        assert le(a, c)


@MANY
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-1, 1)), min_size=1, max_size=15),
       st.sampled_from([0.0, 0.3]))
def test_ranking_consistent_with_comparator(members, eps):
    f = [m[0] for m in members]
    psi = [m[1] for m in members]
    order = ranking(f, psi, eps)
    for i, j in zip(order, order[1:]):
        assert beats(f[i], psi[i], f[j], psi[j], eps)


@MANY
@given(st.integers(1, 3), st.integers(2, 20), st.sampled_from([0.1, 0.3, 0.5, 1.0]), seeds)
def test_pruned_boxes_monotone(d, n_runs, rho, seed):
    rng = np.random.default_rng(seed % 2**32)
    orig = Bounds.uniform(-10, 10, d)
    cur = orig
    for _ in range(3):
        pts = cur.lower + rng.uniform(size=(n_runs, d)) * cur.width
        if math.floor(rho * n_runs + 1e-9) < 1:
            return
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            new = prune_bounds(pts, rho, orig, cur)
        assert cur.contains_box(new)
        cur = new


@MANY
@given(st.sampled_from([("radial", 8), ("radial", 4), ("ring", 5), ("fully-connected", 3)]),
       st.integers(6, 15), st.floats(0.0, 1.0), st.floats(0.0, 0.5), seeds)
def test_migration_conservation(shape, n, phi, frac, seed):
    kind, n_isl = shape
    rng = np.random.default_rng(seed % 2**32)
    isl = []
    for _ in range(n_isl):
        X = rng.normal(size=(n, 2))
        isl.append(Population(X, rng.uniform(0, 9, n), np.full(n, -np.inf), rng.uniform(size=n),
                              rng.uniform(size=n), rng.integers(1, 5, n)))
    before = {tuple(x) for p in isl for x in p.X}
    best = min(p.f.min() for p in isl)
    cfg = MigrationConfig(probability=phi, fraction=frac)
    if cfg.n_emigrants(n) * (n_isl - 1 if kind == "fully-connected" else 1) >= n:
        return
    migrate(isl, Topology(kind, n_isl), cfg, seed % 1000, RandomSource(seed))
    assert all(p.size == n for p in isl)
    after = {tuple(x) for p in isl for x in p.X}
    assert after <= before  # migration copies, never invents
    assert min(p.f.min() for p in isl) == best


@settings(max_examples=10, deadline=None)
@given(st.integers(5, 40), seeds)
def test_index_validity(n, seed):
    # 10^3 streams per example, 10^4 draws of index quadruples overall
    for key in range(seed % 1000, seed % 1000 + 1000):
        target = key % n
        r = sample_indices(n, target, SlotStream(key))
        assert len(set(r)) == 4 and target not in r
        assert all(0 <= v < n for v in r)


@MANY
@given(st.integers(1, 10), st.floats(0.0, 1.0), seeds)
def test_crossover_inheritance(d, cr, seed):
    target = np.arange(d, dtype=float)
    donor = -np.arange(1, d + 1, dtype=float)
    t = crossover(target, donor, cr, SlotStream(seed))
    from_donor = t == donor
    assert from_donor.any()
    assert np.all(from_donor | (t == target))
    if cr == 1.0:
        assert from_donor.all()
