"""Keyed counter-based random numbers.

Every random draw in the library is a pure function of a 64-bit key and a
draw counter (SplitMix64 output function). Keys are derived by hashing a
parent key with integer tags, so an island, a generation and a population
slot each get their own stream without any shared mutable state. The
compiled kernels implement the same integer arithmetic, which is what makes
serial, threaded, compiled and fallback execution agree bit for bit.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 2.0 ** -53

# stream tags
TAG_INIT = 1
TAG_GENERATION = 2
TAG_EPIDEMIC = 3
TAG_REINIT = 4
TAG_MIGRATION = 5
TAG_PRUNE = 6
TAG_EPSILON = 7

ORCHESTRATION_STREAM = 0


def fmix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64(z: int) -> int:
    return fmix64(z + GOLDEN)


def derive(key: int, *tags: int) -> int:
    """Chain ``key`` with integer ``tags`` into a child key."""
    for t in tags:
        key = mix64((key ^ mix64(t & MASK64)) & MASK64)
    return key


def uniform_at(key: int, k: int) -> float:
    """The ``k``-th uniform in [0, 1) of the stream keyed by ``key``."""
    bits = fmix64(key + (k + 1) * GOLDEN)
    return (bits >> 11) * _INV53


# numpy versions; uint64 arithmetic wraps modulo 2**64
_U_GOLDEN = np.uint64(GOLDEN)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)


def _fmix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U_M1
    z = (z ^ (z >> np.uint64(27))) * _U_M2
    return z ^ (z >> np.uint64(31))


def slot_keys(key: int, n: int, start: int = 0) -> np.ndarray:
    """Keys ``derive(key, i)`` for ``i`` in ``start .. start + n - 1``."""
    with np.errstate(over="ignore"):
        idx = np.arange(start, start + n, dtype=np.uint64)
        inner = _fmix64_np(idx + _U_GOLDEN)
        return _fmix64_np((np.uint64(key) ^ inner) + _U_GOLDEN)


def uniforms(keys: np.ndarray, n: int, offset: int = 0) -> np.ndarray:
    """Matrix of draws ``offset .. offset + n - 1`` for every key, shape (len(keys), n)."""
    keys = np.asarray(keys, dtype=np.uint64)
    with np.errstate(over="ignore"):
        steps = (np.arange(offset + 1, offset + n + 1, dtype=np.uint64) * _U_GOLDEN)
        bits = _fmix64_np(keys[:, None] + steps[None, :])
    return (bits >> np.uint64(11)).astype(np.float64) * _INV53


class SlotStream:
    """Sequential reader over one keyed stream (used by the per-slot operators)."""

    def __init__(self, key: int, position: int = 0):
        self.key = key
        self.position = position

    def uniform(self) -> float:
        u = uniform_at(self.key, self.position)
        self.position += 1
        return u

    def take(self, n: int) -> list[float]:
        return [self.uniform() for _ in range(n)]


class RandomSource:
    """Seeded root of a family of independent streams.

    Parameters
    ----------
    seed : int
        64-bit seed.
    stream : int
        Stream id. Island ``k`` uses stream ``k + 1``; stream 0 is reserved
        for orchestration (migration, epsilon bootstrap).
    """

    def __init__(self, seed: int, stream: int = ORCHESTRATION_STREAM):
        self.seed = int(seed) & MASK64
        self.stream = int(stream)
        self.root = derive(mix64(self.seed), self.stream)

    def key(self, *tags: int) -> int:
        return derive(self.root, *tags)

    def child(self, stream: int) -> "RandomSource":
        return RandomSource(self.seed, stream)

    def slot_stream(self, *tags: int) -> SlotStream:
        return SlotStream(self.key(*tags))

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, stream={self.stream})"
