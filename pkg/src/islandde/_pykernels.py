"""Pure numpy implementation of the hot kernels.

Mirrors ``_kernels.pyx`` operation by operation; both must produce identical
bits for identical inputs. Floating point expressions are written in the same
evaluation order as the C code and reductions over dimensions accumulate
sequentially, never pairwise.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial.distance import pdist

from .rng import slot_keys, uniforms

NAME = "python"
COMPILED = False

# per-slot draw layout
DRAW_F_VALUE, DRAW_F_GATE, DRAW_CR_VALUE, DRAW_CR_GATE = 0, 1, 2, 3
DRAW_STRAT_GATE, DRAW_STRAT_VALUE = 4, 5
DRAW_INDEX0 = 6
DRAW_JR = 10
DRAW_CROSS0 = 11

SPHERE, RASTRIGIN, ROSENBROCK = 1, 2, 3
TWO_PI = 2.0 * math.pi


def n_slot_draws(dim: int) -> int:
    return DRAW_CROSS0 + dim


def _sample_indices(u: np.ndarray, n: int) -> np.ndarray:
    """Four distinct indices per row, none equal to the row index."""
    rows = np.arange(n, dtype=np.int64)
    excluded = rows[:, None]
    picks = np.empty((n, 4), dtype=np.int64)
    m = n - 1
    for k in range(4):
        v = np.floor(u[:, DRAW_INDEX0 + k] * (m - k)).astype(np.int64)
        for col in np.sort(excluded, axis=1).T:
            v += v >= col
        picks[:, k] = v
        excluded = np.concatenate([excluded, v[:, None]], axis=1)
    return picks


def make_trials(X, F, CR, S, best, gen_key, lower, upper,
                f_min, f_max, cr_min, cr_max, tau, adapt_strategy, pool,
                U, Fu, CRu, Su):
    n, d = X.shape
    u = uniforms(slot_keys(gen_key, n), n_slot_draws(d))

    Fu[:] = np.where(u[:, DRAW_F_GATE] < tau,
                     f_min + u[:, DRAW_F_VALUE] * (f_max - f_min), F)
    CRu[:] = np.where(u[:, DRAW_CR_GATE] < tau,
                      cr_min + u[:, DRAW_CR_VALUE] * (cr_max - cr_min), CR)
    if adapt_strategy:
        choice = np.asarray(pool)[
            np.floor(u[:, DRAW_STRAT_VALUE] * len(pool)).astype(np.int64)]
        Su[:] = np.where(u[:, DRAW_STRAT_GATE] < tau, choice, S)
    else:
        Su[:] = S

    r = _sample_indices(u, n)
    x1, x2, x3, x4 = X[r[:, 0]], X[r[:, 1]], X[r[:, 2]], X[r[:, 3]]
    xb = X[best]
    f = Fu[:, None]
    V = np.empty_like(X)
    for strategy in (1, 2, 3, 4):
        sel = Su == strategy
        if not sel.any():
            continue
        fs = f[sel]
        if strategy == 1:
            V[sel] = x1[sel] + fs * (x2[sel] - x3[sel])
        elif strategy == 2:
            V[sel] = xb + fs * (x1[sel] - x2[sel])
        elif strategy == 3:
            xi = X[sel]
            V[sel] = xi + fs * (x3[sel] - xi) + fs * (x1[sel] - x2[sel])
        else:
            V[sel] = xb + fs * (x1[sel] - x2[sel]) + fs * (x3[sel] - x4[sel])

    take = u[:, DRAW_CROSS0:] <= CRu[:, None]
    jr = np.floor(u[:, DRAW_JR] * d).astype(np.int64)
    take[np.arange(n), jr] = True
    T = np.where(take, V, X)
    U[:] = np.where(T < lower, lower, np.where(T > upper, upper, T))


def _trial_wins(fu, pu, fx, px, eps):
    tf = pu <= eps
    xf = px <= eps
    return np.where(tf & xf, fu <= fx, np.where(tf != xf, tf, pu <= px))


def select(X, fx, px, F, CR, S, U, fu, pu, Fu, CRu, Su, eps):
    win = _trial_wins(fu, pu, fx, px, eps)
    X[win] = U[win]
    fx[win] = fu[win]
    px[win] = pu[win]
    F[win] = Fu[win]
    CR[win] = CRu[win]
    S[win] = Su[win]
    return int(win.sum())


def best_index(f, psi, eps):
    feas = psi <= eps
    if feas.any():
        # argmin returns the first occurrence: lowest index on ties
        return int(np.flatnonzero(feas)[np.argmin(f[feas])])
    return int(np.argmin(psi))


def diversity(X, width):
    n = X.shape[0]
    if n < 2:
        raise ValueError("diversity needs at least two members")
    return float(pdist(X / width).mean())


def evaluate_builtin(code, U, out):
    n, d = U.shape
    if code == SPHERE:
        acc = np.zeros(n)
        for j in range(d):
            x = U[:, j]
            acc += x * x
    elif code == RASTRIGIN:
        acc = np.full(n, 10.0 * d)
        for j in range(d):
            x = U[:, j]
            acc += x * x - 10.0 * np.cos(TWO_PI * x)
    elif code == ROSENBROCK:
        acc = np.zeros(n)
        for j in range(d - 1):
            x = U[:, j]
            t = U[:, j + 1] - x * x
            s = 1.0 - x
            acc += 100.0 * t * t + s * s
    else:
        raise ValueError(f"unknown builtin objective code {code}")
    out[:] = acc
