# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Semantics are defined by ``_pykernels``."""
from libc.math cimport cos, sqrt, floor
from libc.stdint cimport uint64_t, int64_t

NAME = "cython"
COMPILED = True

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = 0x94D049BB133111EBULL
cdef double INV53 = 1.0 / 9007199254740992.0

cdef enum:
    DRAW_F_VALUE = 0
    DRAW_F_GATE = 1
    DRAW_CR_VALUE = 2
    DRAW_CR_GATE = 3
    DRAW_STRAT_GATE = 4
    DRAW_STRAT_VALUE = 5
    DRAW_INDEX0 = 6
    DRAW_JR = 10
    DRAW_CROSS0 = 11

SPHERE, RASTRIGIN, ROSENBROCK = 1, 2, 3
cdef double TWO_PI = 2.0 * 3.141592653589793


cdef inline uint64_t _fmix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline uint64_t _derive(uint64_t key, uint64_t tag) noexcept nogil:
    return _fmix((key ^ _fmix(tag + GOLDEN)) + GOLDEN)


cdef inline double _uniform(uint64_t key, uint64_t k) noexcept nogil:
    return <double>(_fmix(key + (k + 1) * GOLDEN) >> 11) * INV53


def n_slot_draws(int dim):
    return DRAW_CROSS0 + dim


cdef inline double _donor(int strategy, const double[:, ::1] X, Py_ssize_t i,
                          Py_ssize_t best, int64_t* r, double f,
                          Py_ssize_t j) noexcept nogil:
    if strategy == 1:
        return X[r[0], j] + f * (X[r[1], j] - X[r[2], j])
    elif strategy == 2:
        return X[best, j] + f * (X[r[0], j] - X[r[1], j])
    elif strategy == 3:
        return X[i, j] + f * (X[r[2], j] - X[i, j]) + f * (X[r[0], j] - X[r[1], j])
    return (X[best, j] + f * (X[r[0], j] - X[r[1], j])
            + f * (X[r[2], j] - X[r[3], j]))


def make_trials(const double[:, ::1] X, const double[::1] F, const double[::1] CR,
                const long long[::1] S, Py_ssize_t best, uint64_t gen_key,
                const double[::1] lower, const double[::1] upper,
                double f_min, double f_max, double cr_min, double cr_max,
                double tau, bint adapt_strategy, const long long[::1] pool,
                double[:, ::1] U, double[::1] Fu, double[::1] CRu, long long[::1] Su):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k, a, b, jr
    cdef Py_ssize_t npool = pool.shape[0]
    cdef uint64_t key
    cdef int64_t r[4]
    cdef int64_t excl[5]
    cdef int64_t v, tmp, m = n - 1
    cdef double f, cr, t
    cdef int strategy
    with nogil:
        for i in range(n):
            key = _derive(gen_key, <uint64_t>i)
            if _uniform(key, DRAW_F_GATE) < tau:
                f = f_min + _uniform(key, DRAW_F_VALUE) * (f_max - f_min)
            else:
                f = F[i]
            if _uniform(key, DRAW_CR_GATE) < tau:
                cr = cr_min + _uniform(key, DRAW_CR_VALUE) * (cr_max - cr_min)
            else:
                cr = CR[i]
            strategy = <int>S[i]
            if adapt_strategy and _uniform(key, DRAW_STRAT_GATE) < tau:
                strategy = <int>pool[<Py_ssize_t>floor(_uniform(key, DRAW_STRAT_VALUE) * npool)]
            Fu[i] = f
            CRu[i] = cr
            Su[i] = strategy

            # sequential sampling without replacement; excl kept sorted
            excl[0] = i
            for k in range(4):
                v = <int64_t>floor(_uniform(key, DRAW_INDEX0 + k) * (m - k))
                for a in range(k + 1):
                    if v >= excl[a]:
                        v += 1
                r[k] = v
                a = k + 1
                excl[a] = v
                while a > 0 and excl[a - 1] > excl[a]:
                    tmp = excl[a - 1]
                    excl[a - 1] = excl[a]
                    excl[a] = tmp
                    a -= 1

            jr = <Py_ssize_t>floor(_uniform(key, DRAW_JR) * d)
            for j in range(d):
                if _uniform(key, DRAW_CROSS0 + j) <= cr or j == jr:
                    t = _donor(strategy, X, i, best, r, f, j)
                else:
                    t = X[i, j]
                if t < lower[j]:
                    t = lower[j]
                elif t > upper[j]:
                    t = upper[j]
                U[i, j] = t


cdef inline bint _trial_wins(double fu, double pu, double fx, double px,
                             double eps) noexcept nogil:
    cdef bint tf = pu <= eps
    cdef bint xf = px <= eps
    if tf and xf:
        return fu <= fx
    if tf != xf:
        return tf
    return pu <= px


def select(double[:, ::1] X, double[::1] fx, double[::1] px, double[::1] F,
           double[::1] CR, long long[::1] S, const double[:, ::1] U, const double[::1] fu,
           const double[::1] pu, const double[::1] Fu, const double[::1] CRu,
           const long long[::1] Su,
           double eps):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], i, j
    cdef Py_ssize_t count = 0
    with nogil:
        for i in range(n):
            if _trial_wins(fu[i], pu[i], fx[i], px[i], eps):
                for j in range(d):
                    X[i, j] = U[i, j]
                fx[i] = fu[i]
                px[i] = pu[i]
                F[i] = Fu[i]
                CR[i] = CRu[i]
                S[i] = Su[i]
                count += 1
    return count


def best_index(const double[::1] f, const double[::1] psi, double eps):
    cdef Py_ssize_t n = f.shape[0], i, best = -1
    cdef Py_ssize_t best_inf = 0
    with nogil:
        for i in range(n):
            if psi[i] <= eps:
                if best < 0 or f[i] < f[best]:
                    best = i
            elif psi[i] < psi[best_inf] or psi[best_inf] <= eps:
                best_inf = i
    if best >= 0:
        return best
    return best_inf


def diversity(const double[:, ::1] X, const double[::1] width):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], i, j, k
    cdef double total = 0.0, acc, t
    if n < 2:
        raise ValueError("diversity needs at least two members")
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                acc = 0.0
                for k in range(d):
                    t = X[i, k] / width[k] - X[j, k] / width[k]
                    acc += t * t
                total += sqrt(acc)
    return total / (n * (n - 1) / 2.0)


def evaluate_builtin(int code, const double[:, ::1] U, double[::1] out):
    cdef Py_ssize_t n = U.shape[0], d = U.shape[1], i, j
    cdef double acc, x, t, s
    if code < 1 or code > 3:
        raise ValueError(f"unknown builtin objective code {code}")
    with nogil:
        for i in range(n):
            if code == 1:
                acc = 0.0
                for j in range(d):
                    x = U[i, j]
                    acc += x * x
            elif code == 2:
                acc = 10.0 * d
                for j in range(d):
                    x = U[i, j]
                    acc += x * x - 10.0 * cos(TWO_PI * x)
            else:
                acc = 0.0
                for j in range(d - 1):
                    x = U[i, j]
                    t = U[i, j + 1] - x * x
                    s = 1.0 - x
                    acc += 100.0 * t * t + s * s
            out[i] = acc
