# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: chain generation walk and weighted Gaussian sums.

chain_walk mirrors synthpop._kernels.fallback.chain_walk operation for
operation (same reduction order, same RNG consumption), so both backends
produce bit-identical chains from the same Generator state. Keep the two in
sync when touching either.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp

from synthpop.errors import GenerationError

cnp.import_array()

BACKEND = "compiled"

DELTA_FLOOR = 0.001
MAX_ITEMS_FACTOR = 10


def chain_walk(start, end, n_chains, rng):
    """Generate n_chains activity chains matched to target distributions.

    Same contract as synthpop._kernels.fallback.chain_walk.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] S = np.ascontiguousarray(start, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] E = np.ascontiguousarray(end, dtype=np.float64)
    cdef Py_ssize_t A = S.shape[0]
    cdef Py_ssize_t T = S.shape[1]
    if E.shape[0] != T or E.shape[1] != A or E.shape[2] != T:
        raise ValueError("end matrix stack must have shape (T, A, T), got %s" % (tuple(np.asarray(end).shape),))

    cdef cnp.ndarray[cnp.float64_t, ndim=3] end_cum = np.cumsum(E, axis=2)

    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_rows = np.empty(A)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] target_share = np.empty(T)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] col_has_mass = np.zeros(T, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] achieved = np.zeros((A, T), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ach_col = np.zeros(T, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] delta = np.empty((A, T))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] floored = np.empty((A, T))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] cum = np.empty((A, T))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] col_tot = np.empty(T)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] last_act = np.zeros(T, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] phi = np.empty((MAX_ITEMS_FACTOR * T + 2, 3), dtype=np.int64)

    cdef double total = 0.0, acc, t_r, a_r, d, m, s, u, base, wt, threshold, c
    cdef Py_ssize_t a, b, bi, n, i, j, act, last, b_e, n_items, n_out, k, nwin
    cdef Py_ssize_t max_items = MAX_ITEMS_FACTOR * T
    cdef long long ach_total = 0

    for a in range(A):
        acc = 0.0
        for b in range(T):
            acc += S[a, b]
        t_rows[a] = acc
        total += acc
    if not total > 0.0:
        raise GenerationError("target start-time matrix has no mass")
    for b in range(T):
        acc = 0.0
        for a in range(A):
            acc += S[a, b]
        target_share[b] = acc / total
        col_has_mass[b] = 1 if acc > 0.0 else 0

    chains = []
    for n in range(n_chains):
        # Difference matrix: normalized target minus normalized achieved,
        # offset per row to >= 0, zeroed where the target is zero, then
        # renormalized per row.
        for a in range(A):
            t_r = t_rows[a]
            a_r = 0.0
            for b in range(T):
                a_r += <double> achieved[a, b]
            m = 0.0
            for b in range(T):
                d = (S[a, b] / t_r if t_r > 0.0 else 0.0) - \
                    (<double> achieved[a, b] / a_r if a_r > 0.0 else 0.0)
                delta[a, b] = d
                if b == 0 or d < m:
                    m = d
            if m < 0.0:
                for b in range(T):
                    delta[a, b] = delta[a, b] - m
            for b in range(T):
                if S[a, b] == 0.0:
                    delta[a, b] = 0.0
            s = 0.0
            for b in range(T):
                s += delta[a, b]
            if s > 0.0:
                for b in range(T):
                    delta[a, b] = delta[a, b] / s

        # Per-bin sampling CDFs with the selectable-cell floor applied.
        for b in range(T):
            s = 0.0
            for a in range(A):
                d = delta[a, b]
                if d == 0.0 and S[a, b] > 0.0:
                    d = DELTA_FLOOR
                floored[a, b] = d
                s += d
            col_tot[b] = s
            c = 0.0
            last = 0
            for a in range(A):
                if s > 0.0:
                    c += floored[a, b] / s
                cum[a, b] = c
                if floored[a, b] > 0.0:
                    last = a
            last_act[b] = last

        n_items = 0
        b = 1  # 1-based time bin
        while b < T:
            bi = b - 1
            if not col_has_mass[bi]:
                b += 1
                continue
            if ach_total > 0 and (<double> ach_col[bi]) / (<double> ach_total) >= target_share[bi]:
                b += 1
                continue
            u = rng.random()
            act = 0
            last = last_act[bi]
            while act < last and cum[act, bi] <= u:
                act += 1

            base = end_cum[bi, act, bi - 1] if bi > 0 else 0.0
            wt = end_cum[bi, act, T - 1] - base
            u = rng.random()
            if wt > 0.0:
                threshold = u * wt + base
                j = bi
                while j < T and end_cum[bi, act, j] <= threshold:
                    j += 1
                b_e = j + 1
                if b_e > T:
                    b_e = T
                while b_e > b and E[bi, act, b_e - 1] == 0.0:
                    b_e -= 1
            else:
                nwin = T - b + 1
                k = <Py_ssize_t> (u * nwin)
                if k == nwin:
                    k -= 1
                b_e = b + k
            phi[n_items, 0] = act
            phi[n_items, 1] = b
            phi[n_items, 2] = b_e
            n_items += 1
            if n_items > max_items:
                raise GenerationError(
                    "chain exceeded %d items; end-time distribution keeps "
                    "activities pinned to one bin" % max_items)
            b = b_e

        if n_items == 0:
            phi[0, 0] = 0  # all-day fallback: activity row 0 is Home
            phi[0, 1] = 1
            phi[0, 2] = T
            n_items = 1

        # Collapse consecutive runs of the same activity in place.
        n_out = 0
        for i in range(n_items):
            if n_out > 0 and phi[n_out - 1, 0] == phi[i, 0]:
                phi[n_out - 1, 2] = phi[i, 2]
            else:
                phi[n_out, 0] = phi[i, 0]
                phi[n_out, 1] = phi[i, 1]
                phi[n_out, 2] = phi[i, 2]
                n_out += 1

        chain = []
        for i in range(n_out):
            chain.append((int(phi[i, 0]), int(phi[i, 1]), int(phi[i, 2])))
            achieved[phi[i, 0], phi[i, 1] - 1] += 1
            ach_col[phi[i, 1] - 1] += 1
            ach_total += 1
        chains.append(chain)
    return chains, np.asarray(achieved)


def kde_accumulate(points, weights, targets, bandwidth):
    """Weighted Gaussian kernel sums at each target location.

    Same contract as synthpop._kernels.fallback.kde_accumulate; results may
    differ from the fallback in the last ulp (summation order, libm exp).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] P = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] W = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(targets, dtype=np.float64).reshape(-1, 2)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t m = C.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m)
    if n == 0:
        return out
    cdef double inv = 1.0 / (2.0 * <double> bandwidth * <double> bandwidth)
    cdef double acc, dx, dy
    cdef Py_ssize_t i, j
    for j in range(m):
        acc = 0.0
        for i in range(n):
            dx = C[j, 0] - P[i, 0]
            dy = C[j, 1] - P[i, 1]
            acc += W[i] * exp(-(dx * dx + dy * dy) * inv)
        out[j] = acc
    return out
