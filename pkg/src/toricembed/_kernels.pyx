# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.  Callers guarantee every intermediate fits in int64."""

from cpython.array cimport array
import array as _array


def ball_union(weights, Py_ssize_t n):
    cdef Py_ssize_t k, j, ntri
    cdef long long a, best, v
    cdef array fa = _array.array("q", [0]) * (n + 1)
    cdef array ga
    cdef long long[:] f = fa
    cdef long long[:] g
    tri_list = []
    cdef long long t = 0, step = 0
    while t <= n:
        tri_list.append(t)
        step += 1
        t += step
    cdef array tria = _array.array("q", tri_list)
    cdef long long[:] tri = tria
    ntri = len(tri_list)
    for w in weights:
        a = w
        ga = _array.array("q", fa)
        g = ga
        for k in range(1, n + 1):
            best = g[k]
            for j in range(1, ntri):
                if tri[j] > k:
                    break
                v = f[k - tri[j]] + j * a
                if v > best:
                    best = v
            g[k] = best
        fa = ga
        f = fa
    return list(fa)


def convex_sequence(long long B, union, long long S, Py_ssize_t K):
    cdef array ua = _array.array("q", union)
    cdef long long[:] u = ua
    cdef Py_ssize_t n = len(union)
    cdef long long B2 = B * B, gap = B * B - S
    cdef long long d0 = 0, d, m, best, v, lead
    cdef bint have
    cdef Py_ssize_t k
    out = []
    for k in range(K + 1):
        while (d0 * d0 + 3 * d0) // 2 < k:
            d0 += 1
        d = d0
        have = False
        best = 0
        while True:
            m = (d * d + 3 * d) // 2 - k
            if have:
                lead = d * B - best
                if (gap * (2 * d + 3) * (2 * d + 3) >= B2 * (9 + 8 * k)
                        and lead > 0 and lead * lead > 2 * m * S):
                    break
                if S == 0:
                    break
            if m >= n:
                raise IndexError(m)
            v = d * B - u[m]
            if not have or v < best:
                best = v
                have = True
            d += 1
        out.append(best)
    return out
