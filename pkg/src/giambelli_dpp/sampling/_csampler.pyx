# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sampling kernels; the same algorithm as ``_sampler_py`` on BLAS level-2 calls."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_blas cimport dgemv, ddot, dnrm2, dscal

cnp.import_array()

cdef int REORTH_EVERY = 16


cdef inline void _gs(double* Q, int t0, int t, int k, double* v, double* c) noexcept nogil:
    # v -= Q[t0:t]^T (Q[t0:t] v); Q rows are contiguous k-vectors
    cdef int m = t - t0
    cdef int one = 1
    cdef double alpha = 1.0, beta = 0.0, malpha = -1.0
    cdef char tr = b'T'
    cdef char nt = b'N'
    if m <= 0:
        return
    # Q block is k x m column-major
    dgemv(&tr, &k, &m, &alpha, Q + t0 * k, &k, v, &one, &beta, c, &one)
    dgemv(&nt, &k, &m, &malpha, Q + t0 * k, &k, c, &one, &alpha, v, &one)


cdef void _project(const double[:, ::1] vecs, const int* cols, int k,
                   const double[::1] picks, unsigned char[::1] occ,
                   double* V, double* d, double* Q, double* c, double* proj) noexcept nogil:
    cdef int n = vecs.shape[0]
    cdef int i, j, t, x, a, b0
    cdef int one = 1
    cdef double s, total, target, acc, nrm, dv, alpha = 1.0, beta = 0.0
    cdef char tr = b'T'
    if k == 0:
        return
    for i in range(n):
        s = 0.0
        for j in range(k):
            dv = vecs[i, cols[j]]
            V[i * k + j] = dv
            s += dv * dv
        d[i] = s
    for t in range(k):
        total = 0.0
        for i in range(n):
            if d[i] > 0.0:
                total += d[i]
        target = picks[t] * total
        acc = 0.0
        x = n - 1
        for i in range(n):
            if d[i] > 0.0:
                acc += d[i]
                if acc > target:
                    x = i
                    break
        while x > 0 and not d[x] > 0.0:
            x -= 1
        occ[x] = 1
        for j in range(k):
            Q[t * k + j] = V[x * k + j]
        _gs(Q, 0, t, k, Q + t * k, c)
        nrm = dnrm2(&k, Q + t * k, &one)
        dv = 1.0 / nrm
        dscal(&k, &dv, Q + t * k, &one)
        if (t + 1) % REORTH_EVERY == 0:
            # second pass over the newest block against everything before it
            b0 = t + 1 - REORTH_EVERY
            for a in range(b0, t + 1):
                _gs(Q, 0, a, k, Q + a * k, c)
                nrm = dnrm2(&k, Q + a * k, &one)
                dv = 1.0 / nrm
                dscal(&k, &dv, Q + a * k, &one)
        # d_i -= (V_i . q_t)^2 ; V is k x n column-major
        dgemv(&tr, &k, &n, &alpha, V, &k, Q + t * k, &one, &beta, proj, &one)
        for i in range(n):
            d[i] -= proj[i] * proj[i]
            if occ[i]:
                d[i] = 0.0


def spectral_batch(vecs, lam, bern, picks):
    """Occupancy matrix (samples x sites); same contract as the numpy version."""
    cdef const double[:, ::1] V = np.ascontiguousarray(vecs, dtype=np.float64)
    cdef const double[::1] L = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const double[:, ::1] Bm = np.ascontiguousarray(bern, dtype=np.float64)
    cdef const double[:, ::1] P = np.ascontiguousarray(picks, dtype=np.float64)
    cdef int S = Bm.shape[0]
    cdef int n = V.shape[0]
    cdef int m = V.shape[1]
    out = np.zeros((S, n), dtype=np.uint8)
    cdef unsigned char[:, ::1] occ = out
    cdef int s, j, k
    cdef int mm = max(m, 1)
    cdef int* cols = <int*> malloc(mm * sizeof(int))
    cdef double* work = <double*> malloc((n * mm + n + mm * mm + mm + n + 4) * sizeof(double))
    if cols == NULL or work == NULL:
        free(cols)
        free(work)
        raise MemoryError()
    cdef double* Vb = work
    cdef double* d = Vb + n * mm
    cdef double* Q = d + n
    cdef double* c = Q + mm * mm
    cdef double* proj = c + mm
    try:
        with nogil:
            for s in range(S):
                k = 0
                for j in range(m):
                    if Bm[s, j] < L[j]:
                        cols[k] = j
                        k += 1
                _project(V, cols, k, P[s], occ[s], Vb, d, Q, c, proj)
    finally:
        free(cols)
        free(work)
    return out
