# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact field-table matrix arithmetic, commuting
scans, and exhaustive closure checks.

Mirrors the API of `_pykernels`.  Matrices are flat uint16 arrays of
field element indices; `mul_t` / `add_t` are flattened s x s tables.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint16_t, uint64_t, int64_t

BACKEND_NAME = "compiled"


cdef inline void _mul_into(const uint16_t *a, const uint16_t *b, uint16_t *out,
                           int dim, const uint16_t *mul_t, const uint16_t *add_t,
                           int s) nogil:
    cdef int i, j, k
    cdef int acc
    for i in range(dim):
        for j in range(dim):
            acc = 0
            for k in range(dim):
                acc = add_t[acc * s + mul_t[a[i * dim + k] * s + b[k * dim + j]]]
            out[i * dim + j] = <uint16_t> acc


cdef inline int _commutes(const uint16_t *a, const uint16_t *b, uint16_t *t1,
                          uint16_t *t2, int dim, const uint16_t *mul_t,
                          const uint16_t *add_t, int s) nogil:
    cdef int i
    _mul_into(a, b, t1, dim, mul_t, add_t, s)
    _mul_into(b, a, t2, dim, mul_t, add_t, s)
    for i in range(dim * dim):
        if t1[i] != t2[i]:
            return 0
    return 1


def mat_mul(const uint16_t[::1] a, const uint16_t[::1] b, int dim,
            const uint16_t[::1] mul_t, const uint16_t[::1] add_t, int s):
    out = np.zeros(dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] o = out
    _mul_into(&a[0], &b[0], &o[0], dim, &mul_t[0], &add_t[0], s)
    return out


def commutes(const uint16_t[::1] a, const uint16_t[::1] b, int dim,
             const uint16_t[::1] mul_t, const uint16_t[::1] add_t, int s):
    t1 = np.empty(dim * dim, dtype=np.uint16)
    t2 = np.empty(dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] v1 = t1
    cdef uint16_t[::1] v2 = t2
    return _commutes(&a[0], &b[0], &v1[0], &v2[0], dim, &mul_t[0], &add_t[0], s)


def scan_commuting(const uint16_t[:, ::1] batch, const uint16_t[:, ::1] gens,
                   int dim, const uint16_t[::1] mul_t, const uint16_t[::1] add_t,
                   int s):
    cdef Py_ssize_t n = batch.shape[0]
    cdef Py_ssize_t ng = gens.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    buf = np.empty(2 * dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] t = buf
    cdef Py_ssize_t i, g
    cdef int ok
    with nogil:
        for i in range(n):
            ok = 1
            for g in range(ng):
                if not _commutes(&batch[i, 0], &gens[g, 0], &t[0], &t[dim * dim],
                                 dim, &mul_t[0], &add_t[0], s):
                    ok = 0
                    break
            o[i] = ok
    return out


def scan_power_identity(const uint16_t[:, ::1] batch, int e, int dim,
                        const uint16_t[::1] mul_t, const uint16_t[::1] add_t,
                        int s):
    cdef Py_ssize_t n = batch.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] o = out
    ident_arr = np.zeros(dim * dim, dtype=np.uint16)
    cdef int ii
    for ii in range(dim):
        ident_arr[ii * dim + ii] = 1
    cdef uint16_t[::1] ident = ident_arr
    buf = np.empty(2 * dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] t = buf
    cdef Py_ssize_t i
    cdef int r, j, ok
    cdef int d2 = dim * dim
    with nogil:
        for i in range(n):
            for j in range(d2):
                t[j] = ident[j]
            for r in range(e):
                _mul_into(&t[0], &batch[i, 0], &t[d2], dim, &mul_t[0], &add_t[0], s)
                for j in range(d2):
                    t[j] = t[d2 + j]
            ok = 1
            for j in range(d2):
                if t[j] != ident[j]:
                    ok = 0
                    break
            o[i] = ok
    return out


def mul_batch(const uint16_t[:, ::1] batch, const uint16_t[::1] g, int left,
              int dim, const uint16_t[::1] mul_t, const uint16_t[::1] add_t,
              int s):
    cdef Py_ssize_t n = batch.shape[0]
    out = np.empty((n, dim * dim), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            if left:
                _mul_into(&g[0], &batch[i, 0], &o[i, 0], dim, &mul_t[0], &add_t[0], s)
            else:
                _mul_into(&batch[i, 0], &g[0], &o[i, 0], dim, &mul_t[0], &add_t[0], s)
    return out


def conjugate_batch(const uint16_t[:, ::1] batch, const uint16_t[::1] ginv,
                    const uint16_t[::1] g, int dim, const uint16_t[::1] mul_t,
                    const uint16_t[::1] add_t, int s):
    cdef Py_ssize_t n = batch.shape[0]
    out = np.empty((n, dim * dim), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    buf = np.empty(dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] t = buf
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _mul_into(&ginv[0], &batch[i, 0], &t[0], dim, &mul_t[0], &add_t[0], s)
            _mul_into(&t[0], &g[0], &o[i, 0], dim, &mul_t[0], &add_t[0], s)
    return out


def commutators_with(const uint16_t[:, ::1] batch, const uint16_t[:, ::1] batch_inv,
                     const uint16_t[::1] g, const uint16_t[::1] ginv, int dim,
                     const uint16_t[::1] mul_t, const uint16_t[::1] add_t, int s):
    """[x, g] = x^-1 g^-1 x g for every row x of `batch`."""
    cdef Py_ssize_t n = batch.shape[0]
    out = np.empty((n, dim * dim), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    buf = np.empty(2 * dim * dim, dtype=np.uint16)
    cdef uint16_t[::1] t = buf
    cdef Py_ssize_t i
    cdef int d2 = dim * dim
    with nogil:
        for i in range(n):
            _mul_into(&batch_inv[i, 0], &ginv[0], &t[0], dim, &mul_t[0], &add_t[0], s)
            _mul_into(&t[0], &batch[i, 0], &t[d2], dim, &mul_t[0], &add_t[0], s)
            _mul_into(&t[d2], &g[0], &o[i, 0], dim, &mul_t[0], &add_t[0], s)
    return out


def inverse_batch_unitri(const uint16_t[:, ::1] batch, int dim,
                         const uint16_t[::1] mul_t, const uint16_t[::1] add_t,
                         const uint16_t[::1] neg_t, int s):
    cdef Py_ssize_t n = batch.shape[0]
    out = np.zeros((n, dim * dim), dtype=np.uint16)
    cdef uint16_t[:, ::1] o = out
    cdef Py_ssize_t r
    cdef int i, j, k, acc
    with nogil:
        for r in range(n):
            for i in range(dim):
                o[r, i * dim + i] = 1
            for j in range(dim):
                for i in range(j + 1, dim):
                    acc = 0
                    for k in range(j, i):
                        acc = add_t[acc * s +
                                    mul_t[batch[r, i * dim + k] * s + o[r, k * dim + j]]]
                    o[r, i * dim + j] = neg_t[acc]
    return out


cdef inline uint64_t _subdiag_key_of_product(const uint16_t *a, const uint16_t *b,
                                             int dim, const uint16_t *mul_t,
                                             const uint16_t *add_t, int s) nogil:
    cdef uint64_t key = 0
    cdef uint64_t w = 1
    cdef int i, j, k, acc
    for i in range(1, dim):
        for j in range(i):
            acc = add_t[a[i * dim + j] * s + b[i * dim + j]]
            for k in range(j + 1, i):
                acc = add_t[acc * s + mul_t[a[i * dim + k] * s + b[k * dim + j]]]
            key += (<uint64_t> acc) * w
            w *= <uint64_t> s
    return key


cdef inline int _key_in_sorted(uint64_t key, const uint64_t *keys, Py_ssize_t n) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo < n and keys[lo] == key


def closure_check_unitri(const uint16_t[:, ::1] batch, const uint64_t[::1] keys_sorted,
                         int dim, const uint16_t[::1] mul_t, const uint16_t[::1] add_t,
                         int s):
    """All pairwise products stay in the set of subdiagonal keys.
    Returns -1 when closed, else i * n + j of the first failing pair.
    Rows must be lower unitriangular."""
    cdef Py_ssize_t n = batch.shape[0]
    cdef Py_ssize_t i, j
    cdef uint64_t key
    cdef int64_t fail = -1
    with nogil:
        for i in range(n):
            for j in range(n):
                key = _subdiag_key_of_product(&batch[i, 0], &batch[j, 0], dim,
                                              &mul_t[0], &add_t[0], s)
                if not _key_in_sorted(key, &keys_sorted[0], keys_sorted.shape[0]):
                    fail = i * n + j
                    break
            if fail >= 0:
                break
    return fail


def subdiag_keys(const uint16_t[:, ::1] batch, int dim, int s):
    cdef Py_ssize_t n = batch.shape[0]
    out = np.zeros(n, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef Py_ssize_t r
    cdef int i, j
    cdef uint64_t key, w
    with nogil:
        for r in range(n):
            key = 0
            w = 1
            for i in range(1, dim):
                for j in range(i):
                    key += (<uint64_t> batch[r, i * dim + j]) * w
                    w *= <uint64_t> s
            o[r] = key
    return out
