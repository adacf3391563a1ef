"""Pure-Python reference implementation of the hot kernels.

Same API as the compiled extension `_ckernels`; selected as a fallback
when the extension is not built (see `kernels`).  Matrices are flat
numpy uint16 arrays of field element indices; `mul_t` and `add_t` are
the flattened s x s field tables.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"


def mat_mul(a, b, dim, mul_t, add_t, s):
    out = np.zeros(dim * dim, dtype=np.uint16)
    for i in range(dim):
        for j in range(dim):
            acc = 0
            for k in range(dim):
                acc = add_t[acc * s + mul_t[a[i * dim + k] * s + b[k * dim + j]]]
            out[i * dim + j] = acc
    return out


def commutes(a, b, dim, mul_t, add_t, s):
    ab = mat_mul(a, b, dim, mul_t, add_t, s)
    ba = mat_mul(b, a, dim, mul_t, add_t, s)
    return int(np.array_equal(ab, ba))


def scan_commuting(batch, gens, dim, mul_t, add_t, s):
    n = batch.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        x = batch[i]
        ok = 1
        for g in range(gens.shape[0]):
            if not commutes(x, gens[g], dim, mul_t, add_t, s):
                ok = 0
                break
        out[i] = ok
    return out


def scan_power_identity(batch, e, dim, mul_t, add_t, s):
    n = batch.shape[0]
    ident = np.zeros(dim * dim, dtype=np.uint16)
    for i in range(dim):
        ident[i * dim + i] = 1
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        acc = ident
        for _ in range(e):
            acc = mat_mul(acc, batch[i], dim, mul_t, add_t, s)
        out[i] = 1 if np.array_equal(acc, ident) else 0
    return out


def mul_batch(batch, g, left, dim, mul_t, add_t, s):
    n = batch.shape[0]
    out = np.empty_like(batch)
    for i in range(n):
        if left:
            out[i] = mat_mul(g, batch[i], dim, mul_t, add_t, s)
        else:
            out[i] = mat_mul(batch[i], g, dim, mul_t, add_t, s)
    return out


def conjugate_batch(batch, ginv, g, dim, mul_t, add_t, s):
    n = batch.shape[0]
    out = np.empty_like(batch)
    for i in range(n):
        t = mat_mul(ginv, batch[i], dim, mul_t, add_t, s)
        out[i] = mat_mul(t, g, dim, mul_t, add_t, s)
    return out


def commutators_with(batch, batch_inv, g, ginv, dim, mul_t, add_t, s):
    """[x, g] = x^-1 g^-1 x g for every row x of `batch`."""
    n = batch.shape[0]
    out = np.empty_like(batch)
    for i in range(n):
        t = mat_mul(batch_inv[i], ginv, dim, mul_t, add_t, s)
        t = mat_mul(t, batch[i], dim, mul_t, add_t, s)
        out[i] = mat_mul(t, g, dim, mul_t, add_t, s)
    return out


def inverse_batch_unitri(batch, dim, mul_t, add_t, neg_t, s):
    n = batch.shape[0]
    out = np.empty_like(batch)
    for r in range(n):
        a = batch[r]
        inv = np.zeros(dim * dim, dtype=np.uint16)
        for i in range(dim):
            inv[i * dim + i] = 1
        for j in range(dim):
            for i in range(j + 1, dim):
                acc = 0
                for k in range(j, i):
                    acc = add_t[acc * s + mul_t[a[i * dim + k] * s + inv[k * dim + j]]]
                inv[i * dim + j] = neg_t[acc]
        out[r] = inv
    return out


def _subdiag_key_of_product(a, b, dim, mul_t, add_t, s):
    key = 0
    w = 1
    for i in range(1, dim):
        for j in range(i):
            # unitriangular product entry below the diagonal
            acc = add_t[a[i * dim + j] * s + b[i * dim + j]]
            for k in range(j + 1, i):
                acc = add_t[acc * s + mul_t[a[i * dim + k] * s + b[k * dim + j]]]
            key += int(acc) * w
            w *= s
    return key


def closure_check_unitri(batch, keys_sorted, dim, mul_t, add_t, s):
    """All pairwise products stay in the set of subdiagonal keys.
    Returns -1 when closed, else i * n + j of the first failing pair."""
    n = batch.shape[0]
    keyset = set(int(k) for k in keys_sorted)
    for i in range(n):
        a = batch[i]
        for j in range(n):
            key = _subdiag_key_of_product(a, batch[j], dim, mul_t, add_t, s)
            if key not in keyset:
                return i * n + j
    return -1


def subdiag_keys(batch, dim, s):
    n = batch.shape[0]
    out = np.zeros(n, dtype=np.uint64)
    for r in range(n):
        key = 0
        w = 1
        for i in range(1, dim):
            for j in range(i):
                key += int(batch[r, i * dim + j]) * w
                w *= s
        out[r] = key
    return out
