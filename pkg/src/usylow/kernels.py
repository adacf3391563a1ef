"""Kernel backend selection: compiled extension if built, else the
pure-Python fallback.  Set USYLOW_KERNELS=pure to force the fallback
(used by the benchmark and the backend-equivalence tests)."""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("USYLOW_KERNELS", "") == "pure":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND_NAME

mat_mul = _impl.mat_mul
commutes = _impl.commutes
scan_commuting = _impl.scan_commuting
scan_power_identity = _impl.scan_power_identity
mul_batch = _impl.mul_batch
conjugate_batch = _impl.conjugate_batch
commutators_with = _impl.commutators_with
inverse_batch_unitri = _impl.inverse_batch_unitri
closure_check_unitri = _impl.closure_check_unitri
subdiag_keys = _impl.subdiag_keys


def get_impl(name):
    """Return a kernel module by backend name ('pure' or 'compiled')."""
    if name == "pure":
        return _pykernels
    from . import _ckernels

    return _ckernels


def batch_from_keys(keys, d2):
    """Stack bytes-encoded matrices into an (N, d2) uint16 array."""
    if not keys:
        return np.empty((0, d2), dtype=np.uint16)
    buf = b"".join(keys)
    return np.frombuffer(buf, dtype=np.uint16).reshape(len(keys), d2).copy()


def keys_from_batch(batch):
    """Bytes key per row (little-endian uint16 entries)."""
    arr = np.ascontiguousarray(batch, dtype=np.uint16)
    if arr.dtype.byteorder == ">":  # pragma: no cover - LE platforms
        arr = arr.astype("<u2")
    d2 = arr.shape[1]
    raw = arr.tobytes()
    step = 2 * d2
    return [raw[i * step : (i + 1) * step] for i in range(arr.shape[0])]
