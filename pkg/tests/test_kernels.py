"""Pure-Python and compiled kernel backends must agree exactly on
every operation."""

import random

import numpy as np
import pytest

from usylow import kernels
from usylow.field import field_create
from usylow.matrix import Mat, mat_mul as mat_mul_ref, random_lower_unitriangular
from usylow.unitary import UnitaryParams, stream_sylow_batches

PURE = kernels.get_impl("pure")
try:
    COMPILED = kernels.get_impl("compiled")
except ImportError:
    COMPILED = None

needs_compiled = pytest.mark.skipif(
    COMPILED is None, reason="compiled extension not built"
)


def _random_unitri_batch(field, dim, count, seed):
    rng = random.Random(seed)
    rows = [
        random_lower_unitriangular(field, dim, rng).entries for _ in range(count)
    ]
    return np.array(rows, dtype=np.uint16)


def test_backend_is_reported():
    assert kernels.BACKEND in ("pure", "compiled")


def test_pure_mat_mul_matches_reference():
    F = field_create(5, 1)
    rng = random.Random(3)
    for _ in range(20):
        a = [rng.randrange(F.s) for _ in range(9)]
        b = [rng.randrange(F.s) for _ in range(9)]
        got = PURE.mat_mul(
            np.array(a, dtype=np.uint16),
            np.array(b, dtype=np.uint16),
            3,
            F.mul_table,
            F.add_table,
            F.s,
        )
        ref = mat_mul_ref(Mat(F, 3, a), Mat(F, 3, b)).entries
        assert tuple(int(x) for x in got) == ref


def test_keys_round_trip():
    F = field_create(5, 1)
    batch = _random_unitri_batch(F, 4, 50, seed=5)
    keys = kernels.keys_from_batch(batch)
    back = kernels.batch_from_keys(keys, batch.shape[1])
    assert np.array_equal(batch, back)


@needs_compiled
def test_backends_agree_on_scans():
    params = UnitaryParams(5, 1, 4)
    F = params.field
    batch = np.concatenate(list(stream_sylow_batches(params)))[:3000]
    batch = np.ascontiguousarray(batch)
    gens = np.ascontiguousarray(batch[[17, 101, 999]])
    for impl_pair in ((PURE, COMPILED),):
        a, b = impl_pair
        ma = a.scan_commuting(batch, gens, 4, F.mul_table, F.add_table, F.s)
        mb = b.scan_commuting(batch, gens, 4, F.mul_table, F.add_table, F.s)
        assert np.array_equal(np.asarray(ma), np.asarray(mb))
        pa = a.scan_power_identity(batch, 5, 4, F.mul_table, F.add_table, F.s)
        pb = b.scan_power_identity(batch, 5, 4, F.mul_table, F.add_table, F.s)
        assert np.array_equal(np.asarray(pa), np.asarray(pb))


@needs_compiled
def test_backends_agree_on_batch_ops():
    F = field_create(5, 1)
    batch = _random_unitri_batch(F, 4, 200, seed=9)
    g = batch[7].copy()
    ginv_ref = PURE.inverse_batch_unitri(
        batch[7:8], 4, F.mul_table, F.add_table, F.neg_table, F.s
    )[0]
    for left in (True, False):
        pa = PURE.mul_batch(batch, g, left, 4, F.mul_table, F.add_table, F.s)
        pb = COMPILED.mul_batch(batch, g, left, 4, F.mul_table, F.add_table, F.s)
        assert np.array_equal(np.asarray(pa), np.asarray(pb))
    ca = PURE.conjugate_batch(batch, ginv_ref, g, 4, F.mul_table, F.add_table, F.s)
    cb = COMPILED.conjugate_batch(batch, ginv_ref, g, 4, F.mul_table, F.add_table, F.s)
    assert np.array_equal(np.asarray(ca), np.asarray(cb))
    ia = PURE.inverse_batch_unitri(batch, 4, F.mul_table, F.add_table, F.neg_table, F.s)
    ib = COMPILED.inverse_batch_unitri(
        batch, 4, F.mul_table, F.add_table, F.neg_table, F.s
    )
    assert np.array_equal(np.asarray(ia), np.asarray(ib))
    ka = PURE.commutators_with(batch, ia, g, ginv_ref, 4, F.mul_table, F.add_table, F.s)
    kb = COMPILED.commutators_with(
        batch, ib, g, ginv_ref, 4, F.mul_table, F.add_table, F.s
    )
    assert np.array_equal(np.asarray(ka), np.asarray(kb))


@needs_compiled
def test_backends_agree_on_closure_check():
    params = UnitaryParams(5, 1, 3)
    F = params.field
    batch = np.ascontiguousarray(np.concatenate(list(stream_sylow_batches(params))))
    keys = np.sort(PURE.subdiag_keys(batch, 3, F.s))
    assert np.array_equal(
        np.asarray(keys), np.sort(np.asarray(COMPILED.subdiag_keys(batch, 3, F.s)))
    )
    ra = PURE.closure_check_unitri(batch, keys, 3, F.mul_table, F.add_table, F.s)
    rb = COMPILED.closure_check_unitri(batch, keys, 3, F.mul_table, F.add_table, F.s)
    assert ra == rb == -1
    # drop one element: closure must now fail, and both backends see it
    partial = np.ascontiguousarray(batch[:-1])
    pkeys = np.sort(PURE.subdiag_keys(partial, 3, F.s))
    ra = PURE.closure_check_unitri(partial, pkeys, 3, F.mul_table, F.add_table, F.s)
    rb = COMPILED.closure_check_unitri(partial, pkeys, 3, F.mul_table, F.add_table, F.s)
    assert ra == rb
    assert ra >= 0


def test_env_override_selects_pure():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from usylow import kernels; print(kernels.BACKEND)"],
        env={"USYLOW_KERNELS": "pure", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
    )
    assert out.stdout.strip() == "pure"
