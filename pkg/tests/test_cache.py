"""Binary on-disk group cache: round trips, byte determinism, header
validation, corruption detection."""

import hashlib

import pytest

from usylow.cache import (
    CacheError,
    header_matches,
    load_group,
    read_header,
    save_group,
)
from usylow.unitary import UnitaryParams, sylow_group
from usylow.wreath import WreathSpec, build_wreath


def _md5(path):
    return hashlib.md5(path.read_bytes()).hexdigest()


def test_matrix_round_trip(tmp_path):
    params = UnitaryParams(5, 1, 3)
    G = sylow_group(params)
    path = tmp_path / "s513.grp"
    save_group(path, G, params)
    loaded, meta = load_group(path)
    assert loaded.order == G.order
    assert sorted(loaded.elements) == sorted(G.elements)
    assert list(loaded.generators) == list(G.generators)
    assert meta.p == 5 and meta.k == 1 and meta.n == 3
    assert meta.field.modulus == params.field.modulus


def test_wreath_round_trip(tmp_path):
    spec = WreathSpec(5, 2, 0)
    G = build_wreath(spec)
    path = tmp_path / "w520.grp"
    save_group(path, G, spec)
    loaded, meta = load_group(path)
    assert loaded.order == 25
    assert set(loaded.elements) == set(G.elements)
    assert loaded.ops.mul(loaded.elements[3], loaded.elements[4]) == \
        G.ops.mul(G.elements[3], G.elements[4])
    assert meta.p == 5 and meta.r == 2 and meta.height == 0


def test_cache_files_are_byte_identical(tmp_path):
    params = UnitaryParams(5, 1, 3)
    p1, p2 = tmp_path / "a.grp", tmp_path / "b.grp"
    save_group(p1, sylow_group(params), params)
    save_group(p2, sylow_group(params), params)
    assert _md5(p1) == _md5(p2)


def test_header_matches(tmp_path):
    params = UnitaryParams(5, 1, 3)
    path = tmp_path / "s.grp"
    save_group(path, sylow_group(params), params)
    header = read_header(path)
    assert header["kind"] == "matrix"
    assert header["count"] == 125
    assert header_matches(header, params)
    assert not header_matches(header, UnitaryParams(5, 1, 4))
    assert not header_matches(header, WreathSpec(5, 1, 0))


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.grp"
    path.write_bytes(b"NOTAGRP!" + b"\x00" * 64)
    with pytest.raises(CacheError):
        read_header(path)


def test_truncated_file_rejected(tmp_path):
    params = UnitaryParams(5, 1, 3)
    path = tmp_path / "s.grp"
    save_group(path, sylow_group(params), params)
    clipped = tmp_path / "clipped.grp"
    clipped.write_bytes(path.read_bytes()[:100])
    with pytest.raises(CacheError):
        load_group(clipped)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(CacheError):
        read_header(tmp_path / "nope.grp")


def test_virtual_group_not_cacheable(tmp_path):
    params = UnitaryParams(5, 1, 5)
    G = sylow_group(params, materialise=False)
    with pytest.raises(CacheError):
        save_group(tmp_path / "v.grp", G, params)


def test_cache_error_is_ioerror():
    assert issubclass(CacheError, IOError)
