"""Binary on-disk cache for enumerated groups.

Layout (all integers little-endian):
  magic   8 bytes  b"USYLOWG1"
  kind    u8       1 = matrix group, 2 = wreath group
  header  (matrix) p u32, k u32, modulus u64, n u32, parity u8
          (wreath) p u32, r u32, height u32
  counts  element count u64, generator count u64
  elements, then generators:
          matrix:  n*n uint16 field indices per element, canonical
                   sorted order
          wreath:  flattened exponent sequence per element (u32 each,
                   depth-first: base tuples then the top exponent)

Encodings are stable given (p, k, modulus) resp. (p, r, height), so
re-runs produce byte-identical files.
"""

from __future__ import annotations

import struct

import numpy as np

MAGIC = b"USYLOWG1"
KIND_MATRIX = 1
KIND_WREATH = 2


class CacheError(IOError):
    pass


def _modulus_int(field):
    """Integer encoding sum(c_i * p^i) of the modulus polynomial."""
    acc = 0
    for c in reversed(field.modulus):
        acc = acc * field.p + c
    return acc


def _modulus_coeffs(value, p, deg):
    coeffs = []
    for _ in range(deg + 1):
        coeffs.append(value % p)
        value //= p
    if value:
        raise CacheError("modulus encoding out of range")
    return tuple(coeffs)


def _wreath_flat_len(p, height):
    n = 1
    for _ in range(height):
        n = p * n + 1
    return n


def _flatten_wreath(x, height):
    if height == 0:
        return [x]
    b, t = x
    out = []
    for c in b:
        out.extend(_flatten_wreath(c, height - 1))
    out.append(t)
    return out


def _unflatten_wreath(flat, pos, p, height):
    if height == 0:
        return int(flat[pos]), pos + 1
    base = []
    for _ in range(p):
        c, pos = _unflatten_wreath(flat, pos, p, height - 1)
        base.append(c)
    return (tuple(base), int(flat[pos])), pos + 1


def save_group(path, G, meta):
    """Write a Group with its construction metadata: meta is a
    UnitaryParams (matrix groups) or WreathSpec (wreath groups)."""
    from .unitary import UnitaryParams
    from .wreath import WreathSpec

    if G.elements is None:
        raise CacheError("cannot cache a virtual group")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        if isinstance(meta, UnitaryParams):
            fh.write(struct.pack(
                "<BIIQIB", KIND_MATRIX, meta.p, meta.k,
                _modulus_int(meta.field), meta.n,
                1 if meta.is_even else 0,
            ))
            fh.write(struct.pack("<QQ", len(G.elements), len(G.generators)))
            for key in G.elements:
                fh.write(key)
            for key in G.generators:
                fh.write(key)
        elif isinstance(meta, WreathSpec):
            fh.write(struct.pack(
                "<BIII", KIND_WREATH, meta.p, meta.r, meta.height
            ))
            fh.write(struct.pack("<QQ", len(G.elements), len(G.generators)))
            flat = []
            for x in G.elements:
                flat.extend(_flatten_wreath(x, meta.height))
            for x in G.generators:
                flat.extend(_flatten_wreath(x, meta.height))
            np.asarray(flat, dtype="<u4").tofile(fh)
        else:
            raise CacheError(f"unsupported metadata {type(meta).__name__}")


def read_header(path):
    """Parse and return the header dict without loading elements."""
    try:
        with open(path, "rb") as fh:
            magic = fh.read(8)
            if magic != MAGIC:
                raise CacheError("bad magic (not a group cache file)")
            kind = struct.unpack("<B", fh.read(1))[0]
            if kind == KIND_MATRIX:
                p, k, modulus, n, parity = struct.unpack("<IIQIB", fh.read(21))
                count, gcount = struct.unpack("<QQ", fh.read(16))
                return {
                    "kind": "matrix", "p": p, "k": k, "modulus": modulus,
                    "n": n, "parity": "even" if parity else "odd",
                    "count": count, "gcount": gcount, "offset": 8 + 1 + 21 + 16,
                }
            if kind == KIND_WREATH:
                p, r, height = struct.unpack("<III", fh.read(12))
                count, gcount = struct.unpack("<QQ", fh.read(16))
                return {
                    "kind": "wreath", "p": p, "r": r, "height": height,
                    "count": count, "gcount": gcount, "offset": 8 + 1 + 12 + 16,
                }
            raise CacheError(f"unknown cache kind {kind}")
    except (OSError, struct.error) as exc:
        raise CacheError(str(exc)) from exc


def load_group(path):
    """Reconstruct (Group, meta) from a cache file."""
    from .field import FieldSpec
    from .groups import GenericOps, Group, MatrixOps
    from .unitary import UnitaryParams
    from .wreath import WreathSpec, _inv, _mul, _identity

    header = read_header(path)
    with open(path, "rb") as fh:
        fh.seek(header["offset"])
        if header["kind"] == "matrix":
            p, k, n = header["p"], header["k"], header["n"]
            modulus = _modulus_coeffs(header["modulus"], p, 2 * k)
            field = FieldSpec(p, k, modulus=modulus)
            params = UnitaryParams(p, k, n, field=field)
            if params.parity != header["parity"]:
                raise CacheError("parity inconsistent with n")
            step = 2 * n * n
            raw = fh.read(step * header["count"])
            if len(raw) != step * header["count"]:
                raise CacheError("truncated element section")
            elements = [raw[i * step:(i + 1) * step]
                        for i in range(header["count"])]
            graw = fh.read(step * header["gcount"])
            gens = [graw[i * step:(i + 1) * step]
                    for i in range(header["gcount"])]
            G = Group(
                MatrixOps(field, n), elements=elements, generators=gens,
                name=f"S(p={p},q={p ** k},n={n})",
            )
            return G, params
        p, r, h = header["p"], header["r"], header["height"]
        spec = WreathSpec(p, r, h)
        flen = _wreath_flat_len(p, h)
        total = (header["count"] + header["gcount"]) * flen
        flat = np.fromfile(fh, dtype="<u4", count=total)
        if flat.size != total:
            raise CacheError("truncated element section")
        elements = []
        pos = 0
        for _ in range(header["count"]):
            x, pos = _unflatten_wreath(flat, pos, p, h)
            elements.append(x)
        gens = []
        for _ in range(header["gcount"]):
            x, pos = _unflatten_wreath(flat, pos, p, h)
            gens.append(x)
        ops = GenericOps(
            _identity(p, r, h),
            lambda a, b: _mul(p, r, h, a, b),
            lambda a: _inv(p, r, h, a),
        )
        G = Group(ops, elements=elements, generators=gens,
                  name=f"C{p ** r}" + f" wr C{p}" * h)
        return G, spec


def header_matches(header, meta):
    """Whether a cache header describes the same construction."""
    from .unitary import UnitaryParams
    from .wreath import WreathSpec

    if isinstance(meta, UnitaryParams):
        return (
            header["kind"] == "matrix"
            and header["p"] == meta.p and header["k"] == meta.k
            and header["modulus"] == _modulus_int(meta.field)
            and header["n"] == meta.n
        )
    if isinstance(meta, WreathSpec):
        return (
            header["kind"] == "wreath"
            and header["p"] == meta.p and header["r"] == meta.r
            and header["height"] == meta.height
        )
    return False
