"""Binary serialization of sparse spectra (the FMG1 on-disk format).

Layout, little-endian throughout:

    magic "FMG1"        4 bytes
    rows R              u32
    cols C              u32
    total_units         u32
    entry count N       u32
    N records of        u32 u, u32 v, f64 re, f64 im   (24 bytes each)

Records are strictly ascending by (u, v). Stream size is always
20 + 24*N bytes. Floats are raw IEEE-754 bits, so encode/decode is a
bitwise identity.
"""

from __future__ import annotations

import struct

import numpy as np

from .merge import SparseSpectrum
from .spectral import Spectrum

__all__ = [
    "MAGIC",
    "FmgFormatError",
    "FmgCorruptionError",
    "FmgTruncatedError",
    "encode_fmg",
    "decode_fmg",
    "densify",
]

MAGIC = b"FMG1"
_HEADER = struct.Struct("<4sIIII")
_ENTRY_DTYPE = np.dtype([("u", "<u4"), ("v", "<u4"), ("re", "<f8"), ("im", "<f8")])
_U32_MAX = 0xFFFFFFFF


class FmgFormatError(ValueError):
    """Stream is not FMG1 data."""


class FmgCorruptionError(FmgFormatError):
    """Structurally FMG1 but violates an internal invariant."""


class FmgTruncatedError(FmgFormatError):
    """Stream length disagrees with the declared entry count."""


def encode_fmg(sparse: SparseSpectrum) -> bytes:
    """Serialize a sparse spectrum; see the module docstring for layout."""
    for name, value in (
        ("rows", sparse.rows),
        ("cols", sparse.cols),
        ("total_units", sparse.total_units),
        ("entry count", sparse.entry_count),
    ):
        if value > _U32_MAX:
            raise ValueError(f"{name} {value} exceeds the u32 field width")
    header = _HEADER.pack(
        MAGIC, sparse.rows, sparse.cols, sparse.total_units, sparse.entry_count
    )
    records = np.empty(sparse.entry_count, dtype=_ENTRY_DTYPE)
    records["u"] = sparse.u
    records["v"] = sparse.v
    records["re"] = sparse.values.real
    records["im"] = sparse.values.imag
    return header + records.tobytes()


def decode_fmg(data: bytes) -> SparseSpectrum:
    """Exact inverse of :func:`encode_fmg`, validating all invariants."""
    data = bytes(data)
    if len(data) < _HEADER.size:
        raise FmgTruncatedError(
            f"stream holds {len(data)} bytes, header needs {_HEADER.size}"
        )
    magic, rows, cols, total_units, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FmgFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    expected = _HEADER.size + _ENTRY_DTYPE.itemsize * count
    if len(data) != expected:
        raise FmgTruncatedError(
            f"stream holds {len(data)} bytes, expected {expected} for {count} entries"
        )
    if rows < 1 or cols < 1:
        raise FmgCorruptionError(f"bad dimensions {rows}x{cols}")
    if total_units < max(1, count):
        raise FmgCorruptionError(
            f"total_units {total_units} cannot cover {count} entries"
        )

    records = np.frombuffer(data, dtype=_ENTRY_DTYPE, count=count, offset=_HEADER.size)
    u = records["u"].astype(np.int64)
    v = records["v"].astype(np.int64)
    if count:
        if int(u.max()) >= rows:
            raise FmgCorruptionError(f"entry u index {int(u.max())} >= rows {rows}")
        if int(v.max()) >= cols:
            raise FmgCorruptionError(f"entry v index {int(v.max())} >= cols {cols}")
        keys = u.astype(np.uint64) * np.uint64(cols) + v.astype(np.uint64)
        if np.any(keys[1:] <= keys[:-1]):
            raise FmgCorruptionError("entries not strictly ascending by (u, v)")
    values = records["re"].astype(np.float64) + 1j * records["im"].astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise FmgCorruptionError("entry values must be finite")
    return SparseSpectrum(
        rows=int(rows),
        cols=int(cols),
        total_units=int(total_units),
        u=u,
        v=v,
        values=values,
    )


def densify(sparse: SparseSpectrum) -> Spectrum:
    """Expand to the dense R x C grid with zeros at removed positions."""
    grid = np.zeros((sparse.rows, sparse.cols), dtype=np.complex128)
    grid[sparse.u, sparse.v] = sparse.values
    return Spectrum(grid, shifted=False)
