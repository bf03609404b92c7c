"""Reader/writer for the ``.kpgrid`` binary grid format.

Layout (all little-endian): b"KPGR", u16 version (=1), u16 n, u64 R,
u64 count, count*n u64 cell indices in lexicographic order, u32 metadata
length, UTF-8 metadata.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .setgen import SparseGrid

MAGIC = b"KPGR"
VERSION = 1
_HEADER = struct.Struct("<4sHHQQ")


class GridFormatError(ValueError):
    pass


def dumps(grid: SparseGrid) -> bytes:
    meta = grid.metadata.encode("utf-8")
    cells = np.ascontiguousarray(grid.occupied, dtype="<u8")
    return b"".join([
        _HEADER.pack(MAGIC, VERSION, grid.n, grid.R, len(grid)),
        cells.tobytes(),
        struct.pack("<I", len(meta)),
        meta,
    ])


def loads(data: bytes) -> SparseGrid:
    if len(data) < _HEADER.size:
        raise GridFormatError("truncated header")
    magic, version, n, R, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise GridFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise GridFormatError(f"unsupported version {version}")
    if n < 1 or R < 1:
        raise GridFormatError("invalid grid geometry")
    body = _HEADER.size + 8 * n * count
    if len(data) < body + 4:
        raise GridFormatError("truncated cell block")
    cells = np.frombuffer(data, dtype="<u8", count=n * count, offset=_HEADER.size).reshape(count, n)
    if count and cells.max() >= R:
        raise GridFormatError("cell index out of bounds")
    cells = cells.astype(np.int64)
    if count > 1:
        d = np.diff(cells, axis=0)
        nz = d != 0
        lead = d[np.arange(len(d)), np.argmax(nz, axis=1)]
        if not np.all(nz.any(axis=1) & (lead > 0)):
            raise GridFormatError("cells are not strictly sorted")
    (mlen,) = struct.unpack_from("<I", data, body)
    if len(data) != body + 4 + mlen:
        raise GridFormatError("metadata length mismatch")
    meta = data[body + 4:].decode("utf-8")
    return SparseGrid(n, R, cells, meta)


def write(grid: SparseGrid, path) -> None:
    Path(path).write_bytes(dumps(grid))


def read(path) -> SparseGrid:
    return loads(Path(path).read_bytes())
