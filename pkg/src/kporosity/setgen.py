"""Sparse occupancy grids on [0,1]^n and the sets we test against.

A grid with ``R`` cells per axis stores the sorted, unique integer indices of
its occupied cells; cell ``c`` is the closed cube prod_i [c_i/R, (c_i+1)/R].
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numba
import numpy as np

# rasterisation snaps box endpoints lying this close (in cell units) to a grid line
SNAP = 1e-3
MAX_DENSE_CELLS = 1 << 27


@dataclass(frozen=True, eq=False)
class SparseGrid:
    ambient_dim: int
    cells_per_axis: int
    occupied: np.ndarray = field(repr=False)
    metadata: str = ""

    def __post_init__(self):
        n, R = int(self.ambient_dim), int(self.cells_per_axis)
        if n < 1 or R < 1:
            raise ValueError("grid needs n >= 1 and R >= 1")
        cells = np.asarray(self.occupied, dtype=np.int64).reshape(-1, n)
        if cells.size and (cells.min() < 0 or cells.max() >= R):
            raise ValueError("cell index out of bounds")
        if len(cells) > 1:
            d = np.diff(cells, axis=0)
            # lexicographic strict increase: first nonzero difference must be positive
            nz = d != 0
            first = np.argmax(nz, axis=1)
            lead = d[np.arange(len(d)), first]
            if not np.all(nz.any(axis=1) & (lead > 0)):
                cells = np.unique(cells, axis=0)
        cells = np.ascontiguousarray(cells)
        cells.setflags(write=False)
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "cells_per_axis", R)
        object.__setattr__(self, "occupied", cells)

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def R(self) -> int:
        return self.cells_per_axis

    def __len__(self) -> int:
        return len(self.occupied)

    def centers(self) -> np.ndarray:
        return (self.occupied + 0.5) / self.R

    def keys(self) -> np.ndarray:
        """Row-major linear cell keys (sorted, since cells are lexicographic)."""
        key = np.zeros(len(self.occupied), dtype=np.int64)
        for j in range(self.n):
            key = key * self.R + self.occupied[:, j]
        return key

    def contains_cells(self, cells) -> np.ndarray:
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, self.n)
        inside = np.all((cells >= 0) & (cells < self.R), axis=1)
        key = np.zeros(len(cells), dtype=np.int64)
        for j in range(self.n):
            key = key * self.R + np.clip(cells[:, j], 0, self.R - 1)
        own = self.keys()
        pos = np.searchsorted(own, key)
        hit = (pos < len(own)) & (own[np.minimum(pos, len(own) - 1)] == key) if len(own) else np.zeros(len(key), bool)
        return inside & hit

    def to_dense(self) -> np.ndarray:
        if self.R ** self.n > MAX_DENSE_CELLS:
            raise ValueError(f"dense grid of {self.R}^{self.n} cells is too large")
        out = np.zeros((self.R,) * self.n, dtype=bool)
        if len(self.occupied):
            out[tuple(self.occupied.T)] = True
        return out

    def issubset(self, other: "SparseGrid") -> bool:
        if (self.n, self.R) != (other.n, other.R):
            raise ValueError("grids differ in geometry")
        return bool(np.all(other.contains_cells(self.occupied)))


@dataclass(frozen=True)
class CantorSpec:
    lam: float
    depth: int

    def __post_init__(self):
        if not 0.0 < self.lam < 0.5:
            raise ValueError(f"lambda must lie in (0, 1/2), got {self.lam}")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def dimension(self) -> float:
        return math.log(2.0) / math.log(1.0 / self.lam)

    def maps(self) -> list[tuple[float, np.ndarray]]:
        return [(self.lam, np.array([0.0])), (self.lam, np.array([1.0 - self.lam]))]


def _snap(v: np.ndarray) -> np.ndarray:
    r = np.rint(v)
    return np.where(np.abs(v - r) <= SNAP, r, v)


def _axis_ranges(lo: np.ndarray, hi: np.ndarray, R: int) -> tuple[np.ndarray, np.ndarray]:
    """First/last cells meeting each closed interval [lo, hi] (arrays, cell units)."""
    a, b = _snap(lo * R), _snap(hi * R)
    solid = b > a
    # positive-length interval: cells overlapping it in more than a point
    first = np.where(solid, np.floor(a), np.ceil(a) - 1)
    last = np.where(solid, np.ceil(b) - 1, np.floor(b))
    # degenerate interval strictly inside a cell: ceil(a)-1 == floor(a)
    first = np.clip(first, 0, R - 1).astype(np.int64)
    last = np.clip(last, 0, R - 1).astype(np.int64)
    return first, last


def rasterize_boxes(lower: np.ndarray, side: np.ndarray, R: int) -> np.ndarray:
    """Cells meeting a union of axis-aligned boxes [lower, lower + side].

    Boxes of positive extent along an axis keep the cells they overlap with
    positive length; zero-extent axes keep every cell touching the coordinate
    (both neighbours when it falls on a cell boundary).
    """
    lower = np.atleast_2d(np.asarray(lower, dtype=float))
    side = np.broadcast_to(np.asarray(side, dtype=float), lower.shape)
    if len(lower) == 0:
        return np.zeros((0, lower.shape[1]), dtype=np.int64)
    first, last = _axis_ranges(lower, lower + side, R)
    counts = last - first + 1
    n = lower.shape[1]
    if n == 1:
        tot = counts[:, 0]
        start = np.repeat(first[:, 0], tot)
        offs = np.arange(tot.sum()) - np.repeat(np.cumsum(tot) - tot, tot)
        return np.unique(start + offs)[:, None]
    blocks = []
    for f, c in zip(first, counts):
        axes = [np.arange(fi, fi + ci) for fi, ci in zip(f, c)]
        blocks.append(np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n))
    return np.unique(np.concatenate(blocks), axis=0)


def gen_ifs(maps, n: int, depth: int, R: int, metadata: str | None = None) -> SparseGrid:
    """Cells meeting the depth-`depth` image of [0,1]^n under a similarity IFS.

    Each map is ``(scale, offset)`` acting as t -> scale*t + offset.
    """
    maps = [(float(s), np.broadcast_to(np.asarray(o, dtype=float), (n,)).copy()) for s, o in maps]
    for s, o in maps:
        if not 0.0 < s < 1.0:
            raise ValueError(f"map scale {s} outside (0, 1)")
        if np.any(o < -1e-12) or np.any(o + s > 1.0 + 1e-12):
            raise ValueError("map image escapes the unit cube")
    meta = metadata or f"ifs(maps={len(maps)},n={n},depth={depth},R={R})"
    if not maps:
        return SparseGrid(n, R, np.zeros((0, n), dtype=np.int64), meta)
    lower = np.zeros((1, n))
    side = 1.0
    scales = {s for s, _ in maps}
    if len(scales) == 1:
        s0 = scales.pop()
        for _ in range(depth):
            lower = np.concatenate([s0 * lower + o for _, o in maps])
            side *= s0
        return SparseGrid(n, R, rasterize_boxes(lower, side, R), meta)
    sides = np.ones(1)
    for _ in range(depth):
        lower = np.concatenate([s * lower + o for s, o in maps])
        sides = np.concatenate([s * sides for s, _ in maps])
    return SparseGrid(n, R, rasterize_boxes(lower, sides[:, None] * np.ones(n), R), meta)


def gen_cantor(spec: CantorSpec, R: int) -> SparseGrid:
    grid = gen_ifs(spec.maps(), 1, spec.depth, R)
    return SparseGrid(1, R, grid.occupied, f"cantor(lambda={spec.lam!r},depth={spec.depth},R={R})")


def gen_product(factors: list[SparseGrid]) -> SparseGrid:
    if not factors:
        raise ValueError("product needs at least one factor")
    R = factors[0].R
    if any(f.R != R for f in factors):
        raise ValueError("all factors must share cells_per_axis")
    cells = factors[0].occupied
    for f in factors[1:]:
        a, b = len(cells), len(f.occupied)
        # lexicographic order survives: outer index varies slowest
        cells = np.concatenate([np.repeat(cells, b, axis=0), np.tile(f.occupied, (a, 1))], axis=1)
    meta = " x ".join(f.metadata or "?" for f in factors)
    return SparseGrid(sum(f.n for f in factors), R, cells, meta)


def gen_full(n: int, R: int) -> SparseGrid:
    axes = [np.arange(R)] * n
    cells = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    return SparseGrid(n, R, cells, f"full(n={n},R={R})")


def gen_kplane(n: int, m: int, R: int) -> SparseGrid:
    """Cells meeting {x in [0,1]^n : x_{m+1} = ... = x_n = 1/2}."""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
    first, last = _axis_ranges(np.array([0.5]), np.array([0.5]), R)
    layer = np.arange(first[0], last[0] + 1)
    axes = [np.arange(R)] * m + [layer] * (n - m)
    cells = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    return SparseGrid(n, R, cells, f"kplane(n={n},m={m},R={R})")


def gen_singleton(n: int, R: int, cell) -> SparseGrid:
    return SparseGrid(n, R, np.asarray(cell, dtype=np.int64).reshape(1, n), f"singleton({tuple(cell)},R={R})")


def _ball_offsets(n: int, radius_cells: float) -> np.ndarray:
    reach = int(math.floor(radius_cells + 1e-9))
    rng = np.arange(-reach, reach + 1)
    offs = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
    keep = np.einsum("ij,ij->i", offs, offs) <= radius_cells * radius_cells * (1 + 1e-12)
    return offs[keep]


def dilate(A: SparseGrid, r: float) -> SparseGrid:
    """Outer approximation of A(r) = {x : dist(x, A) <= r}.

    Keeps the cells whose centre lies within r + half a cell diagonal of an
    occupied cell centre.
    """
    if r < 0:
        raise ValueError("dilation radius must be non-negative")
    if len(A) == 0:
        return A
    reach = r * A.R + 0.5 * math.sqrt(A.n)
    offs = _ball_offsets(A.n, reach)
    cand = (A.occupied[:, None, :] + offs[None, :, :]).reshape(-1, A.n)
    cand = cand[np.all((cand >= 0) & (cand < A.R), axis=1)]
    return SparseGrid(A.n, A.R, np.unique(cand, axis=0), f"dilate({A.metadata},{r!r})")


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Euclidean distance from cell centres to the nearest occupied cell centre.

    ``values`` covers cell indices ``-pad .. R+pad-1`` on every axis and is
    measured in units where the cube side is 1.
    """

    ambient_dim: int
    cells_per_axis: int
    pad: int
    values: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.ambient_dim

    @property
    def R(self) -> int:
        return self.cells_per_axis

    def at_cells(self, cells) -> np.ndarray:
        """Distances at (unpadded) cell indices; indices outside the stored block raise."""
        idx = np.asarray(cells, dtype=np.int64) + self.pad
        if np.any(idx < 0) or np.any(idx >= self.values.shape[0]):
            raise IndexError("cell outside the stored distance field")
        return self.values[tuple(np.moveaxis(idx, -1, 0))]

    def lower_bound(self, points) -> np.ndarray:
        """Certified lower bound on dist(p, occupied centres) for arbitrary points.

        Uses dist(p) >= D(c) - |p - c| for the cell c holding p; points beyond
        the stored block are first projected onto it, which only shrinks the
        distance to any centre inside the cube.
        """
        p = np.asarray(points, dtype=float)
        R, pad = self.R, self.pad
        lo, hi = -pad / R, (R + pad) / R
        q = np.clip(p, lo, hi)
        outside = np.linalg.norm(p - q, axis=-1)
        cell = np.clip(np.floor(q * R).astype(np.int64), -pad, R + pad - 1)
        centre = (cell + 0.5) / R
        base = self.values[tuple(np.moveaxis(cell + pad, -1, 0))] - np.linalg.norm(q - centre, axis=-1)
        base = np.maximum(base, 0.0)
        # p - q is normal to the block face, so the two legs are orthogonal
        return np.sqrt(base * base + outside * outside)


@numba.njit(cache=True)
def _lower_envelope(f, out, v, z):
    """Exact 1-d squared distance transform (Felzenszwalb & Huttenlocher)."""
    m = f.shape[0]
    inf = np.inf
    k = -1
    for q in range(m):
        if f[q] == inf:
            continue
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -inf
            z[1] = inf
            continue
        while True:
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * q - 2.0 * p)
            if s <= z[k]:
                k -= 1
                if k < 0:
                    break
            else:
                break
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -inf
            z[1] = inf
        else:
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = inf
    if k < 0:
        for q in range(m):
            out[q] = inf
        return
    j = 0
    for q in range(m):
        while z[j + 1] < q:
            j += 1
        d = q - v[j]
        out[q] = d * d + f[v[j]]


@numba.njit(cache=True)
def _edt_lines(arr):
    """Apply the 1-d transform along the last axis of a 2-d array of lines."""
    lines, m = arr.shape
    out = np.empty(m)
    v = np.empty(m, dtype=np.int64)
    z = np.empty(m + 1)
    for i in range(lines):
        _lower_envelope(arr[i], out, v, z)
        for q in range(m):
            arr[i, q] = out[q]


def squared_edt(mask: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance (in cells) from every cell to the nearest True cell."""
    f = np.where(mask, 0.0, np.inf)
    for axis in range(mask.ndim):
        moved = np.ascontiguousarray(np.moveaxis(f, axis, -1))
        shape = moved.shape
        flat = moved.reshape(-1, shape[-1])
        _edt_lines(flat)
        f = np.moveaxis(flat.reshape(shape), -1, axis)
    return np.ascontiguousarray(f)


def distance_transform(A: SparseGrid, pad: int = 0) -> DistanceField:
    """Exact centre-to-centre distance field of A, optionally padded by `pad` cells per side."""
    if len(A) == 0:
        raise ValueError("distance to an empty set is undefined")
    side = A.R + 2 * pad
    if side ** A.n > MAX_DENSE_CELLS:
        raise ValueError(f"distance field of {side}^{A.n} cells is too large")
    mask = np.zeros((side,) * A.n, dtype=bool)
    mask[tuple((A.occupied + pad).T)] = True
    d2 = squared_edt(mask)
    values = np.sqrt(d2) / A.R
    values.setflags(write=False)
    return DistanceField(A.n, A.R, pad, values)


def brute_force_distances(A: SparseGrid) -> np.ndarray:
    """All-pairs reference for distance_transform (small grids only)."""
    R, n = A.R, A.n
    cells = np.stack(np.meshgrid(*([np.arange(R)] * n), indexing="ij"), axis=-1).reshape(-1, n)
    best = np.full(len(cells), np.iinfo(np.int64).max, dtype=np.int64)
    for occ in A.occupied:
        d = cells - occ
        best = np.minimum(best, np.einsum("ij,ij->i", d, d))
    return (np.sqrt(best.astype(float)) / R).reshape((R,) * n)


def cell_of(A: SparseGrid, point) -> np.ndarray:
    p = np.asarray(point, dtype=float)
    return np.clip(np.floor(p * A.R).astype(np.int64), 0, A.R - 1)


