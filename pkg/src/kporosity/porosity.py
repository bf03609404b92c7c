"""Numerical k-porosity of grid sets.

For a fixed orthonormal frame the k hole centres z_i = x + t_i theta_i only
interact through the common radius, so each direction is optimised on its own
(both orientations, offsets t on a regular grid) and the frame's value is the
k-th best direction value.  Hole emptiness is decided with a certified lower
bound on the distance to the occupied cell centres taken from the exact
distance transform.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import Frame, frame_grid
from .setgen import DistanceField, SparseGrid, distance_transform

ORACLE_ANGLES = 720
MAX_ORACLE_R = 64


@dataclass(frozen=True)
class PorosityParams:
    frame_resolution: int = 16
    t_steps: int = 64
    r_max: float = 0.25
    r_min: float = 0.0
    scale_count: int = 6
    min_cells: float = 8.0
    seed: int = 0


@dataclass(frozen=True, eq=False)
class PorosityEstimate:
    rho_hat: float
    frame: Frame
    hole_offsets: np.ndarray
    error_bound: float
    frame_id: int
    r: float

    def hole_centres(self) -> np.ndarray:
        return self.frame.origin + (self.hole_offsets * self.r)[:, None] * self.frame.directions


@dataclass(frozen=True, eq=False)
class PorosityProfile:
    point: np.ndarray
    cell: tuple
    scales: tuple
    estimates: tuple
    truncated: bool

    @property
    def liminf_proxy(self) -> float:
        return min(e.rho_hat for e in self.estimates)


@dataclass(frozen=True, eq=False)
class SetPorosity:
    value: float
    k: int
    profiles: list = field(repr=False)
    sampled: bool


def _check_point(A: SparseGrid, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (A.n,):
        raise ValueError(f"point must have dimension {A.n}")
    cell = np.floor(x * A.R).astype(np.int64)
    centre = (cell + 0.5) / A.R
    if np.abs(x - centre).max() > 1e-9 / A.R or not A.contains_cells(cell)[0]:
        raise ValueError("x must be the centre of an occupied cell")
    return centre


def error_bound(n: int, R: int, r: float, t_steps: int) -> float:
    return (math.sqrt(n) / R + r / t_steps) / r


def por_k_at(A: SparseGrid, D: DistanceField, x, r: float, k: int,
             frames: list[Frame], t_steps: int = 64) -> PorosityEstimate:
    """Lower estimate of por_k(A, x, r) over the given frame family.

    Frames may carry more than k directions; the best k of them are used.
    """
    if (D.n, D.R) != (A.n, A.R):
        raise ValueError("distance field does not match the grid")
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    if not 1 <= k <= A.n:
        raise ValueError("need 1 <= k <= n")
    x = _check_point(A, x)
    dirs = np.stack([f.directions for f in frames])  # (F, d, n)
    if dirs.shape[1] < k:
        raise ValueError("frames carry fewer than k directions")
    ts = r * np.arange(1, t_steps + 1) / t_steps
    signed = np.stack([dirs, -dirs], axis=2)  # (F, d, 2, n)
    z = x + ts[:, None] * signed[..., None, :]  # (F, d, 2, T, n)
    room = D.lower_bound(z) / r
    vals = np.minimum(room, 1.0 - ts / r)
    best_t = vals.argmax(axis=-1)
    per_sign = np.take_along_axis(vals, best_t[..., None], -1)[..., 0]  # (F, d, 2)
    sign_idx = per_sign.argmax(axis=-1)
    per_dir = per_sign.max(axis=-1)  # (F, d)
    order = np.argsort(-per_dir, axis=1, kind="stable")[:, :k]
    frame_val = np.take_along_axis(per_dir, order[:, k - 1:k], 1)[:, 0]
    fid = int(np.argmax(frame_val))
    chosen = order[fid]
    sgn = np.where(sign_idx[fid, chosen] == 0, 1.0, -1.0)
    frame = Frame(x, dirs[fid, chosen] * sgn[:, None])
    offsets = ts[best_t[fid, chosen, sign_idx[fid, chosen]]] / r
    rho = float(np.clip(frame_val[fid], 0.0, 0.5))
    return PorosityEstimate(rho, frame, offsets, error_bound(A.n, A.R, r, t_steps), fid, r)


def scale_ladder(R: int, params: PorosityParams) -> tuple[list[float], bool]:
    floor = max(params.min_cells / R, params.r_min)
    want = [params.r_max * 2.0 ** -j for j in range(params.scale_count)]
    keep = [r for r in want if r > floor * (1 + 1e-12)]
    return keep, len(keep) < len(want)


def default_field(A: SparseGrid, params: PorosityParams) -> DistanceField:
    return distance_transform(A, pad=int(math.ceil(params.r_max * A.R)) + 1)


def por_k_profile(A: SparseGrid, x, k: int, params: PorosityParams = PorosityParams(),
                  D: DistanceField | None = None, frames=None) -> PorosityProfile:
    scales, truncated = scale_ladder(A.R, params)
    if not scales:
        raise ValueError("no admissible scales: r_max is below the resolution floor")
    D = D if D is not None else default_field(A, params)
    frames = frames if frames is not None else frame_grid(A.n, A.n, params.frame_resolution, params.seed)
    x = _check_point(A, x)
    ests = tuple(por_k_at(A, D, x, r, k, frames, params.t_steps) for r in scales)
    cell = tuple(int(c) for c in np.floor(x * A.R))
    return PorosityProfile(x, cell, tuple(scales), ests, truncated)


def sample_cells(A: SparseGrid, sample_points: int, seed: int) -> tuple[np.ndarray, bool]:
    if len(A) <= sample_points:
        return A.occupied, False
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(A), size=sample_points, replace=False))
    return A.occupied[idx], True


def survey_porosity(A: SparseGrid, k: int, sample_points: int = 64, seed: int = 0,
                    params: PorosityParams = PorosityParams(), threads: int = 1,
                    D: DistanceField | None = None) -> SetPorosity:
    """Profiles at a seeded sample of occupied cells and their minimum.

    With sampling the value is an upper bound for the infimum over the grid set.
    """
    if len(A) == 0:
        raise ValueError("porosity of an empty set is undefined")
    cells, sampled = sample_cells(A, sample_points, seed)
    D = D if D is not None else default_field(A, params)
    frames = frame_grid(A.n, A.n, params.frame_resolution, params.seed)
    points = (cells + 0.5) / A.R

    def one(p):
        return por_k_profile(A, p, k, params, D, frames)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            profiles = list(pool.map(one, points))
    else:
        profiles = [one(p) for p in points]
    value = min(p.liminf_proxy for p in profiles)
    return SetPorosity(value, k, profiles, sampled)


def por_k_set(A: SparseGrid, k: int, sample_points: int = 64, seed: int = 0,
              params: PorosityParams = PorosityParams(), threads: int = 1) -> float:
    return survey_porosity(A, k, sample_points, seed, params, threads).value


def oracle_step_slack(R: int, r: float) -> float:
    """Worst-case loss of the oracle's search grid, in units of rho."""
    return 1.0 / (4.0 * R * r) + math.pi / ORACLE_ANGLES


def por_k_oracle(A: SparseGrid, x, r: float, k: int) -> float:
    """Brute-force por_k(A, x, r): explicit hole centres checked against every cell centre."""
    if not (A.n == 1 or (A.n == 2 and A.R <= MAX_ORACLE_R)):
        raise ValueError("oracle only runs for n=1 or n=2 with R <= 64")
    if not 1 <= k <= A.n:
        raise ValueError("need 1 <= k <= n")
    x = _check_point(A, x)
    centres = A.centers()
    step = 1.0 / (4 * A.R)
    ts = step * np.arange(1, int(math.floor(r / step + 1e-9)) + 1)
    if A.n == 1:
        dirs = np.array([[1.0], [-1.0]])
    else:
        ang = 2.0 * math.pi * np.arange(ORACLE_ANGLES) / ORACLE_ANGLES
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    best = np.empty(len(dirs))
    for j, th in enumerate(dirs):
        z = x + ts[:, None] * th
        d2 = ((z[:, None, :] - centres[None, :, :]) ** 2).sum(-1).min(axis=1)
        best[j] = np.max(np.minimum(np.sqrt(d2) / r, 1.0 - ts / r))
    if k == 1:
        val = best.max()
    else:
        quarter = ORACLE_ANGLES // 4
        val = np.max(np.minimum(best, np.roll(best, -quarter)))
    return float(np.clip(val, 0.0, 0.5))
