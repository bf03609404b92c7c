"""Vector, half-space, cone and subspace primitives.

Everything is plain float64 numpy. Subspaces are stored as an ``(m, n)`` array
whose rows are an orthonormal basis; points and directions are 1-d arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import SphericalVoronoi

UNIT_TOL = 1e-12
FRAME_TOL = 1e-10
LIPSCHITZ_SLACK = 1e-9
MAX_DIM = 8


def _as_point(y, n: int | None = None) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"expected a 1-d point, got shape {y.shape}")
    if n is not None and y.shape[0] != n:
        raise ValueError(f"dimension mismatch: expected {n}, got {y.shape[0]}")
    return y


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValueError("cannot normalise the zero vector")
    return v / norm


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace V in G(n, m), given by an orthonormal basis."""

    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(basis.shape[0]), rtol=0.0, atol=UNIT_TOL):
            raise ValueError("subspace basis is not orthonormal")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def span(cls, *vectors) -> "Subspace":
        """Subspace spanned by arbitrary (independent) vectors."""
        mat = np.atleast_2d(np.asarray(vectors, dtype=float))
        n = mat.shape[1]
        q, r = np.linalg.qr(mat.T)
        if np.any(np.abs(np.diag(r)) < 1e-12):
            raise ValueError("spanning vectors are linearly dependent")
        return cls(n, q.T.copy())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((0, n)))

    def coords(self, y) -> np.ndarray:
        """Coordinates of the projection of y (or rows of y) in this basis."""
        return np.asarray(y, dtype=float) @ self.basis.T

    def embed(self, u) -> np.ndarray:
        """Map basis coordinates back into R^n."""
        return np.asarray(u, dtype=float) @ self.basis


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """Open half-space {y : (y - anchor) . direction > 0}."""

    anchor: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        a = _as_point(self.anchor)
        d = _as_point(self.direction, a.shape[0])
        if abs(np.linalg.norm(d) - 1.0) > UNIT_TOL:
            raise ValueError("half-space direction must be a unit vector")
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "direction", d)

    def contains(self, y) -> bool | np.ndarray:
        y = np.asarray(y, dtype=float)
        return (y - self.anchor) @ self.direction > 0.0


@dataclass(frozen=True, eq=False)
class Cone:
    """X(apex, V, alpha): points whose offset from the apex is alpha-close to V."""

    apex: np.ndarray
    subspace: Subspace
    aperture: float

    def __post_init__(self):
        object.__setattr__(self, "apex", _as_point(self.apex, self.subspace.ambient_dim))
        if not 0.0 < self.aperture < 1.0:
            raise ValueError("cone aperture must lie in (0, 1)")


@dataclass(frozen=True, eq=False)
class Frame:
    """k mutually orthogonal unit directions attached to an origin."""

    origin: np.ndarray
    directions: np.ndarray

    def __post_init__(self):
        origin = _as_point(self.origin)
        dirs = np.atleast_2d(np.asarray(self.directions, dtype=float))
        if dirs.shape[1] != origin.shape[0] or not 1 <= dirs.shape[0] <= origin.shape[0]:
            raise ValueError("frame must hold 1..n directions of dimension n")
        gram = dirs @ dirs.T
        if np.abs(gram - np.eye(dirs.shape[0])).max() > FRAME_TOL:
            raise ValueError("frame directions are not orthonormal")
        dirs.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "directions", dirs)

    @property
    def k(self) -> int:
        return self.directions.shape[0]


def project(V: Subspace, y) -> np.ndarray:
    """Orthogonal projection onto V; works on a point or a stack of points."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != V.ambient_dim:
        raise ValueError(f"dimension mismatch: subspace in R^{V.ambient_dim}, point in R^{y.shape[-1]}")
    return (y @ V.basis.T) @ V.basis


def orthogonal_complement(V: Subspace) -> Subspace:
    n, m = V.ambient_dim, V.dim
    if m == 0:
        return Subspace.full(n)
    if m == n:
        return Subspace.zero(n)
    # complete the basis: the trailing columns of a complete QR of V^T span V-perp
    q, _ = np.linalg.qr(V.basis.T, mode="complete")
    comp = q[:, m:].T.copy()
    # one Gram-Schmidt pass against V to push residual overlap under 1e-12
    comp -= (comp @ V.basis.T) @ V.basis
    comp, _ = np.linalg.qr(comp.T)
    return Subspace(n, comp.T.copy())


def cone_contains(c: Cone, y) -> bool:
    y = _as_point(y, c.subspace.ambient_dim)
    d = y - c.apex
    perp = d - project(c.subspace, d)
    return bool(np.linalg.norm(perp) <= c.aperture * np.linalg.norm(d) * (1.0 + 1e-12) + 1e-15)


def is_planar(points, V: Subspace, alpha: float) -> bool:
    """True iff every point lies in the cone X(x, V, alpha) of every other point."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return True
    pts = pts.reshape(-1, V.ambient_dim)
    if len(pts) < 2:
        return True
    perp = pts - project(V, pts)
    par = pts - perp
    # blocks keep the pairwise arrays small for a few thousand samples
    step = max(1, 4_000_000 // (len(pts) * max(1, V.ambient_dim)))
    for lo in range(0, len(pts), step):
        dpar = par[lo:lo + step, None, :] - par[None, :, :]
        dperp = perp[lo:lo + step, None, :] - perp[None, :, :]
        a2 = np.einsum("ijk,ijk->ij", dpar, dpar)
        b2 = np.einsum("ijk,ijk->ij", dperp, dperp)
        # |perp| <= alpha |d|  <=>  b2 <= alpha^2 (a2 + b2)
        lhs = b2
        rhs = alpha * alpha * (a2 + b2)
        if np.any(lhs > rhs * (1.0 + 1e-9) + 1e-24):
            return False
    return True


def planar_graph_check(points, V: Subspace, alpha: float) -> bool:
    """Check that the points form the graph of an alpha/sqrt(1-alpha^2)-Lipschitz map over V."""
    pts = np.asarray(points, dtype=float).reshape(-1, V.ambient_dim)
    if len(pts) < 2:
        return True
    base = V.coords(pts)
    height = pts - project(V, pts)
    lip = alpha / math.sqrt(1.0 - alpha * alpha)
    for i in range(len(pts) - 1):
        db = np.linalg.norm(base[i + 1:] - base[i], axis=1)
        dh = np.linalg.norm(height[i + 1:] - height[i], axis=1)
        if np.any(db <= 1e-12):
            return False
        if np.any(dh > (lip + LIPSCHITZ_SLACK) * db):
            return False
    return True


def _circle_cover(radius: float) -> np.ndarray:
    step = 2.0 * math.asin(radius / 2.0)
    count = math.ceil(2.0 * math.pi / step - 1e-12)
    ang = 2.0 * math.pi * np.arange(count) / count
    return np.column_stack([np.cos(ang), np.sin(ang)])


def _fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    z = 1.0 - 2.0 * i / count
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def spherical_covering_radius(centers: np.ndarray) -> float:
    """Exact chordal covering radius of a point set on S^2 (via Voronoi vertices)."""
    sv = SphericalVoronoi(centers, radius=1.0, threshold=1e-9)
    verts = sv.vertices
    verts = verts / np.linalg.norm(verts, axis=1, keepdims=True)
    worst = 0.0
    for region, c in zip(sv.regions, centers):
        d = np.linalg.norm(verts[region] - c, axis=1).max()
        worst = max(worst, d)
    return float(worst)


def _sphere3_cover(radius: float) -> np.ndarray:
    # area heuristic for the starting size, then grow until the exact radius checks out
    count = max(8, int(4.0 / (radius * radius)))
    while True:
        pts = _fibonacci_sphere(count)
        if spherical_covering_radius(pts) <= radius:
            return pts
        count = int(count * 1.15) + 1


def _cube_face_cover(n: int, radius: float, max_centers: int = 2_000_000) -> np.ndarray:
    # radial projection from the cube surface onto the sphere is 1-Lipschitz,
    # so a grid on the faces whose cells have half-diagonal <= radius covers S^{n-1}
    per_axis = math.ceil(math.sqrt(n - 1) / radius)
    total = 2 * n * per_axis ** (n - 1)
    if total > max_centers:
        raise ValueError(f"sphere cover for n={n}, radius={radius} would need {total} centers")
    ticks = -1.0 + (2.0 * np.arange(per_axis) + 1.0) / per_axis
    grid = np.stack(np.meshgrid(*([ticks] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
    out = []
    for axis in range(n):
        for sign in (1.0, -1.0):
            face = np.insert(grid, axis, sign, axis=1)
            out.append(face)
    pts = np.concatenate(out)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def sphere_cover(n: int, radius: float, seed: int = 0) -> np.ndarray:
    """Centers whose closed chordal radius-`radius` caps cover S^{n-1}.

    n=1 returns the two points of S^0; n=2 an equiangular grid with step
    2*asin(radius/2); n=3 a Fibonacci set grown until its exact covering radius
    is small enough; n>3 a normalised cube-face grid.  The construction is
    deterministic, so `seed` only exists for interface stability.
    """
    del seed
    if not 0.0 < radius < 1.0 and not (n == 2 and radius == 1.0):
        raise ValueError("radius must lie in (0, 1)")
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"n must lie in 1..{MAX_DIM}")
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        return _circle_cover(radius)
    if n == 3:
        return _sphere3_cover(radius)
    return _cube_face_cover(n, radius)


def _shoemake(u: np.ndarray) -> np.ndarray:
    """Uniform [0,1)^3 samples -> rotation matrices via unit quaternions."""
    u1, u2, u3 = u[:, 0], u[:, 1], u[:, 2]
    a, b = np.sqrt(1.0 - u1), np.sqrt(u1)
    w = a * np.sin(2 * np.pi * u2)
    x = a * np.cos(2 * np.pi * u2)
    y = b * np.sin(2 * np.pi * u3)
    z = b * np.cos(2 * np.pi * u3)
    return np.stack([
        np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)], -1),
        np.stack([2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)], -1),
        np.stack([2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)], -1),
    ], axis=1)


def _halton(count: int, bases=(2, 3, 5)) -> np.ndarray:
    out = np.zeros((count, len(bases)))
    for j, b in enumerate(bases):
        for i in range(count):
            f, r, k = 1.0, 0.0, i + 1
            while k > 0:
                f /= b
                r += f * (k % b)
                k //= b
            out[i, j] = r
    return out


def frame_grid(n: int, k: int, resolution: int, seed: int = 0) -> list[Frame]:
    """Search family of orthonormal k-frames in R^n.

    n=2: frames at angles j*pi/(2*resolution); n=3: identity followed by a
    Halton/Shoemake quasi-uniform rotation sample, resolution**3 in total;
    otherwise identity followed by seeded random orthonormal frames.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if resolution < 1:
        raise ValueError("resolution must be positive")
    origin = np.zeros(n)
    if n == 1:
        mats = [np.eye(1)]
    elif n == 2:
        mats = []
        for j in range(resolution):
            a = j * math.pi / (2 * resolution)
            c, s = math.cos(a), math.sin(a)
            mats.append(np.array([[c, s], [-s, c]]))
    elif n == 3:
        count = resolution ** 3
        rots = _shoemake(_halton(count - 1)) if count > 1 else np.zeros((0, 3, 3))
        # rows of each rotation are the frame directions
        mats = [np.eye(3)] + [r.T for r in rots]
    else:
        rng = np.random.default_rng(seed)
        mats = [np.eye(n)]
        for _ in range(resolution - 1):
            q, r = np.linalg.qr(rng.standard_normal((n, n)))
            mats.append((q * np.sign(np.diag(r))).T)
    frames = []
    for m in mats:
        q, _ = np.linalg.qr(np.asarray(m, dtype=float).T)
        # re-orthonormalise but keep orientation of the requested rows
        q *= np.sign(np.sum(q * np.asarray(m).T, axis=0))
        frames.append(Frame(origin, q.T[:k].copy()))
    return frames
