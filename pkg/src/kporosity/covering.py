"""Executable version of the covering argument behind the dimension bound.

The pipeline, for a working ball B(x, r) of a grid set A in R^2 or R^3:

1. every occupied centre y in the ball gets k orthogonal directions whose
   half-spaces H(y + 2 delta r theta, theta) miss A inside the ball;
2. the complements of those half-spaces (clipped to the cube around the ball)
   form a convex polytope C whose boundary lies within 2 delta r of every y;
3. the boundary is split into planar pieces by bucketing outward normals into
   spherical caps;
4. for k >= 2 each piece is projected to its reference subspace, the
   half-space removal is repeated there with translated half-spaces, and the
   new boundary pieces are lifted back along the piece (k - 1 times);
5. the final (n-k)-dimensional pieces are thickened and covered by balls of
   radius delta r centred on a cubic lattice.

Points the construction cannot place (failed half-space search, or lattice
misses caused by sampling) get fallback balls, so the result is always a
cover; a per-point certificate makes that checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, cKDTree

from .dimension import const_alpha_m, const_c2, const_cprime, const_delta, const_t
from .geometry import Frame, Subspace, frame_grid, is_planar, orthogonal_complement, project, sphere_cover
from .setgen import SparseGrid

TOL = 1e-12


class UnboundedBodyError(ValueError):
    pass


class ConvexBody:
    """Convex body in R^dim that can produce boundary samples with outward normals."""

    dim: int

    def sample_boundary(self, spacing: float) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def boundary_measure(self) -> float:
        raise NotImplementedError

    def sample_count(self, samples: int) -> tuple[np.ndarray, np.ndarray]:
        """Roughly `samples` boundary points spread by boundary measure."""
        if self.dim == 1:
            return self.sample_boundary(1.0)
        spacing = (self.boundary_measure() / max(samples, 1)) ** (1.0 / (self.dim - 1))
        return self.sample_boundary(spacing)


@dataclass(eq=False)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.dim = len(self.center)

    def boundary_measure(self) -> float:
        if self.dim == 2:
            return 2 * math.pi * self.radius
        if self.dim == 3:
            return 4 * math.pi * self.radius ** 2
        return 2.0

    def sample_boundary(self, spacing):
        if self.dim == 1:
            nrm = np.array([[-1.0], [1.0]])
        elif self.dim == 2:
            count = max(8, math.ceil(2 * math.pi * self.radius / spacing))
            a = 2 * math.pi * np.arange(count) / count
            nrm = np.column_stack([np.cos(a), np.sin(a)])
        elif self.dim == 3:
            count = max(12, math.ceil(4 * math.pi * self.radius ** 2 / spacing ** 2))
            i = np.arange(count) + 0.5
            z = 1 - 2 * i / count
            phi = math.pi * (3 - math.sqrt(5)) * i
            rho = np.sqrt(1 - z * z)
            nrm = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
        else:
            raise ValueError("balls are sampled in dimensions 1..3 only")
        return self.center + self.radius * nrm, nrm


@dataclass(eq=False)
class Polytope(ConvexBody):
    """{z : normals @ z <= offsets}, normals of unit length."""

    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.normals, dtype=float))
        b = np.asarray(self.offsets, dtype=float).ravel()
        norms = np.linalg.norm(a, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero half-space normal")
        self.normals, self.offsets = a / norms[:, None], b / norms
        self.dim = a.shape[1]
        self._geometry = None

    @classmethod
    def from_vertices(cls, vertices) -> "Polytope":
        v = np.asarray(vertices, dtype=float)
        if v.shape[1] == 1:
            return cls(np.array([[1.0], [-1.0]]), np.array([v.max(), -v.min()]))
        hull = ConvexHull(v)
        return cls(hull.equations[:, :-1], -hull.equations[:, -1])

    @classmethod
    def box(cls, lower, upper) -> "Polytope":
        lower, upper = np.asarray(lower, float), np.asarray(upper, float)
        n = len(lower)
        eye = np.eye(n)
        return cls(np.vstack([eye, -eye]), np.concatenate([upper, -lower]))

    def contains(self, z, tol=1e-9) -> np.ndarray:
        z = np.atleast_2d(z)
        return np.all(z @ self.normals.T <= self.offsets + tol, axis=1)

    def chebyshev(self) -> tuple[np.ndarray, float]:
        """Centre and radius of the largest inscribed ball."""
        n = self.dim
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_ub = np.hstack([self.normals, np.ones((len(self.normals), 1))])
        res = linprog(c, A_ub=a_ub, b_ub=self.offsets, bounds=[(None, None)] * n + [(0, None)],
                      method="highs")
        if res.status == 3:
            raise UnboundedBodyError("polytope is unbounded")
        if res.status != 0:
            raise ValueError(f"polytope is empty ({res.message})")
        return res.x[:n], float(res.x[-1])

    def is_bounded(self) -> bool:
        for j in range(self.dim):
            for s in (1.0, -1.0):
                c = np.zeros(self.dim)
                c[j] = -s
                res = linprog(c, A_ub=self.normals, b_ub=self.offsets,
                              bounds=[(None, None)] * self.dim, method="highs")
                if res.status == 3:
                    return False
        return True

    def _facets(self):
        if self._geometry is not None:
            return self._geometry
        if not self.is_bounded():
            raise UnboundedBodyError("polytope is unbounded")
        if self.dim == 1:
            pos = self.normals[:, 0] > 0
            hi = np.min(self.offsets[pos] / self.normals[pos, 0])
            lo = np.max(self.offsets[~pos] / self.normals[~pos, 0])
            if hi < lo:
                raise ValueError("empty interval")
            self._geometry = np.array([[lo], [hi]]), None
            return self._geometry
        centre, radius = self.chebyshev()
        if radius <= 1e-12:
            raise ValueError("polytope has empty interior")
        hs = HalfspaceIntersection(np.hstack([self.normals, -self.offsets[:, None]]), centre)
        verts = hs.intersections
        hull = ConvexHull(verts)
        self._geometry = verts, hull
        return self._geometry

    def vertices(self) -> np.ndarray:
        verts, hull = self._facets()
        return verts if hull is None else verts[hull.vertices]

    def boundary_measure(self) -> float:
        verts, hull = self._facets()
        if hull is None:
            return 2.0
        return float(hull.area)

    def sample_boundary(self, spacing: float):
        verts, hull = self._facets()
        if hull is None:
            return verts.copy(), np.array([[-1.0], [1.0]])
        pts, nrm = [], []
        for simplex, eq in zip(hull.simplices, hull.equations):
            corner = verts[simplex]
            normal = eq[:-1]
            if self.dim == 2:
                a, b = corner
                s = max(1, math.ceil(np.linalg.norm(b - a) / spacing))
                w = np.arange(s + 1)[:, None] / s
                p = a + w * (b - a)
            else:
                a, b, c = corner
                longest = max(np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b))
                s = max(1, math.ceil(longest / spacing))
                i, j = np.meshgrid(np.arange(s + 1), np.arange(s + 1), indexing="ij")
                keep = i + j <= s
                i, j = i[keep][:, None] / s, j[keep][:, None] / s
                p = a + i * (b - a) + j * (c - a)
            pts.append(p)
            nrm.append(np.broadcast_to(normal, p.shape))
        return np.concatenate(pts), np.concatenate(nrm)


@dataclass(eq=False)
class PlanarPiece:
    points: np.ndarray
    V: Subspace
    alpha: float
    cap: int = -1
    normals: np.ndarray | None = None

    def check(self) -> bool:
        return is_planar(self.points, self.V, self.alpha)


def bucket_normals(normals: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Cap index (first match) of each unit normal under a radius-alpha/3 sphere cover."""
    dim = normals.shape[1]
    caps = sphere_cover(dim, alpha / 3.0)
    # facets share normals, so bucket the distinct ones in bounded chunks
    uniq, inv = np.unique(normals, axis=0, return_inverse=True)
    labels = np.empty(len(uniq), dtype=np.int64)
    step = max(1, 2_000_000 // len(caps))
    for lo in range(0, len(uniq), step):
        dist = np.linalg.norm(uniq[lo:lo + step, None, :] - caps[None, :, :], axis=2)
        inside = dist <= alpha / 3.0 + 1e-12
        if not np.all(inside.any(axis=1)):
            raise RuntimeError("sphere cover left a normal uncovered")
        labels[lo:lo + step] = np.argmax(inside, axis=1)
    return labels[inv.ravel()], caps


def decompose_boundary(C: ConvexBody, alpha: float, samples: int = 2000,
                       spacing: float | None = None) -> list[PlanarPiece]:
    """Split sampled boundary points of C into (dim-1, alpha)-planar pieces by normal caps."""
    if C.dim not in (1, 2, 3):
        raise ValueError("decomposition runs in dimensions 1..3")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    pts, nrm = C.sample_boundary(spacing) if spacing is not None else C.sample_count(samples)
    return _pieces_from_samples(pts, nrm, alpha)


def _pieces_from_samples(pts, nrm, alpha) -> list[PlanarPiece]:
    labels, caps = bucket_normals(nrm, alpha)
    pieces = []
    for j in np.unique(labels):
        sel = labels == j
        V = orthogonal_complement(Subspace(len(caps[j]), caps[j][None, :]))
        pieces.append(PlanarPiece(pts[sel], V, alpha, int(j), nrm[sel]))
    return pieces


def _working_points(A: SparseGrid, x, r) -> tuple[np.ndarray, np.ndarray]:
    centres = A.centers()
    d = np.linalg.norm(centres - np.asarray(x, float), axis=1)
    idx = np.nonzero(d <= r * (1 + 1e-12))[0]
    return idx, centres[idx]


def _signed_directions(frames: list[Frame]) -> np.ndarray:
    dirs = np.stack([f.directions for f in frames])  # (F, d, n)
    return np.stack([dirs, -dirs], axis=2)  # (F, d, 2, n)


def _usable_table(Y: np.ndarray, signed: np.ndarray, offset: float) -> np.ndarray:
    """ok[y, f, d, s]: no point of Y lies beyond y + offset along direction (f, d, s)."""
    flat = signed.reshape(-1, signed.shape[-1])
    proj = Y @ flat.T
    support = proj.max(axis=0)
    ok = proj + offset >= support - TOL * max(1.0, np.abs(support).max())
    return ok.reshape((len(Y),) + signed.shape[:-1])


def _pick_frames(ok: np.ndarray, k: int):
    """First frame with k usable directions per point; returns (found, frame, dir idx, sign idx)."""
    usable = ok.any(axis=-1)  # (N, F, d)
    good = usable.sum(axis=-1) >= k
    found = good.any(axis=1)
    fid = np.argmax(good, axis=1)
    rows = np.arange(len(ok))
    u = usable[rows, fid]  # (N, d)
    # first k usable directions in frame order
    order = np.argsort(~u, axis=1, kind="stable")[:, :k]
    sign = np.where(ok[rows[:, None], fid[:, None], order, 0], 0, 1)
    return found, fid, order, sign


def find_empty_halfspaces(A: SparseGrid, x, r: float, y, delta: float, k: int,
                          frames: list[Frame]) -> Frame | None:
    """First frame whose k signed directions give half-spaces H(y + 2 delta r theta, theta)
    free of occupied centres inside B(x, r); None when no frame qualifies."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if x.shape != (A.n,) or y.shape != (A.n,):
        raise ValueError("points must live in the grid's dimension")
    if np.linalg.norm(y - x) > r * (1 + 1e-12):
        raise ValueError("y must lie in B(x, r)")
    if any(f.directions.shape[0] < k for f in frames):
        raise ValueError("frames carry fewer than k directions")
    _, Y = _working_points(A, x, r)
    signed = _signed_directions(frames)
    flat = signed.reshape(-1, A.n)
    support = (Y @ flat.T).max(axis=0) if len(Y) else np.full(len(flat), -np.inf)
    ok = (y @ flat.T + 2 * delta * r >= support - TOL).reshape(signed.shape[:-1])[None]
    found, fid, order, sign = _pick_frames(ok, k)
    if not found[0]:
        return None
    f = fid[0]
    dirs = signed[f, order[0], sign[0]]
    return Frame(y, dirs)


def _cap_subspace(cap: np.ndarray) -> Subspace:
    return orthogonal_complement(Subspace(len(cap), cap[None, :]))


@dataclass
class CoverParams:
    delta: float | None = None
    frame_resolution: int | None = None
    spacing_factor: float = 0.5
    seed: int = 0


@dataclass(eq=False)
class CoverResult:
    centers: np.ndarray
    radii: np.ndarray
    scale: float
    proof_path_count: int
    fallback_count: int
    certificate: np.ndarray
    points: np.ndarray = field(repr=False)
    report: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.radii)

    def verify(self) -> bool:
        """Every working point lies in the ball its certificate names."""
        if len(self.points) == 0:
            return True
        if np.any(self.certificate < 0):
            return False
        c = self.centers[self.certificate]
        d = np.linalg.norm(self.points - c, axis=1)
        return bool(np.all(d <= self.radii[self.certificate] * (1 + 1e-9)))

    def to_json(self) -> dict:
        return {
            "balls": [{"center": [float(v) for v in c], "radius": float(rad)}
                      for c, rad in zip(self.centers, self.radii)],
            "proof_path_count": int(self.proof_path_count),
            "fallback_count": int(self.fallback_count),
            "scale": float(self.scale),
            "report": self.report,
        }


@dataclass(eq=False)
class _Piece:
    samples: np.ndarray  # boundary samples in R^n
    V: Subspace  # reference subspace in R^n
    members: np.ndarray  # indices into the working points


def _assign(points: np.ndarray, pieces: list[_Piece], candidates: np.ndarray) -> None:
    """Give each candidate point to the piece owning its nearest sample."""
    owner = np.concatenate([np.full(len(p.samples), j) for j, p in enumerate(pieces)])
    tree = cKDTree(np.concatenate([p.samples for p in pieces]))
    _, near = tree.query(points[candidates])
    who = owner[near]
    for j, p in enumerate(pieces):
        p.members = candidates[who == j]


def _polytope_pieces(body: Polytope, spacing: float, alpha: float):
    pts, nrm = body.sample_boundary(spacing)
    labels, caps = bucket_normals(nrm, alpha)
    return [(pts[labels == j], caps[j]) for j in np.unique(labels)]


def _grouped_halfspaces(ids: np.ndarray, normals: np.ndarray, offsets: np.ndarray):
    """Keep the tightest offset per direction id."""
    uniq, inv = np.unique(ids, return_inverse=True)
    best = np.full(len(uniq), np.inf)
    np.minimum.at(best, inv, offsets)
    first = np.zeros(len(uniq), dtype=np.int64)
    first[inv[::-1]] = np.arange(len(ids))[::-1]
    return normals[first], best


def _lattice_cover(x, g, pieces_samples, reach, r, delta_r):
    """Lattice cubes (side g, anchored at x) with centre within `reach` of a sample and
    within r + delta_r of x."""
    n = len(x)
    span = int(math.ceil((r + delta_r) / g))
    rng = np.arange(-span - 1, span + 1)
    cand = np.stack(np.meshgrid(*([rng] * n), indexing="ij"), axis=-1).reshape(-1, n)
    centre = x + (cand + 0.5) * g
    inside = np.linalg.norm(centre - x, axis=1) <= r + delta_r
    cand, centre = cand[inside], centre[inside]
    dist, _ = cKDTree(np.concatenate(pieces_samples)).query(centre, distance_upper_bound=reach * (1 + 1e-12))
    return cand[np.isfinite(dist)]


def covering_construction(A: SparseGrid, x, r: float, rho: float, k: int, alpha: float,
                          params: CoverParams = CoverParams()) -> CoverResult:
    n = A.n
    if n not in (2, 3):
        raise ValueError("the covering construction runs for n in {2, 3}")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    x = np.asarray(x, dtype=float)
    delta = params.delta if params.delta is not None else const_delta(rho)
    t = const_t(rho)
    if k >= 2 and not alpha < 1.0 / math.sqrt(k):
        raise ValueError("need alpha < 1/sqrt(k)")
    alphas = {m: const_alpha_m(n, k, m, alpha) for m in range(n - k, n)}
    if alphas[n - 1] >= 1.0 or (k >= 2 and alphas[n - k] >= 1.0):
        raise ValueError("alpha too large for the planar decomposition")
    c1 = const_cprime(alpha, 1.0 / math.sqrt(k)) if k >= 2 else None
    c2 = const_c2(alpha, c1) if k >= 2 else 1.0
    dr = delta * r
    spacing = params.spacing_factor * dr
    res = params.frame_resolution or (16 if n == 2 else 4)
    frames = frame_grid(n, n, res, params.seed)
    signed = _signed_directions(frames)

    idx, Y = _working_points(A, x, r)
    report = {"n": n, "k": k, "rho": rho, "delta": delta, "t": t, "r": r,
              "r0_lower": 2 * t * r, "alpha": alpha, "c1": c1, "c2": c2,
              "working_points": int(len(Y)), "levels": []}

    ok = _usable_table(Y, signed, 2 * dr) if len(Y) else np.zeros((0,) + signed.shape[:-1], bool)
    found, fid, order, sign = _pick_frames(ok, k) if len(Y) else (np.zeros(0, bool),) * 4
    report["halfspace_search_failures"] = int((~found).sum())
    proof = np.nonzero(found)[0]

    # direction id, unit vector for each (point, slot)
    nd = signed.shape[1]
    theta_ids = np.zeros((len(Y), k), dtype=np.int64)
    thetas = np.zeros((len(Y), k, n))
    if len(proof):
        f, o, s = fid[proof][:, None], order[proof], sign[proof]
        theta_ids[proof] = (f * nd + o) * 2 + s
        thetas[proof] = signed[f, o, s]

    final_pieces: list[_Piece] = []
    if len(proof):
        # top level: half-space complements in R^n clipped to the cube around B(x, r)
        normals, offsets = _grouped_halfspaces(
            theta_ids[proof, 0], thetas[proof, 0],
            np.einsum("ij,ij->i", Y[proof], thetas[proof, 0]) + 2 * dr)
        box = Polytope.box(x - r, x + r)
        body = Polytope(np.vstack([normals, box.normals]), np.concatenate([offsets, box.offsets]))
        raw = _polytope_pieces(body, spacing, alphas[n - 1])
        pieces = [_Piece(p, _cap_subspace(cap), np.zeros(0, np.int64)) for p, cap in raw]
        _assign(Y, pieces, proof)
        report["levels"].append({"m": n - 1, "pieces": len(pieces),
                                 "nonempty": sum(len(p.members) > 0 for p in pieces)})
        beta = 2 * dr
        for m in range(n - 1, n - k, -1):
            children = []
            for P in pieces:
                if len(P.members) == 0:
                    continue
                children.extend(_refine_piece(P, Y, thetas, theta_ids, x, r, beta, c1, alphas[m], spacing))
            pieces = children
            beta *= c2
            report["levels"].append({"m": m - 1, "pieces": len(pieces),
                                     "nonempty": sum(len(p.members) > 0 for p in pieces)})
        final_pieces = [p for p in pieces if len(p.members)]
        report["final_beta"] = beta
    else:
        beta = 2 * dr * c2 ** (k - 1)
        report["final_beta"] = beta

    g = 2 * dr / math.sqrt(n)
    cubes = _lattice_cover(x, g, [p.samples for p in final_pieces], beta + dr, r, dr) if final_pieces \
        else np.zeros((0, n), dtype=np.int64)
    centers = x + (cubes + 0.5) * g
    radii = np.full(len(cubes), dr)
    proof_count = len(cubes)

    # certificate: lattice cube holding each point, else a fallback ball
    cert = np.full(len(Y), -1, dtype=np.int64)
    if len(cubes) and len(Y):
        lookup = {tuple(c): j for j, c in enumerate(cubes.tolist())}
        own = np.floor((Y - x) / g).astype(np.int64)
        for i, c in enumerate(own.tolist()):
            cert[i] = lookup.get(tuple(c), -1)
    uncovered = np.nonzero(cert < 0)[0]
    report["uncovered_by_proof_path"] = int(np.isin(uncovered, proof).sum())
    fb_centres = []
    for i in uncovered:
        if cert[i] >= 0:
            continue
        j = proof_count + len(fb_centres)
        fb_centres.append(Y[i])
        d = np.linalg.norm(Y[uncovered] - Y[i], axis=1)
        hit = uncovered[(d <= dr) & (cert[uncovered] < 0)]
        cert[hit] = j
    if fb_centres:
        centers = np.vstack([centers, np.array(fb_centres)])
        radii = np.concatenate([radii, np.full(len(fb_centres), dr)])
    return CoverResult(centers, radii, dr, proof_count, len(fb_centres), cert, Y, report)


def _refine_piece(P: _Piece, Y, thetas, theta_ids, x, r, beta, c1, alpha_m, spacing) -> list[_Piece]:
    """One inductive step: project a V-planar piece, cut with translated half-spaces, lift back."""
    V = P.V
    m = V.dim
    mem = P.members
    proj = np.einsum("ikn,mn->ikm", thetas[mem], V.basis)  # theta components in V coords
    lens = np.linalg.norm(proj, axis=2)
    slot = np.argmax(lens, axis=1)
    rows = np.arange(len(mem))
    u = proj[rows, slot] / lens[rows, slot][:, None]
    ids = theta_ids[mem, slot]
    offs = np.einsum("im,im->i", V.coords(Y[mem]), u) + c1 * beta
    normals, offsets = _grouped_halfspaces(ids, u, offs)
    centre = V.coords(x)
    box = Polytope.box(centre - r - beta, centre + r + beta)
    body = Polytope(np.vstack([normals, box.normals]), np.concatenate([offsets, box.offsets]))
    if m == 1:
        verts, _ = body._facets()
        raw = [(verts[0:1], np.array([-1.0])), (verts[1:2], np.array([1.0]))]
    else:
        raw = _polytope_pieces(body, spacing, alpha_m)
    # lift boundary samples of the projected body back onto the piece
    base = V.coords(P.samples)
    height = P.samples - project(V, P.samples)
    tree = cKDTree(base)
    children = []
    for pts, cap in raw:
        _, near = tree.query(pts)
        lifted = V.embed(pts) + height[near]
        W_local = orthogonal_complement(Subspace(m, np.asarray(cap, float)[None, :]))
        W = Subspace(Y.shape[1], W_local.basis @ V.basis) if W_local.dim else Subspace.zero(Y.shape[1])
        children.append(_Piece(lifted, W, np.zeros(0, np.int64)))
    _assign(Y, children, mem)
    return children


def count_exponent(deltas, counts) -> float:
    """Least-squares slope of log(count) against log(1/delta)."""
    xs = np.log(1.0 / np.asarray(deltas, float))
    ys = np.log(np.asarray(counts, float))
    return float(np.polyfit(xs, ys, 1)[0])


def check_translation_lemma(P, V: Subspace, alpha: float, beta: float, delta: float, c: float,
                            x, theta, trials: int = 1000, seed: int = 0) -> bool:
    """Monte-Carlo check of H(x + c' beta theta', theta') n P(beta) inside H(x + delta theta, theta)."""
    P = np.atleast_2d(np.asarray(P, float))
    x, theta = np.asarray(x, float), np.asarray(theta, float)
    n = V.ambient_dim
    if P.shape[1] != n or x.shape != (n,) or theta.shape != (n,):
        raise ValueError("dimension mismatch")
    if not 0.0 < delta <= beta:
        raise ValueError("need 0 < delta <= beta")
    if abs(np.linalg.norm(theta) - 1.0) > 1e-9:
        raise ValueError("theta must be a unit vector")
    ptheta = project(V, theta)
    plen = np.linalg.norm(ptheta)
    if plen < c:
        raise ValueError("|proj_V theta| < c")
    cp = const_cprime(alpha, c)
    if np.min(np.linalg.norm(P - x, axis=1)) > beta * (1 + 1e-12):
        raise ValueError("x is not within beta of P")
    if not is_planar(P, V, alpha):
        raise ValueError("P is not (V, alpha)-planar")
    theta_p = ptheta / plen
    rng = np.random.default_rng(seed)
    base = P[rng.integers(len(P), size=trials)]
    g = rng.standard_normal((trials, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = beta * rng.random(trials) ** (1.0 / n)
    pts = base + rad[:, None] * g
    in_tilted = (pts - (x + cp * beta * theta_p)) @ theta_p > 0
    in_target = (pts - (x + delta * theta)) @ theta > 0
    return bool(np.all(in_target[in_tilted]))


def write_svg(result: CoverResult, A: SparseGrid, x, r: float, path) -> None:
    """2-d scene: occupied cells, working ball, and the cover balls."""
    if A.n != 2:
        raise ValueError("SVG dumps are 2-d only")
    size = 800
    lo = np.asarray(x, float) - 1.2 * r
    scale = size / (2.4 * r)

    def tx(p):
        q = (np.asarray(p) - lo) * scale
        return q[0], size - q[1]

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             '<rect width="100%" height="100%" fill="white"/>']
    cw = scale / A.R
    for c in result.points:
        px, py = tx(c)
        parts.append(f'<rect x="{px - cw / 2:.2f}" y="{py - cw / 2:.2f}" width="{cw:.2f}" '
                     f'height="{cw:.2f}" fill="black"/>')
    cx, cy = tx(x)
    parts.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r * scale:.2f}" fill="none" stroke="gray"/>')
    for j, (c, rad) in enumerate(zip(result.centers, result.radii)):
        px, py = tx(c)
        colour = "steelblue" if j < result.proof_path_count else "crimson"
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{rad * scale:.2f}" fill="none" '
                     f'stroke="{colour}" stroke-width="0.6"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
