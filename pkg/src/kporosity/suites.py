"""Named self-check suites behind ``kporosity verify``.

Each suite is deterministic for a given (trials, seed) and returns a
SuiteResult; none of them records wall-clock times, so the JSON summary is
reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dimension as dm
from .covering import Ball, CoverParams, Polytope, check_translation_lemma, covering_construction, decompose_boundary
from .geometry import Subspace, frame_grid, is_planar, orthogonal_complement, planar_graph_check, sphere_cover, spherical_covering_radius
from .porosity import error_bound, oracle_step_slack, por_k_at, por_k_oracle
from .setgen import SparseGrid, brute_force_distances, distance_transform, gen_full, gen_kplane, gen_singleton


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks,
                "failures": self.failures[:20], "failure_count": len(self.failures)}


def suite_constants(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("constants")
    res.expect(dm.const_t(3 / 8) == 2.0, "t(3/8) == 2")
    res.expect(abs(dm.const_t(math.sqrt(2) - 1) - 1 / (math.sqrt(2) - 1)) < 1e-12, "t at the lower end")
    res.expect(dm.const_t(0.49999) > 223, "t blows up near 1/2")
    res.expect(abs(dm.const_delta(math.sqrt(2) - 1) - math.sqrt(2)) < 1e-12, "delta at the lower end")
    res.expect(abs(dm.const_delta(0.45) - 0.72683) < 1e-5, "delta(0.45)")
    res.expect(abs(dm.const_delta(0.49) - 0.28887) < 1e-5, "delta(0.49)")
    res.expect(dm.const_delta(0.4999) < 0.06, "delta vanishes near 1/2")
    lo, hi = math.sqrt(2) - 1 + 1e-6, 0.5 - 1e-6
    rng = np.random.default_rng(seed)
    for rho in rng.uniform(lo, hi, trials or 1000):
        res.expect(dm.delta_inequality_holds(float(rho)), f"0 < delta < 4 sqrt(1-2rho) at rho={rho!r}")
    c = 1 / math.sqrt(2)
    res.expect(abs(dm.const_cprime(1e-9, c) - (4 + math.sqrt(2))) < 1e-6, "cprime limit 4 + sqrt 2")
    res.expect(dm.const_cprime(0.1, c) > 4 + math.sqrt(2), "cprime grows with alpha")
    res.expect(abs(dm.const_alpha_m(3, 2, 2, 0.2) - 0.2) < 1e-15, "alpha_m exponent 0")
    res.expect(abs(dm.const_alpha_m(2, 1, 1, 0.2) - 0.2 * math.sqrt(2)) < 1e-15, "alpha_m exponent 1/2")
    res.expect(dm.const_c2(0.0, 1.0) == 3.0, "c2(0, 1) == 3")
    res.expect(abs(dm.const_c2(0.1, 5.41421) - 7.446527) < 1e-4, "c2(0.1, 5.41421)")
    res.expect(abs(dm.bound_theorem(2, 1, 0.45, 1.0) - (1 + 1 / math.log(10))) < 1e-12, "bound at rho=0.45")
    return res


def suite_log_condition(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("log-condition")
    threshold = 0.5 * (1 - 4.0 ** -6)
    rng = np.random.default_rng(seed)
    for rho in rng.uniform(math.sqrt(2) - 1 + 1e-9, 0.5 - 1e-12, trials or 1000):
        expect = rho > threshold
        res.expect(dm.log_condition_holds(float(rho)) == expect, f"log condition at rho={rho!r}")
    for rho in (threshold + 1e-9, 0.49999, 0.4999999):
        res.expect(dm.log_condition_holds(rho), f"log condition holds at rho={rho}")
    return res


def random_translation_instance(rng: np.random.Generator, points: int = 24):
    """A random instance meeting every precondition of the tilted half-space translation."""
    n = int(rng.integers(2, 4))
    m = int(rng.integers(1, n))
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V = Subspace(n, q[:, :m].T.copy())
    W = q[:, m:].T
    c = float(rng.uniform(0.2, 0.95))
    alpha = float(rng.uniform(0.01, 0.98) * c)
    lip = alpha / math.sqrt(1 - alpha * alpha)
    # theta with |proj_V theta| in [c, 1]
    u = rng.standard_normal(m)
    u /= np.linalg.norm(u)
    w = rng.standard_normal(n - m)
    w /= np.linalg.norm(w)
    cos = float(rng.uniform(c, 1.0))
    theta = cos * (u @ V.basis) + math.sqrt(max(0.0, 1 - cos * cos)) * (w @ W)
    theta /= np.linalg.norm(theta)
    # Lipschitz graph over V: a cone term plus a sinusoid, each with half the slope budget
    base = rng.uniform(-1, 1, (points, m))
    apex = rng.uniform(-1, 1, m)
    e = rng.standard_normal(m)
    e /= np.linalg.norm(e)
    omega = float(rng.uniform(0.5, 6.0))
    w0, w1 = rng.standard_normal(n - m), rng.standard_normal(n - m)
    w0, w1 = w0 / np.linalg.norm(w0), w1 / np.linalg.norm(w1)
    h = (0.5 * lip * np.linalg.norm(base - apex, axis=1))[:, None] * w0 \
        + (0.5 * lip * np.sin(omega * base @ e) / omega)[:, None] * w1
    P = base @ V.basis + h @ W
    beta = float(rng.uniform(0.01, 1.0))
    delta = float(rng.uniform(0.001, 1.0) * beta)
    g = rng.standard_normal(n)
    x = P[rng.integers(points)] + beta * rng.random() * g / np.linalg.norm(g)
    return dict(P=P, V=V, alpha=alpha, beta=beta, delta=delta, c=c, x=x, theta=theta)


def suite_translation_lemma(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("translation-lemma")
    rng = np.random.default_rng(seed)
    for t in range(trials or 10_000):
        inst = random_translation_instance(rng)
        ok = check_translation_lemma(trials=32, seed=seed + t, **inst)
        res.expect(ok, f"instance {t}")
    return res


def _regular_polygon(sides: int) -> Polytope:
    a = 2 * math.pi * np.arange(sides) / sides
    return Polytope.from_vertices(np.column_stack([np.cos(a), np.sin(a)]))


def decomposition_cases(seed: int = 0, random_count: int = 20):
    """(label, body, alpha) triples: square, hexagon, disk and random 2-d/3-d polytopes."""
    yield "square", Polytope.box([0, 0], [1, 1]), 0.5
    yield "hexagon", _regular_polygon(6), 0.2
    yield "disk", Ball(np.zeros(2), 1.0), 0.3
    rng = np.random.default_rng(seed)
    for j in range(random_count):
        n = 2 + j % 2
        pts = rng.standard_normal((int(rng.integers(n + 2, 16)), n))
        yield f"random-{n}d-{j}", Polytope.from_vertices(pts), float(rng.uniform(0.15, 0.6))


def suite_decomposition(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("decomposition")
    for label, body, alpha in decomposition_cases(seed, trials or 20):
        pieces = decompose_boundary(body, alpha, samples=600 if body.dim == 2 else 1500)
        caps = len(sphere_cover(body.dim, alpha / 3))
        res.expect(len(pieces) <= caps, f"{label}: piece count")
        for p in pieces:
            res.expect(p.check(), f"{label}: piece {p.cap} planar")
    return res


def suite_cover_certificates(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("cover-certificates")
    line = gen_kplane(2, 1, 128)
    x = np.array([64.5, 63.5]) / 128
    for d in (1 / 8, 1 / 16, 1 / 32):
        out = covering_construction(line, x, 0.25, 0.45, 1, 0.3, CoverParams(delta=d))
        res.expect(out.verify(), f"line delta={d}")
    full = gen_full(2, 32)
    out = covering_construction(full, np.array([16.5, 16.5]) / 32, 0.25, 0.45, 1, 0.3, CoverParams(delta=1 / 16))
    res.expect(out.verify() and out.fallback_count > 0, "full grid falls back")
    rng = np.random.default_rng(seed)
    for t in range(trials or 4):
        n = 2 + t % 2
        R = 16
        cells = np.unique(rng.integers(0, R, (int(rng.integers(5, 60)), n)), axis=0)
        A = SparseGrid(n, R, cells)
        x = A.centers()[int(rng.integers(len(A)))]
        k = int(rng.integers(1, n + 1))
        out = covering_construction(A, x, 0.3, 0.45, k, 0.2, CoverParams(delta=float(rng.uniform(0.1, 0.5))))
        res.expect(out.verify(), f"random grid {t}")
    return res


def suite_distance_transform(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("distance-transform")
    rng = np.random.default_rng(seed)
    for t in range(trials or 20):
        n = 2 + t % 2
        R = int(rng.integers(4, 20 if n == 2 else 9))
        cells = rng.integers(0, R, (int(rng.integers(1, 12)), n))
        A = SparseGrid(n, R, cells)
        D = distance_transform(A)
        res.expect(np.array_equal(D.values, brute_force_distances(A)), f"grid {t}")
    return res


def suite_geometry(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("geometry")
    res.expect(len(sphere_cover(2, 0.1)) == 63, "63 caps of radius 0.1 on the circle")
    for radius in (0.5, 0.2, 0.1):
        res.expect(spherical_covering_radius(sphere_cover(3, radius)) <= radius, f"S^2 cover radius {radius}")
    for n in (2, 3, 4):
        for f in frame_grid(n, n, 3, seed):
            res.expect(np.allclose(f.directions @ f.directions.T, np.eye(n), atol=1e-10), f"frame in R^{n}")
    rng = np.random.default_rng(seed)
    for t in range(trials or 50):
        n = 3
        V = Subspace(n, np.linalg.qr(rng.standard_normal((n, n)))[0][:, :2].T.copy())
        alpha = float(rng.uniform(0.05, 0.9))
        base = rng.uniform(-1, 1, (20, 2))
        slope = alpha / math.sqrt(1 - alpha ** 2) * float(rng.uniform(0.5, 1.5))
        h = slope * base[:, 0:1]
        pts = base @ V.basis + h * orthogonal_complement(V).basis[0]
        res.expect(is_planar(pts, V, alpha) == planar_graph_check(pts, V, alpha), f"planar forms agree {t}")
    return res


def suite_porosity_oracle(trials: int | None = None, seed: int = 0) -> SuiteResult:
    res = SuiteResult("porosity-oracle")
    rng = np.random.default_rng(seed)
    frames = frame_grid(2, 2, 180)
    cases = [(gen_singleton(2, 16, (8, 8)), 1, 0.5), (gen_kplane(2, 1, 16), 1, 0.45)]
    for A, k, at_least in cases:
        x = A.centers()[len(A) // 2]
        D = distance_transform(A, pad=16)
        res.expect(por_k_at(A, D, x, 0.5, k, frames).rho_hat >= at_least - 0.06, "calibration set")
    for t in range(trials or 5):
        R = int(rng.integers(12, 33))
        cells = rng.integers(0, R, (int(rng.integers(3, 40)), 2))
        A = SparseGrid(2, R, cells)
        D = distance_transform(A, pad=R)
        x = A.centers()[int(rng.integers(len(A)))]
        r = float(rng.uniform(0.25, 0.5))
        for k in (1, 2):
            est = por_k_at(A, D, x, r, k, frames)
            gap = abs(est.rho_hat - por_k_oracle(A, x, r, k))
            res.expect(gap <= est.error_bound + oracle_step_slack(R, r), f"grid {t} k={k}")
    return res


SUITES = {
    "constants": suite_constants,
    "log-condition": suite_log_condition,
    "translation-lemma": suite_translation_lemma,
    "decomposition": suite_decomposition,
    "cover-certificates": suite_cover_certificates,
    "distance-transform": suite_distance_transform,
    "geometry": suite_geometry,
    "porosity-oracle": suite_porosity_oracle,
}


def run_suites(names=None, trials: int | None = None, seed: int = 0) -> list[SuiteResult]:
    names = list(names) if names else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[n](trials, seed) for n in names]
