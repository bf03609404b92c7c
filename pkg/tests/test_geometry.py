import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from kporosity.geometry import (Cone, Frame, HalfSpace, Subspace, cone_contains, frame_grid, is_planar,
                                orthogonal_complement, planar_graph_check, project, sphere_cover,
                                spherical_covering_radius)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def random_subspace(seed, n, m):
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    return Subspace(n, q[:, :m].T.copy())


def test_project_examples():
    e1 = Subspace.span([1.0, 0.0])
    np.testing.assert_allclose(project(e1, [3.0, 4.0]), [3.0, 0.0])
    np.testing.assert_allclose(project(Subspace.full(3), [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])
    diag = Subspace.span([1.0, 1.0])
    np.testing.assert_allclose(project(diag, [1.0, 0.0]), [0.5, 0.5])


def test_subspace_rejects_non_orthonormal_basis():
    with pytest.raises(ValueError):
        Subspace(2, np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_halfspace_is_strict():
    h = HalfSpace(np.zeros(2), np.array([0.0, 1.0]))
    assert not h.contains([5.0, 0.0])
    assert h.contains([5.0, 1e-9])


def test_cone_examples():
    c = Cone(np.zeros(2), Subspace.span([1.0, 0.0]), 0.5)
    assert cone_contains(c, [1.0, 0.0])
    assert not cone_contains(c, [0.0, 1.0])
    assert cone_contains(c, [2.0, 1.0])


def test_frame_orthogonality_checked():
    with pytest.raises(ValueError):
        Frame(np.zeros(2), np.array([[1.0, 0.0], [1.0, 1.0]]) / [[1.0], [math.sqrt(2)]])


def test_is_planar_examples():
    e1 = Subspace.span([1.0, 0.0])
    assert is_planar([[0.0, 1.0], [3.0, 1.0]], e1, 0.01)
    assert not is_planar([[0.0, 0.0], [1.0, 1.0]], e1, 0.5)
    assert is_planar([[0.3, 0.7]], e1, 0.1)


def test_planar_graph_examples():
    e1 = Subspace.span([1.0, 0.0])
    t = np.linspace(0, 1, 11)
    assert planar_graph_check(np.column_stack([t, 0 * t]), e1, 0.1)
    assert planar_graph_check(np.column_stack([t, t]), e1, 0.8)
    assert not planar_graph_check([[0.5, 0.0], [0.5, 1.0]], e1, 0.9)


def test_orthogonal_complement_examples():
    W = orthogonal_complement(Subspace.span([1.0, 0.0, 0.0]))
    assert W.dim == 2
    np.testing.assert_allclose(np.abs(W.basis[:, 0]), 0.0, atol=1e-12)
    assert orthogonal_complement(Subspace.full(3)).dim == 0
    W = orthogonal_complement(Subspace.span([1.0, 1.0]))
    np.testing.assert_allclose(np.abs(W.basis[0]), [2 ** -0.5, 2 ** -0.5])
    assert W.basis[0] @ [1.0, 1.0] == pytest.approx(0.0, abs=1e-12)


def test_sphere_cover_sizes():
    # ceil(2 pi / (2 asin(r/2))) centres on the circle
    for radius in (1.0, 0.1, 0.37):
        expect = math.ceil(2 * math.pi / (2 * math.asin(radius / 2)))
        assert len(sphere_cover(2, radius)) == expect
    assert len(sphere_cover(2, 1.0)) == 6
    assert len(sphere_cover(2, 0.1)) == 63


@pytest.mark.parametrize("n,radius", [(2, 0.1), (3, 0.3), (3, 0.1), (4, 0.5)])
def test_sphere_cover_covers_random_directions(n, radius):
    centres = sphere_cover(n, radius)
    g = np.random.default_rng(7).standard_normal((10_000, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    worst = max(np.min(np.linalg.norm(chunk[:, None] - centres[None], axis=2), axis=1).max()
                for chunk in np.array_split(g, 20))
    assert worst <= radius


def test_s2_cover_radius_is_exact():
    centres = sphere_cover(3, 0.2)
    assert spherical_covering_radius(centres) <= 0.2


def test_frame_grid_examples():
    (f,) = frame_grid(2, 2, 1)
    np.testing.assert_allclose(f.directions, np.eye(2))
    angles = [math.atan2(*f.directions[0][::-1]) for f in frame_grid(2, 1, 4)]
    np.testing.assert_allclose(angles, [0, math.pi / 8, math.pi / 4, 3 * math.pi / 8], atol=1e-12)


@pytest.mark.parametrize("n,k,res", [(2, 2, 16), (3, 2, 4), (3, 3, 5), (5, 3, 2)])
def test_frame_grid_is_orthonormal(n, k, res):
    for f in frame_grid(n, k, res, seed=3):
        np.testing.assert_allclose(f.directions @ f.directions.T, np.eye(k), atol=1e-10)


@given(arrays(float, 3, elements=finite), st.integers(0, 10_000), st.integers(0, 3))
def test_project_idempotent_and_pythagoras(y, seed, m):
    V = random_subspace(seed, 3, m) if m else Subspace.zero(3)
    p = project(V, y)
    np.testing.assert_allclose(project(V, p), p, atol=1e-10)
    perp = project(orthogonal_complement(V), y)
    assert abs(y @ y - p @ p - perp @ perp) <= 1e-9 * max(1.0, y @ y)


def graph_points(seed, n, m, alpha, count=15, shrink=1.0):
    rng = np.random.default_rng(seed)
    V = random_subspace(seed, n, m)
    W = orthogonal_complement(V)
    base = rng.uniform(-1, 1, (count, m))
    lip = shrink * alpha / math.sqrt(1 - alpha * alpha)
    w = rng.standard_normal(n - m)
    w /= np.linalg.norm(w)
    h = lip * np.abs(base[:, 0])[:, None] * w
    return base @ V.basis + h @ W.basis, V


@given(st.integers(0, 10_000), st.sampled_from([(2, 1), (3, 1), (3, 2)]), st.floats(0.05, 0.9),
       st.floats(0.0, 0.99))
def test_lipschitz_graphs_are_planar(seed, nm, alpha, shrink):
    pts, V = graph_points(seed, *nm, alpha, shrink=shrink)
    assert is_planar(pts, V, alpha)
    assert planar_graph_check(pts, V, alpha)


@given(st.integers(0, 10_000), st.floats(0.05, 0.9), st.floats(0.0, 0.5))
def test_is_planar_monotone_in_alpha(seed, alpha, bump):
    pts, V = graph_points(seed, 3, 2, alpha, shrink=1.3)
    if is_planar(pts, V, alpha):
        assert is_planar(pts, V, min(alpha + bump, 0.999))


@given(st.integers(0, 10_000), st.floats(0.05, 0.9), st.floats(0.5, 2.0))
def test_planar_implies_graph(seed, alpha, shrink):
    pts, V = graph_points(seed, 3, 2, alpha, shrink=shrink)
    if is_planar(pts, V, alpha):
        assert planar_graph_check(pts, V, alpha)
