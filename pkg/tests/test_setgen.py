import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kporosity.setgen import (CantorSpec, SparseGrid, brute_force_distances, dilate, distance_transform,
                              gen_cantor, gen_full, gen_ifs, gen_kplane, gen_product, gen_singleton)


def cells_1d(grid):
    return grid.occupied[:, 0].tolist()


def test_cantor_examples():
    assert cells_1d(gen_cantor(CantorSpec(1 / 3, 1), 3)) == [0, 2]
    assert cells_1d(gen_cantor(CantorSpec(1 / 3, 2), 9)) == [0, 2, 6, 8]
    assert cells_1d(gen_cantor(CantorSpec(0.25, 1), 4)) == [0, 3]
    # lambda given to six digits still lands on whole cells
    assert len(gen_cantor(CantorSpec(0.333333, 4), 81)) == 16


def test_cantor_spec_validates():
    with pytest.raises(ValueError):
        CantorSpec(0.5, 2)
    with pytest.raises(ValueError):
        CantorSpec(0.2, -1)
    assert CantorSpec(0.25, 3).dimension == pytest.approx(0.5)


@given(st.floats(0.05, 0.45), st.integers(0, 6), st.integers(8, 400))
def test_cantor_cell_count_bounds(lam, depth, R):
    # interval-by-interval enumeration as the oracle
    lows = np.array([0.0])
    for _ in range(depth):
        lows = np.concatenate([lam * lows, lam * lows + 1 - lam])
    side = lam ** depth
    oracle = set()
    for lo in lows:
        oracle.update(range(max(0, math.floor(lo * R - 1e-3)), min(R - 1, math.ceil((lo + side) * R + 1e-3)) + 1))
    got = set(cells_1d(gen_cantor(CantorSpec(lam, depth), R)))
    assert got <= oracle
    assert len(got) <= 2 ** depth * (side * R + 2)
    # once the finest gaps span two cells, no two intervals share a cell
    if depth == 0 or lam ** (depth - 1) * (1 - 2 * lam) * R >= 2:
        assert len(got) >= 2 ** depth
    # every construction interval is represented
    for lo in lows:
        mid = min(R - 1, int((lo + side / 2) * R))
        assert mid in got


def test_product_examples():
    c = gen_cantor(CantorSpec(1 / 3, 1), 3)
    p = gen_product([c, gen_full(1, 3)])
    assert len(p) == 6
    assert sorted(set(p.occupied[:, 0].tolist())) == [0, 2]
    s = gen_product([gen_singleton(1, 5, [1]), gen_singleton(1, 5, [3])])
    assert s.occupied.tolist() == [[1, 3]]


@given(st.lists(st.lists(st.integers(0, 9), min_size=1, max_size=6), min_size=1, max_size=3))
def test_product_counts_and_permutation(factor_cells):
    factors = [SparseGrid(1, 10, np.array(c)) for c in factor_cells]
    p = gen_product(factors)
    assert len(p) == math.prod(len(f) for f in factors)
    if len(factors) > 1:
        q = gen_product(factors[::-1])
        swapped = np.unique(p.occupied[:, ::-1], axis=0)
        np.testing.assert_array_equal(swapped, q.occupied)


def test_kplane_examples():
    g = gen_kplane(2, 1, 8)
    assert g.occupied.tolist() == sorted([[i, 3] for i in range(8)] + [[i, 4] for i in range(8)])
    assert gen_kplane(1, 0, 9).occupied.tolist() == [[4]]
    assert len(gen_kplane(2, 1, 9)) == 9
    assert np.array_equal(gen_kplane(2, 2, 5).occupied, gen_full(2, 5).occupied)


def test_ifs_examples():
    lam = 1 / 3
    maps = [(lam, [0.0]), (lam, [1 - lam])]
    np.testing.assert_array_equal(gen_ifs(maps, 1, 3, 27).occupied, gen_cantor(CantorSpec(lam, 3), 27).occupied)
    corners = [(0.25, [0.0, 0.0]), (0.25, [0.75, 0.0]), (0.25, [0.0, 0.75]), (0.25, [0.75, 0.75])]
    assert len(gen_ifs(corners, 2, 1, 4)) == 4
    assert len(gen_ifs([], 2, 3, 8)) == 0


def test_sparse_grid_invariants():
    g = SparseGrid(2, 4, np.array([[3, 1], [0, 2], [3, 1]]))
    assert g.occupied.tolist() == [[0, 2], [3, 1]]
    with pytest.raises(ValueError):
        SparseGrid(2, 4, np.array([[4, 0]]))
    assert g.contains_cells([[3, 1], [1, 1], [-1, 0]]).tolist() == [True, False, False]


def test_dilate_examples():
    s = gen_singleton(2, 8, (3, 3))
    assert np.array_equal(dilate(s, 0).occupied, s.occupied)
    assert cells_1d(dilate(SparseGrid(1, 8, np.array([4])), 2 / 8)) == [2, 3, 4, 5, 6]


@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), min_size=1, max_size=8),
       st.floats(0, 0.3), st.floats(0, 0.2))
def test_dilate_monotone(cells, r1, r2):
    A = SparseGrid(2, 12, np.array(cells))
    B = SparseGrid(2, 12, np.vstack([A.occupied, [[0, 0]]]))
    assert A.issubset(dilate(A, r1))
    assert dilate(A, r1).issubset(dilate(B, r1))
    assert dilate(A, r1).issubset(dilate(A, r1 + r2))
    slack = math.sqrt(2) / 12
    assert dilate(A, r1 + r2).issubset(dilate(dilate(A, r1), r2 + slack))


def test_distance_examples():
    D = distance_transform(SparseGrid(1, 4, np.array([0])))
    np.testing.assert_allclose(D.values, [0, 0.25, 0.5, 0.75])
    D = distance_transform(gen_singleton(2, 4, (0, 0)))
    assert D.at_cells([3, 3]) == pytest.approx(math.sqrt(18) / 4)
    assert D.at_cells([0, 0]) == 0.0


@pytest.mark.parametrize("n,R", [(2, 32), (3, 16), (1, 50)])
def test_distance_transform_matches_brute_force_bitwise(n, R):
    rng = np.random.default_rng(R + n)
    for trial in range(5):
        cells = rng.integers(0, R, (int(rng.integers(1, 30)), n))
        A = SparseGrid(n, R, cells)
        assert np.array_equal(distance_transform(A).values, brute_force_distances(A))


@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), min_size=1, max_size=10),
       st.lists(st.tuples(st.floats(-0.6, 1.6), st.floats(-0.6, 1.6)), min_size=1, max_size=20))
def test_distance_lower_bound_is_certified(cells, points):
    A = SparseGrid(2, 16, np.array(cells))
    D = distance_transform(A, pad=4)
    p = np.array(points)
    exact = np.min(np.linalg.norm(p[:, None] - A.centers()[None], axis=2), axis=1)
    assert np.all(D.lower_bound(p) <= exact + 1e-12)
