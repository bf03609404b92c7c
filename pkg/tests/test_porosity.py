import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kporosity.geometry import frame_grid
from kporosity.porosity import (PorosityParams, default_field, error_bound, oracle_step_slack, por_k_at,
                                por_k_oracle, por_k_profile, por_k_set, scale_ladder, survey_porosity)
from kporosity.setgen import (CantorSpec, SparseGrid, distance_transform, gen_cantor, gen_full, gen_kplane,
                              gen_product, gen_singleton)

FRAMES2 = frame_grid(2, 2, 16)


def centre(R, *cell):
    return (np.array(cell) + 0.5) / R


@pytest.fixture(scope="module")
def line256():
    A = gen_kplane(2, 1, 256)
    return A, distance_transform(A, pad=65)


def test_full_grid_has_no_holes():
    A = gen_full(2, 64)
    est = por_k_at(A, distance_transform(A, pad=17), centre(64, 32, 32), 0.25, 1, FRAMES2)
    assert est.rho_hat <= est.error_bound


def test_line_k1(line256):
    A, D = line256
    assert por_k_at(A, D, centre(256, 128, 127), 0.25, 1, FRAMES2).rho_hat >= 0.45


def test_line_k2_matches_analytic_optimum(line256):
    A, D = line256
    est = por_k_at(A, D, centre(256, 128, 127), 0.25, 2, frame_grid(2, 2, 90))
    assert abs(est.rho_hat - (math.sqrt(2) - 1)) <= 0.02


def test_oracle_examples():
    s = gen_singleton(2, 32, (16, 16))
    assert por_k_oracle(s, centre(32, 16, 16), 0.25, 2) >= 0.5 - 1 / 32
    f = gen_full(2, 32)
    assert por_k_oracle(f, centre(32, 16, 16), 0.25, 1) <= math.sqrt(2) / 2 / 32 / 0.25
    line = gen_kplane(2, 1, 64)
    assert por_k_oracle(line, centre(64, 32, 31), 0.25, 2) == pytest.approx(math.sqrt(2) - 1, abs=0.02)
    with pytest.raises(ValueError):
        por_k_oracle(gen_full(2, 128), centre(128, 3, 3), 0.25, 1)


@pytest.mark.parametrize("seed", range(6))
def test_estimate_agrees_with_oracle(seed):
    rng = np.random.default_rng(seed)
    R = int(rng.integers(12, 40))
    A = SparseGrid(2, R, rng.integers(0, R, (int(rng.integers(2, 50)), 2)))
    D = distance_transform(A, pad=R)
    x = A.centers()[int(rng.integers(len(A)))]
    r = float(rng.uniform(0.2, 0.6))
    for k in (1, 2):
        est = por_k_at(A, D, x, r, k, frame_grid(2, 2, 45))
        assert abs(est.rho_hat - por_k_oracle(A, x, r, k)) <= est.error_bound + oracle_step_slack(R, r)


def test_one_dimensional_oracle():
    c = gen_cantor(CantorSpec(1 / 3, 4), 81)
    D = distance_transform(c, pad=81)
    x = c.centers()[0]
    est = por_k_at(c, D, x, 0.3, 1, frame_grid(1, 1, 1))
    assert abs(est.rho_hat - por_k_oracle(c, x, 0.3, 1)) <= est.error_bound + oracle_step_slack(81, 0.3)


def test_witness_holes_are_empty(line256):
    A, D = line256
    x = centre(256, 100, 128)
    for k in (1, 2):
        est = por_k_at(A, D, x, 0.25, k, FRAMES2)
        z = est.hole_centres()
        dist = np.min(np.linalg.norm(z[:, None] - A.centers()[None], axis=2), axis=1)
        assert np.all(dist >= est.rho_hat * est.r - 1e-12)
        assert np.all(np.linalg.norm(z - x, axis=1) + est.rho_hat * est.r <= est.r * (1 + est.error_bound))
        np.testing.assert_allclose(est.frame.directions @ est.frame.directions.T, np.eye(k), atol=1e-10)


def random_case(seed, R=24):
    rng = np.random.default_rng(seed)
    A = SparseGrid(2, R, rng.integers(0, R, (int(rng.integers(1, 30)), 2)))
    x = A.centers()[int(rng.integers(len(A)))]
    return rng, A, x


@given(st.integers(0, 10_000), st.floats(0.15, 0.5))
def test_range_and_antimonotone_in_k(seed, r):
    _, A, x = random_case(seed)
    D = distance_transform(A, pad=24)
    e1 = por_k_at(A, D, x, r, 1, FRAMES2)
    e2 = por_k_at(A, D, x, r, 2, FRAMES2)
    assert 0.0 <= e2.rho_hat <= e1.rho_hat + 1e-12 <= 0.5 + 1e-12


@given(st.integers(0, 10_000), st.floats(0.15, 0.5), st.integers(1, 2))
def test_superset_is_less_porous(seed, r, k):
    rng, A, x = random_case(seed)
    extra = rng.integers(0, 24, (10, 2))
    B = SparseGrid(2, 24, np.vstack([A.occupied, extra]))
    a = por_k_at(A, distance_transform(A, pad=24), x, r, k, FRAMES2).rho_hat
    b = por_k_at(B, distance_transform(B, pad=24), x, r, k, FRAMES2).rho_hat
    assert b <= a + 1e-12


@given(st.integers(0, 10_000), st.floats(0.15, 0.5), st.integers(1, 2))
def test_more_frames_never_hurt(seed, r, k):
    _, A, x = random_case(seed)
    D = distance_transform(A, pad=24)
    coarse = frame_grid(2, 2, 4)
    fine = frame_grid(2, 2, 16)  # contains every frame of the coarse grid
    assert por_k_at(A, D, x, r, k, coarse).rho_hat <= por_k_at(A, D, x, r, k, fine).rho_hat + 1e-12


@given(st.integers(0, 10_000), st.floats(0.15, 0.5), st.integers(1, 2))
def test_axis_swap_equivariance(seed, r, k):
    _, A, x = random_case(seed)
    B = SparseGrid(2, 24, A.occupied[:, ::-1])
    a = por_k_at(A, distance_transform(A, pad=24), x, r, k, FRAMES2).rho_hat
    b = por_k_at(B, distance_transform(B, pad=24), x[::-1], r, k, FRAMES2).rho_hat
    assert a == pytest.approx(b, abs=1e-12)


def test_error_bound_formula():
    assert error_bound(2, 256, 0.25, 64) == pytest.approx((math.sqrt(2) / 256 + 0.25 / 64) / 0.25)


def test_scale_ladder_floor():
    scales, truncated = scale_ladder(256, PorosityParams())
    assert scales == [0.25, 0.125, 0.0625]
    assert truncated
    scales, truncated = scale_ladder(4096, PorosityParams(scale_count=4))
    assert scales == [0.25, 0.125, 0.0625, 0.03125] and not truncated


def test_profiles():
    line = gen_kplane(2, 1, 256)
    p = por_k_profile(line, centre(256, 40, 128), 1)
    assert p.liminf_proxy >= 0.45
    full = gen_full(2, 128)
    assert por_k_profile(full, centre(128, 64, 64), 1).liminf_proxy == pytest.approx(0.0, abs=0.03)
    c = gen_cantor(CantorSpec(1 / 3, 6), 729)
    assert por_k_profile(c, c.centers()[0], 1).liminf_proxy >= 0.3


def test_point_must_be_occupied_centre():
    line = gen_kplane(2, 1, 64)
    D = default_field(line, PorosityParams())
    with pytest.raises(ValueError):
        por_k_at(line, D, centre(64, 3, 3), 0.25, 1, FRAMES2)
    with pytest.raises(ValueError):
        por_k_at(line, D, centre(64, 3, 31) + 1e-4, 0.25, 1, FRAMES2)


def test_set_values():
    assert por_k_set(gen_full(2, 128), 1, sample_points=16) == pytest.approx(0.0, abs=0.05)
    assert por_k_set(gen_kplane(2, 1, 256), 1) >= 0.45
    c1 = gen_cantor(CantorSpec(0.1, 2), 1000)
    c3 = gen_cantor(CantorSpec(0.3, 4), 1000)
    lo = por_k_set(gen_product([c3, gen_full(1, 1000)]), 1, sample_points=32)
    hi = por_k_set(gen_product([c1, gen_full(1, 1000)]), 1, sample_points=32)
    assert hi > lo


def test_survey_is_thread_independent():
    A = gen_kplane(2, 1, 128)
    a = survey_porosity(A, 2, 12, seed=3, threads=1)
    b = survey_porosity(A, 2, 12, seed=3, threads=3)
    assert a.value == b.value
    assert [p.cell for p in a.profiles] == [p.cell for p in b.profiles]
    assert [e.rho_hat for p in a.profiles for e in p.estimates] == [e.rho_hat for p in b.profiles for e in p.estimates]
