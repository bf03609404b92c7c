import math

import pytest

from kporosity.dimension import box_count_ladder
from kporosity.setgen import CantorSpec, gen_cantor
from kporosity.sharpness import (
    SharpnessConfig, check_resources, dimension_schedule, porosity_depth, product_ladder,
    run_sharpness,
)

SMALL = SharpnessConfig(lambdas=(0.3, 0.2), porosity_resolution=256, dim_floor=1e-6, sample_points=16)


def test_porosity_depth_keeps_intervals_wide():
    for lam in (0.1, 0.2, 0.3):
        d = porosity_depth(lam, 2048, 4)
        assert lam ** d * 2048 >= 4 > lam ** (d + 1) * 2048


def test_porosity_depth_rejects_coarse_grid():
    with pytest.raises(ValueError):
        porosity_depth(0.1, 16, 4)


def test_dimension_schedule_is_a_power_of_two_past_the_floor():
    for lam in (0.1, 0.2, 0.3):
        d, R = dimension_schedule(lam, 1e-10, 4)
        assert lam ** d <= 1e-10 < lam ** (d - 1)
        assert R & (R - 1) == 0 and lam ** d * R >= 4


@pytest.mark.parametrize("n,k", [(1, 1), (2, 1), (2, 2), (3, 1)])
def test_product_ladder_counts_factor_out(n, k):
    cfg = SharpnessConfig(n=min(n, 3), k=k, lambdas=(0.25,), dim_floor=1e-8)
    ladder, d, R, window = product_ladder(0.25, cfg)
    levels = [i for i, _ in ladder.levels]
    one = box_count_ladder(gen_cantor(CantorSpec(0.25, d), R), 0.5, levels).counts()
    for i, c in ladder.levels:
        assert c == one[i] ** k * 2 ** (i * (n - k))
    # even levels align with the construction, so the count there is exact
    top = 2 * (window[1] // 2)
    assert one[top] == 2 ** (top // 2)


def test_small_run_orders_rho_and_reports_products():
    rep = run_sharpness(SMALL)
    assert [r.lam for r in rep.rows] == [0.3, 0.2]
    assert rep.rows[0].rho_hat < rep.rows[1].rho_hat
    for r in rep.rows:
        assert 0 < r.rho_hat < 0.5
        assert abs(r.dim_hat - r.theoretical_dim) < 0.1
        assert r.product == pytest.approx((r.dim_hat - 1) * math.log(1 / (1 - 2 * r.rho_hat)))
    lo, hi = rep.band()
    assert lo == min(rep.products) and hi == max(rep.products)


def test_small_run_is_thread_independent():
    assert run_sharpness(SMALL, threads=1).to_json() == run_sharpness(SMALL, threads=3).to_json()


def test_config_validation():
    with pytest.raises(ValueError):
        SharpnessConfig(n=2, k=3)
    with pytest.raises(ValueError):
        SharpnessConfig(lambdas=(0.6,))
    with pytest.raises(ValueError):
        SharpnessConfig(n=4, k=1)


def test_resource_guard_refuses_huge_grids():
    with pytest.raises(MemoryError):
        check_resources(SharpnessConfig(n=3, k=3, lambdas=(0.3,), porosity_resolution=2 ** 16))
