"""Two-sided check on C_lambda^k x [0,1]^(n-k): dimension excess times log(1/(1 - 2 rho)).

Porosity is measured on a moderate grid where each finest Cantor interval
spans at least four cells. Dimension is counted on a much finer 1-d ladder of
the Cantor factor (intervals of length about `dim_floor`) and multiplied
level-wise with the exact ladder of the unit-interval factors, which is the
ladder of the product set without ever building it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .dimension import BoxCountLadder, box_count_ladder, cube_ladder, dim_estimate
from .porosity import PorosityParams, survey_porosity
from .setgen import CantorSpec, gen_cantor, gen_full, gen_product

MAX_CELLS = 10 ** 8
DELTA = 0.5


@dataclass(frozen=True)
class SharpnessConfig:
    n: int = 2
    k: int = 1
    lambdas: tuple = (0.3, 0.2, 0.1)
    porosity_resolution: int = 2048
    min_interval_cells: int = 4
    dim_floor: float = 1e-10
    window_width: int = 2
    sample_points: int = 64
    frame_resolution: int = 16
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")
        if self.n > 3:
            raise ValueError("porosity grids are built for n <= 3")
        if not self.lambdas or any(not 0.0 < lam < 0.5 for lam in self.lambdas):
            raise ValueError("lambdas must lie in (0, 1/2)")


@dataclass(frozen=True)
class SharpnessRow:
    lam: float
    rho_hat: float
    dim_hat: float
    product: float
    theoretical_dim: float
    porosity_depth: int
    dimension_depth: int
    dimension_resolution: int
    window: tuple


@dataclass
class SharpnessReport:
    config: SharpnessConfig
    rows: list = field(default_factory=list)

    @property
    def products(self) -> list[float]:
        return [r.product for r in self.rows]

    def band(self) -> tuple[float, float]:
        finite = [p for p in self.products if math.isfinite(p)]
        return (min(finite), max(finite)) if finite else (float("nan"), float("nan"))

    def to_json(self) -> dict:
        lo, hi = self.band()
        return {
            "rows": [{
                "lambda": r.lam, "rho_hat": r.rho_hat, "dim_hat": r.dim_hat,
                "product": r.product, "theoretical_dim": r.theoretical_dim,
                "porosity_depth": r.porosity_depth, "dimension_depth": r.dimension_depth,
                "dimension_resolution": r.dimension_resolution, "window": list(r.window),
            } for r in self.rows],
            "product_min": lo,
            "product_max": hi,
        }


def porosity_depth(lam: float, R: int, min_cells: int) -> int:
    """Deepest level whose intervals still span min_cells cells at resolution R."""
    d = 0
    while lam ** (d + 1) * R >= min_cells:
        d += 1
    if d == 0:
        raise ValueError(f"resolution {R} too coarse for lambda={lam}")
    return d


def dimension_schedule(lam: float, floor: float, min_cells: int) -> tuple[int, int]:
    """Depth with lam^d <= floor and R = ceil(min_cells * lam^-d) rounded up to a power of 2."""
    d = math.ceil(math.log(floor) / math.log(lam))
    R = 1 << math.ceil(math.log2(math.ceil(min_cells * lam ** -d)))
    return d, R


def projected_cells(cfg: SharpnessConfig, lam: float) -> int:
    Rp = cfg.porosity_resolution
    dp = porosity_depth(lam, Rp, cfg.min_interval_cells)
    per_factor = 2 ** dp * (math.ceil(lam ** dp * Rp) + 2)
    por = per_factor ** cfg.k * Rp ** (cfg.n - cfg.k)
    dd, Rd = dimension_schedule(lam, cfg.dim_floor, cfg.min_interval_cells)
    dim = 2 ** dd * (math.ceil(lam ** dd * Rd) + 2)
    return max(por, dim)


def check_resources(cfg: SharpnessConfig) -> None:
    for lam in cfg.lambdas:
        need = projected_cells(cfg, lam)
        if need > MAX_CELLS:
            raise MemoryError(f"lambda={lam} needs about {need:.3g} occupied cells (limit {MAX_CELLS:.0e})")


def product_ladder(lam: float, cfg: SharpnessConfig) -> tuple[BoxCountLadder, int, int, tuple]:
    d, R = dimension_schedule(lam, cfg.dim_floor, cfg.min_interval_cells)
    factor = gen_cantor(CantorSpec(lam, d), R)
    # only boxes coarser than the finest intervals carry information
    top = int(math.floor(d * math.log2(1.0 / lam)))
    levels = range(0, top + 1)
    one = box_count_ladder(factor, DELTA, levels)
    ladder = one
    for _ in range(cfg.k - 1):
        ladder = ladder * one
    if cfg.n > cfg.k:
        ladder = ladder * cube_ladder(cfg.n - cfg.k, DELTA, levels)
    return ladder, d, R, (top - cfg.window_width, top)


def sharpness_row(lam: float, cfg: SharpnessConfig, threads: int = 1) -> SharpnessRow:
    Rp = cfg.porosity_resolution
    dp = porosity_depth(lam, Rp, cfg.min_interval_cells)
    c = gen_cantor(CantorSpec(lam, dp), Rp)
    A = gen_product([c] * cfg.k + [gen_full(1, Rp)] * (cfg.n - cfg.k))
    params = PorosityParams(frame_resolution=cfg.frame_resolution, r_min=lam ** (dp - 1), seed=cfg.seed)
    rho = survey_porosity(A, cfg.k, cfg.sample_points, cfg.seed, params, threads).value

    ladder, dd, Rd, window = product_ladder(lam, cfg)
    dim_hat = dim_estimate(ladder, window).dim_hat
    excess = dim_hat - (cfg.n - cfg.k)
    product = excess * math.log(1.0 / (1.0 - 2.0 * rho)) if rho < 0.5 else float("inf")
    theory = cfg.k * math.log(2.0) / math.log(1.0 / lam) + (cfg.n - cfg.k)
    return SharpnessRow(lam, rho, dim_hat, product, theory, dp, dd, Rd, window)


def run_sharpness(cfg: SharpnessConfig, threads: int = 1) -> SharpnessReport:
    check_resources(cfg)
    lams = sorted(cfg.lambdas, reverse=True)
    return SharpnessReport(cfg, [sharpness_row(lam, cfg, threads) for lam in lams])


def config_dict(cfg: SharpnessConfig) -> dict:
    out = asdict(cfg)
    out["lambdas"] = list(cfg.lambdas)
    return out
