"""Box counting, upper Minkowski dimension estimates and the closed-form constants
behind the k-porosity dimension bound.

All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .setgen import SparseGrid

ALLOWED_BASES = (2, 3, 4, 5)
RHO_MIN = math.sqrt(2.0) - 1.0


def delta_base(delta: float) -> int:
    """Integer b with delta = 1/b, restricted to the supported ladders."""
    b = round(1.0 / delta)
    if b not in ALLOWED_BASES or abs(1.0 / delta - b) > 1e-9:
        raise ValueError(f"delta must be one of 1/2, 1/3, 1/4, 1/5; got {delta}")
    return b


@dataclass(frozen=True)
class BoxCountLadder:
    delta: float
    levels: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple((int(i), int(N)) for i, N in self.levels))

    def counts(self) -> dict[int, int]:
        return dict(self.levels)

    def __mul__(self, other: "BoxCountLadder") -> "BoxCountLadder":
        """Level-wise product: the box count ladder of a Cartesian product."""
        if delta_base(self.delta) != delta_base(other.delta):
            raise ValueError("ladders use different delta")
        theirs = other.counts()
        if set(theirs) != set(self.counts()):
            raise ValueError("ladders cover different levels")
        return BoxCountLadder(self.delta, tuple((i, N * theirs[i]) for i, N in self.levels))


@dataclass(frozen=True)
class DimensionFit:
    ladder: BoxCountLadder
    window: tuple[int, int]
    dim_hat: float
    slope: float
    ratios: tuple[float, ...] = field(default=())

    def to_json(self, metadata: str = "") -> dict:
        return {
            "set": metadata,
            "delta": self.ladder.delta,
            "levels": [{"i": i, "N": N} for i, N in self.ladder.levels],
            "window": list(self.window),
            "dim_hat": self.dim_hat,
            "slope": self.slope,
        }


def box_count(A: SparseGrid, delta: float, i: int) -> int:
    """Number of origin-aligned boxes of side delta**i holding an occupied cell."""
    b = delta_base(delta)
    if i < 0:
        raise ValueError("level must be non-negative")
    boxes = b ** i
    if A.R % boxes:
        raise ValueError(f"delta^-i = {boxes} does not divide R = {A.R}")
    if len(A) == 0:
        return 0
    coarse = A.occupied // (A.R // boxes)
    if A.n == 1:
        # sorted 1-d indices stay sorted, so distinct boxes are runs
        return int(1 + np.count_nonzero(np.diff(coarse[:, 0])))
    if boxes ** A.n < 2 ** 62:
        key = np.zeros(len(coarse), dtype=np.int64)
        for j in range(A.n):
            key = key * boxes + coarse[:, j]
        return int(len(np.unique(key)))
    return int(len(np.unique(coarse, axis=0)))


def max_level(R: int, delta: float) -> int:
    b = delta_base(delta)
    i = 0
    while R % (b ** (i + 1)) == 0:
        i += 1
    return i


def box_count_ladder(A: SparseGrid, delta: float, levels=None) -> BoxCountLadder:
    if levels is None:
        levels = range(0, max_level(A.R, delta) + 1)
    return BoxCountLadder(delta, tuple((i, box_count(A, delta, i)) for i in levels))


def cube_ladder(m: int, delta: float, levels) -> BoxCountLadder:
    """Exact ladder of [0,1]^m: every one of the delta^(-i*m) boxes is occupied."""
    b = delta_base(delta)
    return BoxCountLadder(delta, tuple((i, b ** (i * m)) for i in levels))


def dim_estimate(ladder: BoxCountLadder, window: tuple[int, int]) -> DimensionFit:
    """limsup-style estimate: the largest log N(i) / (i log(1/delta)) in the window.

    The least-squares slope of log N against i log(1/delta) is returned as a
    diagnostic (nan for a single-level window).
    """
    lo, hi = window
    counts = ladder.counts()
    if lo < 2:
        raise ValueError("window must start at level >= 2")
    levels = [i for i in range(lo, hi + 1) if i in counts]
    if not levels or len(levels) != hi - lo + 1:
        raise ValueError(f"window {window} not covered by the ladder")
    if any(counts[i] < 1 for i in levels):
        raise ValueError("empty set has no dimension")
    lg = math.log(1.0 / ladder.delta)
    ratios = tuple(math.log(counts[i]) / (i * lg) for i in levels)
    if len(levels) > 1:
        x = np.array(levels, dtype=float) * lg
        y = np.log(np.array([counts[i] for i in levels], dtype=float))
        slope = float(np.polyfit(x, y, 1)[0])
    else:
        slope = float("nan")
    return DimensionFit(ladder, (lo, hi), max(ratios), slope, ratios)


def _check_rho(rho: float, allow_boundary: bool = False) -> None:
    lo_ok = rho >= RHO_MIN - 1e-15 if allow_boundary else rho > RHO_MIN
    if not (lo_ok and rho < 0.5):
        raise ValueError(f"rho must lie in (sqrt(2)-1, 1/2), got {rho}")


def const_t(rho: float) -> float:
    """Working-scale factor 1/sqrt(1 - 2 rho), defined for 0 <= rho < 1/2."""
    if not 0.0 <= rho < 0.5:
        raise ValueError(f"rho must lie in [0, 1/2), got {rho}")
    return 1.0 / math.sqrt(1.0 - 2.0 * rho)


def const_delta(rho: float) -> float:
    """Relative half-space offset (1 - rho - sqrt(rho^2 + 2 rho - 1)) / sqrt(1 - 2 rho)."""
    _check_rho(rho, allow_boundary=True)
    # rho^2 + 2 rho - 1 in factored form stays exact at the lower end
    disc = max((rho - RHO_MIN) * (rho + 1.0 + math.sqrt(2.0)), 0.0)
    return (1.0 - rho - math.sqrt(disc)) / math.sqrt(1.0 - 2.0 * rho)


def delta_inequality_holds(rho: float) -> bool:
    d = const_delta(rho)
    return 0.0 < d < 4.0 * math.sqrt(1.0 - 2.0 * rho)


def log_condition_holds(rho: float) -> bool:
    """log(1/(4 sqrt(1-2rho))) > (1/3) log(1/(1-2rho)); true iff 1-2rho < 4**-6."""
    s = 1.0 - 2.0 * rho
    return math.log(1.0 / (4.0 * math.sqrt(s))) > math.log(1.0 / s) / 3.0


def const_cprime(alpha: float, c: float) -> float:
    """Translation constant for tilted half-spaces next to an (alpha)-planar set."""
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    if not 0.0 < alpha < math.sin(math.pi / 2 - math.acos(c)):
        raise ValueError("need 0 < alpha < sin(pi/2 - arccos c)")
    a, s = math.acos(c), math.asin(alpha)
    return (2.0 / math.sin(a + s) + 1.0) / math.sin(math.pi / 2 - a - s)


def const_alpha_m(n: int, k: int, m: int, alpha: float) -> float:
    if not n - k <= m <= n - 1:
        raise ValueError(f"m must lie in [{n - k}, {n - 1}]")
    return 2.0 ** (0.5 * (n - k - m + 1)) * alpha


def const_c2(alpha: float, c1: float) -> float:
    if not 0.0 <= alpha < 1.0 or c1 <= 0:
        raise ValueError("need 0 <= alpha < 1 and c1 > 0")
    return 1.0 + (c1 + 1.0) / math.sqrt(1.0 - alpha * alpha)


def bound_theorem(n: int, k: int, rho: float, c: float) -> float:
    """Upper Minkowski dimension bound n - k + c / log(1/(1 - 2 rho))."""
    if not 0.0 < rho < 0.5:
        raise ValueError("rho must lie in (0, 1/2)")
    if c <= 0:
        raise ValueError("c must be positive")
    return n - k + c / math.log(1.0 / (1.0 - 2.0 * rho))


@dataclass(frozen=True)
class PaperConstants:
    n: int
    k: int
    rho: float
    alpha: float
    t: float
    delta_rho: float
    c1: float | None
    c2: float | None
    alpha_m: dict

    @classmethod
    def evaluate(cls, n: int, k: int, rho: float, alpha: float) -> "PaperConstants":
        if not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        # c1 and c2 only enter the inductive step, which needs k >= 2
        c1 = const_cprime(alpha, 1.0 / math.sqrt(k)) if k >= 2 else None
        return cls(
            n=n, k=k, rho=rho, alpha=alpha,
            t=const_t(rho), delta_rho=const_delta(rho),
            c1=c1, c2=const_c2(alpha, c1) if c1 is not None else None,
            alpha_m={m: const_alpha_m(n, k, m, alpha) for m in range(n - k, n)},
        )
