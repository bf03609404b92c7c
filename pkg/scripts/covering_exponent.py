"""Ball counts of the covering construction against the offset factor.

Prints one line per (set, delta) and the fitted exponent per set.
Usage: python3 scripts/covering_exponent.py [--svg-dir DIR]
"""

import argparse
from pathlib import Path

import numpy as np

from kporosity.covering import CoverParams, count_exponent, covering_construction, write_svg
from kporosity.setgen import CantorSpec, gen_cantor, gen_kplane, gen_product

DELTAS = [1 / 8, 1 / 16, 1 / 32]


def cases():
    line = gen_kplane(2, 1, 256)
    yield "line", line, np.array([128.5, 127.5]) / 256, 0.45, 1, 0.3, 1.0
    c = gen_cantor(CantorSpec(0.1, 3), 1000)
    sq = gen_product([c, c])
    yield "cantor-square", sq, sq.centers()[len(sq) // 2], 0.43, 2, 0.3, 2 * np.log(2) / np.log(10)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--svg-dir")
    args = ap.parse_args()
    for name, A, x, rho, k, alpha, set_dim in cases():
        counts = []
        for d in DELTAS:
            res = covering_construction(A, x, 0.25, rho, k, alpha, CoverParams(delta=d))
            counts.append(res.proof_path_count)
            print(f"{name} delta={d:.5f} proof_path={res.proof_path_count} fallback={res.fallback_count} "
                  f"certificate={res.verify()} final_beta={res.report['final_beta']:.4f}")
            if args.svg_dir:
                Path(args.svg_dir).mkdir(parents=True, exist_ok=True)
                write_svg(res, A, x, 0.25, str(Path(args.svg_dir) / f"{name}_{round(1 / d)}.svg"))
        print(f"{name}: exponent={count_exponent(DELTAS, counts):.3f} (n-k={A.n - k}, set dimension={set_dim:.3f})")


if __name__ == "__main__":
    main()
