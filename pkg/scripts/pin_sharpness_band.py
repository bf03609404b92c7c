"""Run the sharpness experiment once and record the product band as a test fixture.

Usage: python3 scripts/pin_sharpness_band.py [--out tests/fixtures/sharpness_band.json]
"""

import argparse
import json
import math
from pathlib import Path

from kporosity import __version__
from kporosity.sharpness import SharpnessConfig, config_dict, run_sharpness

CASES = [(2, 1, (0.3, 0.2, 0.1)), (2, 2, (0.3, 0.2))]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/fixtures/sharpness_band.json"))
    args = ap.parse_args()
    bands = []
    for n, k, lams in CASES:
        cfg = SharpnessConfig(n=n, k=k, lambdas=lams)
        rep = run_sharpness(cfg)
        lo, hi = rep.band()
        bands.append({
            "n": n, "k": k, "config": config_dict(cfg),
            "products": rep.products, "product_min": lo, "product_max": hi,
            "center": math.sqrt(lo * hi),
        })
        for r in rep.rows:
            print(f"n={n} k={k} lambda={r.lam}: rho_hat={r.rho_hat:.4f} dim_hat={r.dim_hat:.4f} "
                  f"product={r.product:.4f}")
    Path(args.out).write_text(json.dumps({"version": __version__, "bands": bands}, indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
