"""Porosity of the calibration sets next to their analytic values.

Usage: python3 scripts/porosity_calibration.py
"""

import math

import numpy as np

from kporosity.porosity import por_k_oracle, por_k_set
from kporosity.setgen import gen_full, gen_kplane, gen_singleton

R = 256


def main():
    line = gen_kplane(2, 1, R)
    rows = [
        ("line k=1", por_k_set(line, 1), 0.5),
        ("line k=2", por_k_set(line, 2), math.sqrt(2) - 1),
        ("full k=1", por_k_set(gen_full(2, R), 1), 0.0),
        ("singleton k=1", por_k_set(gen_singleton(2, R, [R // 2, R // 2]), 1), 0.5),
        ("singleton k=2", por_k_set(gen_singleton(2, R, [R // 2, R // 2]), 2), 0.5),
    ]
    for name, est, exact in rows:
        print(f"{name:14s} estimate={est:.4f} analytic={exact:.4f}")
    small = gen_kplane(2, 1, 64)
    x = np.array([32.5, 31.5]) / 64
    for k in (1, 2):
        print(f"oracle line k={k} r=0.25: {por_k_oracle(small, x, 0.25, k):.4f}")


if __name__ == "__main__":
    main()
