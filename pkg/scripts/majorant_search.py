#!/usr/bin/env python3
"""Randomized search for majorant-ratio growth at an odd exponent.

For even p the ratio ||f||_p / ||g||_p is at most 1 whenever g^ dominates
|f^|.  At odd p no such bound is known here, so this experiment hunts for
dominated pairs whose ratio exceeds 1 and reports the largest value found.
Report-only: nothing is asserted.
"""

import argparse

import numpy as np

from fflab.field import make_field
from fflab.grid import Grid, Side, fourier_inverse
from fflab.restriction import majorant_ratio


def search(p_char: int, n: int, exponent: float, trials: int, seed: int) -> tuple[float, int]:
    field = make_field(p_char)
    total = field.order**n
    rng = np.random.default_rng(seed)
    best, best_at = 0.0, -1
    for i in range(trials):
        profile = rng.random(total) + 0.05
        g = fourier_inverse(Grid(field, n, profile.astype(np.complex128), Side.FREQUENCY))
        phases = np.exp(2j * np.pi * rng.random(total))
        scales = rng.random(total) ** rng.uniform(0.2, 3.0)
        f = fourier_inverse(Grid(field, n, profile * phases * scales, Side.FREQUENCY))
        ratio = majorant_ratio(f, g, exponent)
        if ratio > best:
            best, best_at = ratio, i
    return best, best_at


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", default="3,5,7", help="comma-separated characteristics")
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--p", type=float, default=3.0, help="Lebesgue exponent under test")
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"majorant ratio search at p = {args.p}, n = {args.dim}, {args.trials} trials/field")
    print(f"{'field':>6}  {'best ratio':>12}  {'trial':>6}  {'exceeds 1':>9}")
    for token in args.fields.split(","):
        char = int(token)
        best, at = search(char, args.dim, args.p, args.trials, args.seed)
        print(f"{char:>6}  {best:>12.8f}  {at:>6}  {'yes' if best > 1 + 1e-12 else 'no':>9}")


if __name__ == "__main__":
    main()
