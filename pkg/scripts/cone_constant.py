#!/usr/bin/env python3
"""Measure the cone's pair-sum concentration and kernel-decay exponent.

The nontrivial self-intersection count of the cone grows linearly in |F|,
but the constant in front is not pinned down by theory; this measures
A = max_{eta != 0} #{(a, b) on the cone : a + b = eta} and reports A / |F|
per field, together with the empirical decay exponent of the mean-corrected
kernel.  Report-only: nothing is asserted.
"""

import argparse

from fflab.field import make_field
from fflab.surfaces import cone, fourier_dimension, surface_sum_max


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--fields", default="3,5,7,11,13,17,19,23", help="comma-separated primes")
    args = ap.parse_args()

    print(f"{'field':>6}  {'|S|':>6}  {'A (eta != 0)':>12}  {'A / |F|':>8}  {'decay exp':>10}")
    for token in args.fields.split(","):
        char = int(token)
        field = make_field(char)
        surface = cone(field)
        a_count = surface_sum_max(surface, 2, exclude_zero=True)
        dim = fourier_dimension(surface)
        print(
            f"{char:>6}  {surface.size:>6}  {a_count:>12}  "
            f"{a_count / char:>8.4f}  {dim:>10.6f}"
        )


if __name__ == "__main__":
    main()
