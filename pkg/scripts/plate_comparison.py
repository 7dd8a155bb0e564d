#!/usr/bin/env python3
"""Compare the sharp plate bound with the earlier clamped-plate bound, term by term."""
import argparse

from polybounds import bounds as B
from polybounds.geometry import Domain


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sigma0", type=float, nargs="+", default=[2.5, 4.0, 8.0])
    ap.add_argument("--k-max", type=int, default=2000)
    args = ap.parse_args()

    print("n   A1(n,2)   24n/(n+2)   A2(n,2)   4n^2")
    for n in range(1, 17):
        a1, cw2, a2, cw3 = B.plate_coefficients(n)
        print(f"{n:<3} {a1:>8.4f}   {cw2:>9.4f}   {a2:>7.0f}   {cw3:>4.0f}")

    spec = B.ProblemSpec.on(Domain.box([1.0, 1.0]), 2)
    for s in args.sigma0:
        cmp = B.compare_with_cheng_wei(spec, s, args.k_max)
        if not cmp.ks:
            print(f"sigma0={s}: no admissible k up to {args.k_max} (theta={cmp.theta:.4g})")
            continue
        gap = cmp.total_deltas[-1]
        print(f"sigma0={s:<5} theta={cmp.theta:.4f} first admissible k={cmp.ks[0]} "
              f"threshold k={cmp.threshold_k} gap at k={cmp.ks[-1]}: {gap:.6g}")


if __name__ == "__main__":
    main()
