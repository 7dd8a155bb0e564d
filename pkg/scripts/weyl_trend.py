#!/usr/bin/env python3
"""Ratio of exact square eigenvalues to the Weyl term, and the optimized upper bound against the average."""
import numpy as np

from polybounds import bounds as B
from polybounds.eigensolve import exact_box_spectrum_l1
from polybounds.geometry import Domain

spec = B.ProblemSpec.on(Domain.box([1.0, 1.0]), 1)
ks = [10, 50, 100, 200, 400, 1000, 4000, 10000]
sp = exact_box_spectrum_l1([1.0, 1.0], ks[-1])
avg = sp.running_average()
print("k       lambda_k/weyl   avg/li_yau   upper/avg   sigma0     theta")
for k in ks:
    p = B.optimize_sigma0(spec, k)
    up = B.theorem_upper(spec, p).value
    print(f"{k:<7} {sp.values[k - 1] / B.weyl_kth(spec, k):>13.5f}   {avg[k - 1] / B.li_yau_lower(spec, k):>10.5f}"
          f"   {up / avg[k - 1]:>9.5f}   {p.sigma0:>7.3f}   {p.theta:.4f}")
