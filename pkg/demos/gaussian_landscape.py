"""Capacity formulas for the single-mode bosonic channel.

Shows the assisted-to-classical capacity ratio growing as the noise
swamps the signal, the low-photon regime where assisted coding shines,
and the coherent/squeezed bound sandwich around the exact value.
"""

import math

from qcap import (
    GaussianParams,
    ce_over_cshan_limit,
    coherent_bounds,
    gaussian_ce,
    shannon_capacity,
    squeezed_bounds,
)

s = 1.0
print("S = 1, k = 1: ratio C_E / C_Shan vs added noise N")
print(f"{'N':>10} {'C_E':>12} {'C_Shan':>12} {'ratio':>8}")
for n in (0.1, 1.0, 10.0, 1e3, 1e6):
    ce = gaussian_ce(GaussianParams(s, n, 1.0))
    cs = shannon_capacity(s, n)
    print(f"{n:>10g} {ce:>12.6g} {cs:>12.6g} {ce / cs:>8.4f}")
print(f"large-noise limit (S+1)ln(1+1/S) = {ce_over_cshan_limit(s):.4f}")

print("\nlow photon numbers, N = 1: the assisted rate dwarfs the classical one")
print(f"{'S':>8} {'C_E':>12} {'C_Shan':>12} {'ratio':>8}")
for s in (1e-1, 1e-2, 1e-3, 1e-4):
    ce = gaussian_ce(GaussianParams(s, 1.0, 1.0))
    cs = shannon_capacity(s, 1.0)
    print(f"{s:>8g} {ce:>12.4e} {cs:>12.4e} {ce / cs:>8.2f}")

print("\nbound sandwich at S = 1 (k = 1): coherent <= squeezed <= C_E"
      " <= squeezed <= coherent")
print(f"{'N':>6} {'lb_coh':>9} {'lb_sq':>9} {'C_E':>9} {'ub_sq':>9} {'ub_coh':>9}")
for n in (0.5, 1.0, 2.0, 5.0):
    p = GaussianParams(1.0, n, 1.0)
    lb_c, ub_c = coherent_bounds(p)
    lb_s, ub_s, _, _ = squeezed_bounds(1.0, n)
    ce = gaussian_ce(p)
    cells = [lb_c, lb_s, ce, ub_s, ub_c]
    print(f"{n:>6}" + "".join(
        f" {c:>9.4f}" if math.isfinite(c) else f" {'inf':>9}" for c in cells))
