"""Finite-time noise and kinetic uncertainty ratios.

The zero-frequency noise S_LL(t) is integrated over the symmetric lag
window [-t, t] and approaches its steady value as the transients die out.
The KUR ratio S A / I^2 is then followed in time, with and without a
chemical-potential bias; with bias it drops below one.

    python demos/noise_and_kur.py
"""

import numpy as np

from entanglement_engine import (ActivityMode, EngineParams, NoiseKernel, initial_state, kur_series,
                                 steady_kur, steady_noise, violation_windows)

for label, p in (("no bias", EngineParams(t_l=2.0)),
                 ("mu_L = 2", EngineParams(t_l=0.15, mu_l=2.0))):
    G = p.big_gamma
    k = NoiseKernel.build(p, initial_state("ground", p), 20 / G)
    s_ll = k.noise_series("L", "L", [500, 1000, 2000])
    print(f"{label}: S_LL/gamma_L at Gamma t = 5, 10, 20: {np.round(s_ll / p.gamma_l, 5)}"
          f"  (steady {steady_noise(p) / p.gamma_l:.5f})")

    for mode in ActivityMode:
        s = kur_series(k, mode)
        print(f"    {mode.value:13s} R_L(20) = {s.r_left[-1]:.4f}  R_asym(20) = {s.r_asym[-1]:.4f}"
              f"  min R_L = {np.nanmin(s.r_left):.4f}  windows below 1: {violation_windows(s)}")
    print(f"    closed-form steady ratio {steady_kur(p):.4f}\n")
