"""Why a large current does not certify entanglement at finite times.

In the steady state the engine is entangled exactly when its current
exceeds a critical value.  During the transient the current can exceed
that value while the concurrence is still zero.

    python demos/witness.py
"""

import numpy as np

from entanglement_engine import EngineParams, InitialKind, NoiseKernel, critical_point, initial_state, steady_sweep
from entanglement_engine.metrics import concurrence_series

p = EngineParams()
t_crit, i_crit = critical_point(p, (p.t_r, 2.0))
print(f"onset of steady entanglement: T_L = {t_crit:.5f}, I_crit/gamma_L = {i_crit / p.gamma_l:.4e}")

for pt in steady_sweep(p, [0.12, 0.15, 0.16, 0.3, 0.6, 2.0]):
    print(f"    T_L = {pt.t_l:4.2f}  I/gamma_L = {pt.steady_current / p.gamma_l:.4e}"
          f"  C = {pt.steady_concurrence:.3e}")

G = p.big_gamma
for kind in InitialKind:
    k = NoiseKernel.build(p, initial_state(kind, p), 20 / G, for_noise=False)
    bad = np.flatnonzero((k.currents("L") > i_crit) & (concurrence_series(k) == 0))
    span = f"Gamma t in [{k.times[bad[0]] * G:.2f}, {k.times[bad[-1]] * G:.2f}]" if bad.size else "none"
    print(f"{kind.value:8s}: I_L > I_crit with C = 0 at {bad.size} grid points ({span})")
