"""Runtime invariant suite backing the ``validate`` subcommand."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kur import ActivityMode, kur_series
from .liouville import trace_row
from .model import EngineParams, InitialKind, full_liouvillian, initial_state, reduced_liouvillian
from .observables import NoiseKernel, conservation_residual, steady_state_noise


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: value={self.value:.3e} tol={self.tolerance:.1e} {self.detail}".rstrip()


def check_trace_preservation(p: EngineParams, t_max: float = 20.0) -> CheckResult:
    worst = 0.0
    for L in (reduced_liouvillian(p), full_liouvillian(p)):
        worst = max(worst, np.abs(trace_row(L.basis) @ L.entries).max())
    for kind in InitialKind:
        k = NoiseKernel.build(p, initial_state(kind, p), t_max / p.big_gamma, for_noise=False)
        worst = max(worst, np.abs(k.history @ trace_row(k.basis) - 1).max())
    return CheckResult("trace preservation", worst <= 1e-12, worst, 1e-12)


def check_dissipativity(p: EngineParams) -> CheckResult:
    top = max(np.linalg.eigvals(L.entries).real.max()
              for L in (reduced_liouvillian(p), full_liouvillian(p)))
    return CheckResult("spectrum in left half-plane", top <= 1e-12, top, 1e-12)


def check_positivity(p: EngineParams, t_max: float = 20.0) -> CheckResult:
    worst = np.inf
    for kind in InitialKind:
        k = NoiseKernel.build(p, initial_state(kind, p), t_max / p.big_gamma, for_noise=False)
        pops = k.populations()
        psd = pops[:, 1] * pops[:, 2] - np.abs(k.coherences()) ** 2
        worst = min(worst, pops.min(), psd.min())
    return CheckResult("positivity along trajectories", worst >= -1e-9, worst, 1e-9)


def check_activity_bound(p: EngineParams, t_max: float = 20.0) -> CheckResult:
    worst = np.inf
    for kind in InitialKind:
        k = NoiseKernel.build(p, initial_state(kind, p), t_max / p.big_gamma, for_noise=False)
        for j in "LR":
            worst = min(worst, (k.activities(j) - np.abs(k.currents(j))).min())
    tol = 1e-15 * p.big_gamma
    return CheckResult("activity bounds current (A_j >= |I_j|)", worst >= -tol, worst, tol)


def conservation_slopes(p: EngineParams, kind=InitialKind.GROUND, t_gamma: float = 1.0,
                        steps=(1e-2, 5e-3, 2.5e-3)) -> tuple[np.ndarray, np.ndarray]:
    """Log-log slopes of both conservation residuals against the step size."""
    G = p.big_gamma
    res = []
    for h in steps:
        k = NoiseKernel.build(p, initial_state(kind, p), 2 * t_gamma / G, step=h / G, for_noise=False)
        res.append(np.abs(conservation_residual(k, t_gamma / G)))
    res = np.array(res)
    logs = np.log(np.asarray(steps))
    slopes = np.array([np.polyfit(logs, np.log(res[:, i]), 1)[0] for i in range(2)])
    return slopes, res


def check_conservation_order(p: EngineParams) -> CheckResult:
    slopes, _ = conservation_slopes(p)
    dev = np.abs(slopes - 2).max()
    return CheckResult("conservation residual is O(h^2)", dev <= 0.1, dev, 0.1,
                       f"slopes={slopes[0]:.3f},{slopes[1]:.3f}")


def quadrature_change(p: EngineParams, kind=InitialKind.GROUND, t_gamma: float = 10.0,
                      step_gamma: float = 0.01) -> float:
    """Relative change of every S_jj'(t) when the quadrature step is halved."""
    G = p.big_gamma
    worst = 0.0
    coarse = NoiseKernel.build(p, initial_state(kind, p), t_gamma / G, step=step_gamma / G)
    fine = NoiseKernel.build(p, initial_state(kind, p), t_gamma / G, step=step_gamma / (2 * G))
    for a in "LR":
        for b in "LR":
            s1 = coarse.finite_time_noise(a, b, t_gamma / G)
            s2 = fine.finite_time_noise(a, b, t_gamma / G)
            worst = max(worst, abs(s2 - s1) / abs(s2))
    return worst


def check_quadrature(p: EngineParams) -> CheckResult:
    worst = max(quadrature_change(p, kind) for kind in InitialKind)
    return CheckResult("quadrature convergence on step halving", worst < 1e-6, worst, 1e-6)


def check_initial_kur(p: EngineParams) -> CheckResult:
    worst = np.inf
    for kind in InitialKind:
        k = NoiseKernel.build(p, initial_state(kind, p), 0.01 / p.big_gamma)
        for mode in ActivityMode:
            s = kur_series(k, mode, indices=[0])
            for r in (s.r_left[0], s.r_asym[0]):
                if np.isfinite(r):
                    worst = min(worst, r)
    return CheckResult("KUR ratios >= 1 at t = 0", worst >= 1.0, worst, 1.0)


def check_steady_noise_relations(p: EngineParams) -> CheckResult:
    s = {(a, b): steady_state_noise(a, b, p) for a in "LR" for b in "LR"}
    ref = s["L", "L"]
    dev = max(abs(s["R", "R"] - ref), abs(s["L", "R"] + ref), abs(s["R", "L"] + ref)) / abs(ref)
    return CheckResult("steady noise S_LL = S_RR = -S_LR = -S_RL", dev <= 1e-10, dev, 1e-10)


def run_invariant_suite(p: EngineParams, t_max: float = 20.0) -> list[CheckResult]:
    """Evaluate every runtime invariant for one parameter set.

    ``t_max`` is the trajectory length in units of 1/Gamma.
    """
    return [
        check_trace_preservation(p, t_max),
        check_dissipativity(p),
        check_positivity(p, t_max),
        check_activity_bound(p, t_max),
        check_conservation_order(p),
        check_quadrature(p),
        check_initial_kur(p),
        check_steady_noise_relations(p),
    ]
