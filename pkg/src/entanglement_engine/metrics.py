"""Entanglement of the engine and its relation to the particle current."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NoSignChange, ZeroCoherence
from .model import EngineParams, XState
from .observables import NoiseKernel, current, steady_xstate

COHERENCE_FLOOR = 1e-14


def concurrence(s: XState) -> float:
    """Wootters concurrence of an X state, ``max(0, 2(|c| - sqrt(r1 r4)))``."""
    return max(0.0, entanglement_margin(s))


def entanglement_margin(s: XState) -> float:
    """Unclamped ``2(|c| - sqrt(r1 r4))``; positive iff the state is entangled."""
    return 2 * (abs(s.c) - np.sqrt(max(s.r1, 0.0) * max(s.r4, 0.0)))


def concurrence_series(kernel: NoiseKernel) -> np.ndarray:
    pops = np.clip(kernel.populations(), 0.0, None)
    margin = 2 * (np.abs(kernel.coherences()) - np.sqrt(pops[:, 0] * pops[:, 3]))
    return np.maximum(margin, 0.0)


def current_coherence_ratio(kernel: NoiseKernel, t: float) -> float:
    """``I_L / (2 g |c|)``; tends to one in the steady state."""
    s = kernel.state(t)
    if abs(s.c) <= COHERENCE_FLOOR:
        raise ZeroCoherence(f"|c({t})| vanishes")
    return current("L", s, kernel.params) / (2 * kernel.params.g * abs(s.c))


def current_coherence_ratio_series(kernel: NoiseKernel) -> np.ndarray:
    """Ratio on every grid point, NaN where the coherence vanishes."""
    c = np.abs(kernel.coherences())
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = kernel.currents("L") / (2 * kernel.params.g * c)
    return np.where(c > COHERENCE_FLOOR, ratio, np.nan)


@dataclass(frozen=True)
class SweepPoint:
    t_l: float
    steady_current: float
    steady_concurrence: float
    steady_coherence: float
    state: XState

    @property
    def recomputed_concurrence(self) -> float:
        return concurrence(self.state)


def steady_point(p: EngineParams) -> SweepPoint:
    s = steady_xstate(p)
    return SweepPoint(p.t_l, current("L", s, p), concurrence(s), s.c.real, s)


def steady_sweep(p_base: EngineParams, t_l_grid, threads: int = 1) -> list[SweepPoint]:
    """Steady-state current, concurrence and coherence along a ``T_L`` grid."""
    grid = [float(x) for x in t_l_grid]
    if not grid:
        raise ValueError("temperature grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("temperature grid must be ascending")
    params = [p_base.replace(t_l=t) for t in grid]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(steady_point, params))
    return [steady_point(p) for p in params]


def critical_point(p_base: EngineParams, t_l_bracket, tol: float = 1e-8) -> tuple[float, float]:
    """Left temperature and steady current at the onset of steady-state entanglement.

    Bisects the sign of the unclamped margin ``|c| - sqrt(r1 r4)``.
    """
    lo, hi = map(float, t_l_bracket)
    m_lo = entanglement_margin(steady_xstate(p_base.replace(t_l=lo)))
    m_hi = entanglement_margin(steady_xstate(p_base.replace(t_l=hi)))
    if not (m_lo <= 0.0 < m_hi):
        raise NoSignChange(
            f"entanglement margin does not change sign on [{lo}, {hi}] ({m_lo:.3e}, {m_hi:.3e})")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entanglement_margin(steady_xstate(p_base.replace(t_l=mid))) > 0.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    p = p_base.replace(t_l=root)
    return root, current("L", steady_xstate(p), p)


def critical_current(p_base: EngineParams, t_l_bracket) -> float:
    """Steady current above which the steady state is entangled."""
    return critical_point(p_base, t_l_bracket)[1]


def witness_failures(kernel: NoiseKernel, i_crit: float) -> np.ndarray:
    """Grid indices where ``I_L`` exceeds the critical current yet ``C = 0``."""
    c = concurrence_series(kernel)
    return np.flatnonzero((kernel.currents("L") > i_crit) & (c == 0.0))
