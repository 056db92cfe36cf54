"""Finite-time kinetic uncertainty ratios.

Two ratios are tracked along a trajectory::

    R_L(t)    = S_LL(t) A(t) / I_L(t)**2
    R_asym(t) = (S_LL + S_RR - S_LR - S_RL)(t) A(t) / (I_L(t) - I_R(t))**2

with ``A = A_L + A_R`` by default, or ``A_L + A_R + A_S`` (internal jumps
included) in ``ActivityMode.WITH_INTERNAL``.  A ratio below one violates the
classical bound.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ZeroCurrent
from .observables import NoiseKernel

CURRENT_FLOOR = 1e-14


class ActivityMode(str, enum.Enum):
    BATHS_ONLY = "baths_only"
    WITH_INTERNAL = "with_internal"


def _activity(kernel: NoiseKernel, m: int, mode: ActivityMode) -> float:
    a = kernel.activities("L")[m] + kernel.activities("R")[m]
    if ActivityMode(mode) is ActivityMode.WITH_INTERNAL:
        a += kernel.internal_activities()[m]
    return a


def kur_left(kernel: NoiseKernel, t: float, mode=ActivityMode.BATHS_ONLY) -> float:
    m = kernel.index(t)
    current = kernel.currents("L")[m]
    if abs(current) <= CURRENT_FLOOR:
        raise ZeroCurrent(f"I_L({t}) vanishes")
    return kernel.finite_time_noise("L", "L", t) * _activity(kernel, m, mode) / current**2


def kur_asym(kernel: NoiseKernel, t: float, mode=ActivityMode.BATHS_ONLY) -> float:
    m = kernel.index(t)
    net = kernel.currents("L")[m] - kernel.currents("R")[m]
    if abs(net) <= CURRENT_FLOOR:
        raise ZeroCurrent(f"I_L - I_R vanishes at t={t}")
    noise = (kernel.finite_time_noise("L", "L", t) + kernel.finite_time_noise("R", "R", t)
             - kernel.finite_time_noise("L", "R", t) - kernel.finite_time_noise("R", "L", t))
    return noise * _activity(kernel, m, mode) / net**2


@dataclass(frozen=True, eq=False)
class KurSeries:
    """Ratios on a time grid given in units of 1/Gamma; NaN marks a vanishing current."""

    grid: np.ndarray
    r_left: np.ndarray
    r_asym: np.ndarray
    activity_mode: ActivityMode


def kur_series(kernel: NoiseKernel, mode=ActivityMode.BATHS_ONLY, indices=None) -> KurSeries:
    """Both ratios at the requested grid indices (default: the full noise window)."""
    mode = ActivityMode(mode)
    if indices is None:
        indices = np.arange(kernel.n_noise + 1)
    indices = np.asarray(indices, dtype=int)
    s = {(a, b): kernel.noise_series(a, b, indices) for a in "LR" for b in "LR"}
    i_l = kernel.currents("L")[indices]
    i_r = kernel.currents("R")[indices]
    act = kernel.activities("L")[indices] + kernel.activities("R")[indices]
    if mode is ActivityMode.WITH_INTERNAL:
        act = act + kernel.internal_activities()[indices]
    net = i_l - i_r
    with np.errstate(divide="ignore", invalid="ignore"):
        r_left = np.where(np.abs(i_l) > CURRENT_FLOOR, s["L", "L"] * act / i_l**2, np.nan)
        asym_noise = s["L", "L"] + s["R", "R"] - s["L", "R"] - s["R", "L"]
        r_asym = np.where(np.abs(net) > CURRENT_FLOOR, asym_noise * act / net**2, np.nan)
    grid = kernel.times[indices] * kernel.params.big_gamma
    return KurSeries(grid, r_left, r_asym, mode)


def violation_windows(series: KurSeries, which: str = "left") -> list[tuple[float, float]]:
    """Maximal runs of grid points where the ratio is below one, as (start, end) times."""
    if which not in ("left", "asym"):
        raise ValueError(f"which must be 'left' or 'asym', got {which!r}")
    values = series.r_left if which == "left" else series.r_asym
    below = np.nan_to_num(values, nan=np.inf) < 1.0
    windows = []
    start = None
    for k, flag in enumerate(below):
        if flag and start is None:
            start = k
        elif not flag and start is not None:
            windows.append((float(series.grid[start]), float(series.grid[k - 1])))
            start = None
    if start is not None:
        windows.append((float(series.grid[start]), float(series.grid[-1])))
    return windows
