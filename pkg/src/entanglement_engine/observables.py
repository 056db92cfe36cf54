"""Currents, activities and current correlation functions.

Sign convention: ``I_j > 0`` means particles enter the two-qubit system from
bath ``j``.  In the steady state this gives ``I_L = I_S = -I_R``.

Finite-time zero-frequency noise
--------------------------------
``S_jj'(t)`` integrates the two-time correlation ``S_jj'(t, t + tau)`` over
``tau`` in ``[-t, t]``.  The delta contribution ``delta_jj' A_j(t)`` is kept
analytically; the connected part is integrated on the uniform grid of a
:class:`NoiseKernel`, separately on each side of ``tau = 0`` where the
integrand has a kink.  Each half uses the trapezoid rule plus the
Euler-Maclaurin endpoint term ``-h**2/12 (f'(b) - f'(a))``, with exact
endpoint derivatives from the generator, which makes the rule O(h**4).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OffGrid
from .liouville import (BasisTag, VectorizedState, X_INDICES, devectorize, propagate_grid,
                        spectral, steady_state, trace_row, traceless_pseudoinverse, vectorize)
from .model import EngineParams, XState, _lead, generator, jump_superoperators, rates

EARLY_TIME = 0.1  # in units of 1/Gamma; below this the wide-band results are unreliable


# -- single-state observables ------------------------------------------------

def current(j, s: XState, p: EngineParams) -> float:
    k = rates(p)
    if _lead(j) == "L":
        return k.gamma_l_plus * (s.r1 + s.r2) - k.gamma_l_minus * (s.r3 + s.r4)
    return k.gamma_r_plus * (s.r1 + s.r3) - k.gamma_r_minus * (s.r2 + s.r4)


def activity(j, s: XState, p: EngineParams) -> float:
    k = rates(p)
    if _lead(j) == "L":
        return k.gamma_l_plus * (s.r1 + s.r2) + k.gamma_l_minus * (s.r3 + s.r4)
    return k.gamma_r_plus * (s.r1 + s.r3) + k.gamma_r_minus * (s.r2 + s.r4)


def total_activity(s: XState, p: EngineParams) -> float:
    return activity("L", s, p) + activity("R", s, p)


def internal_current(s: XState, p: EngineParams) -> float:
    """Coherent particle flow from the left to the right qubit."""
    return -2 * p.g * s.c.real


def internal_activity(s: XState, p: EngineParams) -> float:
    return 4 * p.g**2 / p.big_gamma * (s.r2 + s.r3)


# -- steady state -------------------------------------------------------------

def steady_xstate(p: EngineParams, basis=BasisTag.REDUCED) -> XState:
    return devectorize(steady_state(generator(p, basis)))


def steady_state_noise(j, jp, p: EngineParams, basis=BasisTag.REDUCED) -> float:
    """Zero-frequency ``S_jj'`` of the steady state via the Drazin inverse."""
    j, jp = _lead(j), _lead(jp)
    L = generator(p, basis)
    ss = steady_state(L)
    R = traceless_pseudoinverse(L, ss).entries
    jumps = jump_superoperators(p, basis)
    tr = trace_row(L.basis)
    Ij, Ijp = jumps.current(j).entries, jumps.current(jp).entries
    v = ss.entries
    value = -(tr @ Ijp @ R @ Ij @ v) - (tr @ Ij @ R @ Ijp @ v)
    if j == jp:
        value += tr @ jumps.activity(j).entries @ v
    return float(np.real(value))


# -- time-resolved quantities ---------------------------------------------------

@dataclass(frozen=True)
class CorrelationValue:
    """Two-time correlation split into its regular part and a delta term."""

    connected: float
    has_delta: bool = False
    delta_weight: float = 0.0


@dataclass(frozen=True, eq=False)
class NoiseKernel:
    """State history on a uniform grid plus cached lagged current functionals.

    ``lag_rows[j][k]`` is the row vector ``tr . I_j . P**k`` with ``P`` the
    one-step propagator, so that
    ``Tr{I_j exp(L k h) X} = lag_rows[j][k] @ X``.
    """

    params: EngineParams
    step: float
    times: np.ndarray
    history: np.ndarray
    step_propagator: np.ndarray
    basis: BasisTag
    initial: XState
    lag_rows: dict
    generator: np.ndarray

    @classmethod
    def build(cls, p: EngineParams, initial: XState, t_max: float, step: float | None = None,
              basis=BasisTag.REDUCED, for_noise: bool = True) -> "NoiseKernel":
        """Propagate ``initial`` on ``[0, t_max]`` (``[0, 2 t_max]`` when
        ``for_noise``; the symmetric lag window needs states up to ``2t``).

        ``t_max`` and ``step`` are in units of 1/eps_s; the default step is
        ``0.01 / Gamma``.
        """
        basis = BasisTag(basis)
        if step is None:
            step = 0.01 / p.big_gamma
        n = int(round(t_max / step))
        if n < 1 or abs(n * step - t_max) > 1e-9 * max(t_max, step):
            raise OffGrid(f"t_max={t_max} is not a multiple of step={step}")
        n_hist = 2 * n if for_noise else n
        L = generator(p, basis)
        history = propagate_grid(L, vectorize(initial, basis), step, n_hist)
        P = spectral(L).expm(step)
        jumps = jump_superoperators(p, basis)
        tr = trace_row(basis)
        n_lag = n if for_noise else 0
        lag_rows = {}
        for j in "LR":
            rows = np.empty((n_lag + 1, basis.dim), dtype=complex)
            rows[0] = tr @ jumps.current(j).entries
            for k in range(1, n_lag + 1):
                rows[k] = rows[k - 1] @ P
            rows.setflags(write=False)
            lag_rows[j] = rows
        history.setflags(write=False)
        times = step * np.arange(n_hist + 1)
        times.setflags(write=False)
        return cls(p, step, times, history, P, basis, initial, lag_rows, L.entries)

    # grid bookkeeping

    @property
    def n_history(self) -> int:
        return len(self.times) - 1

    @property
    def n_noise(self) -> int:
        """Largest grid index at which the finite-time noise is available."""
        return len(self.lag_rows["L"]) - 1

    def index(self, t: float) -> int:
        k = int(round(t / self.step))
        if k < 0 or k > self.n_history or abs(k * self.step - t) > 1e-9 * max(self.step, abs(t)):
            raise OffGrid(f"t={t} is not on the kernel grid")
        return k

    def state(self, t: float) -> XState:
        return devectorize(VectorizedState(self.history[self.index(t)], self.basis))

    # series over the whole history

    @cached_property
    def _jumps(self):
        return jump_superoperators(self.params, self.basis)

    @cached_property
    def _x(self) -> np.ndarray:
        return self.history[:, X_INDICES[self.basis]]

    @cached_property
    def _current_hist(self) -> dict:
        """``I_j rho(t_k)`` for every grid point, as rows."""
        return {j: self.history @ self._jumps.current(j).entries.T for j in "LR"}

    @cached_property
    def _current_rates(self) -> dict:
        """Rows ``tr . I_j . L``: time derivative of ``I_j`` along the trajectory."""
        tr = trace_row(self.basis)
        return {j: tr @ self._jumps.current(j).entries @ self.generator for j in "LR"}

    def currents(self, j) -> np.ndarray:
        j = _lead(j)
        return np.real(self.history @ (trace_row(self.basis) @ self._jumps.current(j).entries))

    def activities(self, j) -> np.ndarray:
        j = _lead(j)
        return np.real(self.history @ (trace_row(self.basis) @ self._jumps.activity(j).entries))

    def populations(self) -> np.ndarray:
        return np.real(self._x[:, :4])

    def coherences(self) -> np.ndarray:
        return self._x[:, 4] / 1j

    def internal_currents(self) -> np.ndarray:
        return -2 * self.params.g * self.coherences().real

    def internal_activities(self) -> np.ndarray:
        pops = self.populations()
        return 4 * self.params.g**2 / self.params.big_gamma * (pops[:, 1] + pops[:, 2])

    def early_time_mask(self) -> np.ndarray:
        """Grid points before 0.1/Gamma, where results should be read with care."""
        return self.times * self.params.big_gamma < EARLY_TIME

    # correlation functions

    def _lagged(self, j, k: int, vec: np.ndarray) -> complex:
        rows = self.lag_rows[j]
        if k < len(rows):
            return rows[k] @ vec
        # lag beyond the cache: apply the propagator power directly
        row = rows[-1] @ np.linalg.matrix_power(self.step_propagator, k - len(rows) + 1)
        return row @ vec

    def two_time_correlation(self, j, jp, t: float, tp: float) -> CorrelationValue:
        j, jp = _lead(j), _lead(jp)
        m, mp = self.index(t), self.index(tp)
        I = self._current_hist
        cur_j, cur_jp = self.currents(j), self.currents(jp)
        if m >= mp:
            joint = self._lagged(j, m - mp, I[jp][mp])
        else:
            joint = self._lagged(jp, mp - m, I[j][m])
        connected = float(np.real(joint)) - cur_j[m] * cur_jp[mp]
        if j == jp and m == mp:
            return CorrelationValue(connected, True, float(self.activities(j)[m]))
        return CorrelationValue(connected)

    def _noise_at(self, j, jp, m: int, cur_j, cur_jp, act_j) -> float:
        value = act_j[m] if j == jp else 0.0
        if m == 0:
            return float(value)
        h = self.step
        L = self.generator
        rho = self.history
        I = self._current_hist
        rows_j, rows_jp = self.lag_rows[j], self.lag_rows[jp]
        dcur_jp = self._current_rates[jp]
        # tau >= 0: f(tau) = Tr{I_j' exp(L tau) I_j rho(t)} - I_j(t) I_j'(t + tau)
        fwd = np.real(rows_jp[: m + 1] @ I[j][m]) - cur_j[m] * cur_jp[m: 2 * m + 1]
        lead = L @ I[j][m]

        def dfwd(k):
            return np.real(rows_jp[k] @ lead - cur_j[m] * (dcur_jp @ rho[m + k]))

        # tau = -s <= 0: b(s) = Tr{I_j exp(L s) I_j' rho(t - s)} - I_j(t) I_j'(t - s)
        bwd = (np.real(np.einsum("ki,ki->k", rows_j[: m + 1], I[jp][m::-1]))
               - cur_j[m] * cur_jp[m::-1])
        Ijp = self._jumps.current(jp).entries

        def dbwd(k):
            x = rho[m - k]
            return np.real(rows_j[k] @ (L @ (Ijp @ x) - Ijp @ (L @ x)) + cur_j[m] * (dcur_jp @ x))

        for f, df in ((fwd, dfwd), (bwd, dbwd)):
            trap = h * (f.sum() - 0.5 * (f[0] + f[-1]))
            value += trap - h**2 / 12 * (df(m) - df(0))
        return float(value)

    def finite_time_noise(self, j, jp, t: float) -> float:
        j, jp = _lead(j), _lead(jp)
        m = self.index(t)
        if m > self.n_noise:
            raise OffGrid(f"t={t} exceeds the noise window of this kernel")
        return self._noise_at(j, jp, m, self.currents(j), self.currents(jp), self.activities(j))

    def noise_series(self, j, jp, indices=None) -> np.ndarray:
        """``S_jj'(t_k)`` for each grid index (default: every index with noise support)."""
        j, jp = _lead(j), _lead(jp)
        if indices is None:
            indices = range(self.n_noise + 1)
        cur_j, cur_jp, act_j = self.currents(j), self.currents(jp), self.activities(j)
        out = []
        for m in indices:
            if m < 0 or m > self.n_noise:
                raise OffGrid(f"grid index {m} outside the noise window")
            out.append(self._noise_at(j, jp, int(m), cur_j, cur_jp, act_j))
        return np.array(out)


def two_time_correlation(j, jp, t: float, tp: float, kernel: NoiseKernel) -> CorrelationValue:
    return kernel.two_time_correlation(j, jp, t, tp)


def finite_time_zero_freq_noise(j, jp, t: float, kernel: NoiseKernel) -> float:
    return kernel.finite_time_noise(j, jp, t)


def conservation_residual(kernel: NoiseKernel, t: float) -> tuple[float, float]:
    """Residuals of ``dn_L/dt = -I_S + I_L`` and ``dn_R/dt = I_S + I_R``.

    Occupation derivatives come from centred differences, so both residuals
    are O(step**2).
    """
    m = kernel.index(t)
    if m < 1 or m >= kernel.n_history:
        raise OffGrid("conservation residual needs an interior grid point")
    pops = kernel.populations()
    n_l = pops[:, 2] + pops[:, 3]
    n_r = pops[:, 1] + pops[:, 3]
    h = kernel.step
    dn_l = (n_l[m + 1] - n_l[m - 1]) / (2 * h)
    dn_r = (n_r[m + 1] - n_r[m - 1]) / (2 * h)
    i_s = kernel.internal_currents()[m]
    return (float(dn_l - (-i_s + kernel.currents("L")[m])),
            float(dn_r - (i_s + kernel.currents("R")[m])))
